// Copyright 2026 The zsfc Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "zsfc/catalog.h"
#include "zsfc/sampler.h"

namespace zsfc {

// JSON-lines dataset: one object per example with item keys as strings,
//   {"user":7,"base":"i3","target":"i9","base_time":1577836800,
//    "clicks":["i1","i2"],"orders":[],"ordered_within_day":true}

void write_dataset(std::ostream& out, std::span<const TrainingExample> examples, const Catalog& catalog);
void write_dataset(const std::filesystem::path& path, std::span<const TrainingExample> examples,
                   const Catalog& catalog);
std::vector<TrainingExample> read_dataset(const std::filesystem::path& path, const Catalog& catalog);

}  // namespace zsfc
