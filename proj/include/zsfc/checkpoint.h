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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "zsfc/model.h"

namespace zsfc {

// Binary checkpoint, all integers and floats little-endian:
//
//   "ZSFC"                      magic
//   u32 version                 kCheckpointVersion
//   u32 variant  u32 dim  u32 n_items  u32 n_categories  u64 seed
//   u32 tensor_count
//   tensor_count x { u32 name_len, name bytes, u32 rows, u32 cols, u64 offset }
//   payload                     row-major f32 tensors; offsets are relative
//                               to the payload start
inline constexpr std::uint32_t kCheckpointVersion = 1;

void save_checkpoint(const ModelParams& params, std::ostream& out);
void save_checkpoint(const ModelParams& params, const std::filesystem::path& path);
ModelParams load_checkpoint(std::istream& in);
ModelParams load_checkpoint(const std::filesystem::path& path);

std::vector<char> checkpoint_bytes(const ModelParams& params);

}  // namespace zsfc
