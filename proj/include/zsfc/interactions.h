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
#include <vector>

#include "zsfc/catalog.h"
#include "zsfc/common.h"

namespace zsfc {

enum class EventKind : std::uint8_t { Click = 0, Order = 1 };

struct InteractionEvent {
  ItemId item = 0;
  EventKind kind = EventKind::Click;
  Timestamp timestamp = 0;

  bool operator==(const InteractionEvent&) const = default;
};

/// One user's events, sorted ascending by timestamp (stable w.r.t. input order).
struct UserHistory {
  std::uint64_t user = 0;
  std::vector<InteractionEvent> events;
};

/// Stable-sorts each history by timestamp. Idempotent.
void sort_history(UserHistory& history);

/// Parses interactions.tsv (user, unix seconds, click|order, item key) and
/// groups it into histories ordered by user id.
std::vector<UserHistory> load_interactions(const std::filesystem::path& path, const Catalog& catalog);

void write_interactions(const std::vector<UserHistory>& histories, const Catalog& catalog,
                        const std::filesystem::path& path);

/// Largest event timestamp over all histories (0 for an empty corpus).
Timestamp corpus_end(const std::vector<UserHistory>& histories);

}  // namespace zsfc
