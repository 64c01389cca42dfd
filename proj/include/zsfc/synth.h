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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "zsfc/catalog.h"
#include "zsfc/interactions.h"

namespace zsfc {

struct WorldConfig {
  std::size_t n_items = 500;
  std::size_t n_categories = 40;        // leaf categories; group parents are added on top
  std::size_t feature_dim = 32;         // image feature width (0 disables features)
  std::size_t n_users = 2000;
  std::size_t events_per_user = 40;     // approximate
  double complementary_affinity = 0.8;  // share of purchases drawn from a planted complement
  double negative_pair_fraction = 0.05;
  std::size_t days = 9;
  std::size_t cluster_size = 13;
  std::size_t n_segments = 8;  // taste segments; each user prefers one
  std::uint64_t seed = 0;

  void validate() const;
};

inline constexpr Timestamp kSynthEpoch = 1577836800;  // 2020-01-01T00:00:00Z

struct World {
  Catalog catalog;
  /// Planted complements per item, ascending by id; every entry is
  /// complementary to its item.
  std::vector<std::vector<ItemId>> complements;
  std::vector<std::uint32_t> cluster;  // style cluster per item
  std::vector<std::uint32_t> segment;  // taste segment per item
};

/// Catalog with categories dealt uniformly, group parents, negative category
/// pairs, style-cluster image features and 5..20 planted complements per
/// item. Throws std::invalid_argument when the config is inconsistent or
/// the complement sets cannot be satisfied.
World generate_world(const WorldConfig& config);

/// Click browsing with a persistent per-user taste; after a base click the
/// user, with probability complementary_affinity, clicks and then orders a
/// planted complement of it, otherwise orders an unrelated item.
std::vector<UserHistory> generate_histories(const World& world, const WorldConfig& config);

struct WorldPaths {
  CatalogPaths catalog;
  std::filesystem::path complements;
  std::filesystem::path interactions;

  static WorldPaths in(const std::filesystem::path& dir);
};

void write_world(const World& world, const std::vector<UserHistory>& histories, const WorldPaths& paths);

}  // namespace zsfc
