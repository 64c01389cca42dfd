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
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "zsfc/common.h"

namespace zsfc {

/// Category forest. Node ids are dense in hierarchy-file order.
class CategoryHierarchy {
 public:
  /// Builds a hierarchy from (key, parent key or empty) rows; validates
  /// duplicates, dangling parents and cycles.
  static CategoryHierarchy from_rows(const std::vector<std::pair<std::string, std::string>>& rows);

  std::size_t size() const { return keys_.size(); }
  const std::string& key(CategoryId id) const { return keys_.at(id); }
  std::optional<CategoryId> parent(CategoryId id) const { return parents_.at(id); }
  std::optional<CategoryId> find(std::string_view key) const;

 private:
  std::vector<std::string> keys_;
  std::vector<std::optional<CategoryId>> parents_;
  std::unordered_map<std::string, CategoryId> index_;
};

/// Unordered category pairs that must never be recommended together.
class NegativePairList {
 public:
  void add(CategoryId a, CategoryId b);
  bool contains(CategoryId a, CategoryId b) const;
  std::size_t size() const { return pairs_.size(); }
  /// Canonical (low, high) pairs in ascending order.
  std::vector<std::pair<CategoryId, CategoryId>> sorted_pairs() const;

 private:
  static std::uint64_t key(CategoryId a, CategoryId b);
  std::unordered_set<std::uint64_t> pairs_;
};

struct CatalogEntry {
  std::string key;
  CategoryId category = 0;
  std::vector<float> image_features;  // empty when absent
};

/// Item metadata plus the complementary predicate. Immutable after load.
class Catalog {
 public:
  Catalog() = default;
  Catalog(std::vector<CatalogEntry> entries, CategoryHierarchy hierarchy, NegativePairList negatives,
          std::optional<std::size_t> feature_dim = std::nullopt);

  std::size_t size() const { return entries_.size(); }
  const CatalogEntry& entry(ItemId item) const;
  CategoryId category(ItemId item) const { return entry(item).category; }
  const std::string& key(ItemId item) const { return entry(item).key; }
  std::optional<ItemId> find(std::string_view key) const;
  ItemId require(std::string_view key) const;

  const CategoryHierarchy& hierarchy() const { return hierarchy_; }
  const NegativePairList& negatives() const { return negatives_; }

  /// Width of the image feature vectors (0 when no entry carries features).
  std::size_t feature_dim() const { return feature_dim_; }
  bool all_have_features() const;

  /// Different leaf categories and not a negative category pair.
  bool is_complementary(ItemId a, ItemId b) const;
  bool categories_complementary(CategoryId a, CategoryId b) const {
    return a != b && !negatives_.contains(a, b);
  }

  /// Order-preserving subsequence of `items` complementary to `base`.
  std::vector<ItemId> complementary_filter(ItemId base, std::span<const ItemId> items) const;

  /// mask[c] is true iff category c is complementary to `category`.
  std::vector<char> complementary_category_mask(CategoryId category) const;

 private:
  std::vector<CatalogEntry> entries_;
  CategoryHierarchy hierarchy_;
  NegativePairList negatives_;
  std::unordered_map<std::string, ItemId> index_;
  std::size_t feature_dim_ = 0;
};

struct CatalogPaths {
  std::filesystem::path catalog;
  std::filesystem::path hierarchy;
  std::filesystem::path negative_pairs;
};

/// Loads catalog.tsv, hierarchy.tsv and negative_pairs.tsv. When
/// `feature_dim` is given every feature row must have exactly that length;
/// otherwise the first feature row fixes it. Throws DataError with
/// file:line context.
Catalog load_catalog(const CatalogPaths& paths, std::optional<std::size_t> feature_dim = std::nullopt);

void write_catalog(const Catalog& catalog, const CatalogPaths& paths);

}  // namespace zsfc
