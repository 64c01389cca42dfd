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
#include "zsfc/catalog.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>

#include "tsv.h"

namespace zsfc {

CategoryHierarchy CategoryHierarchy::from_rows(const std::vector<std::pair<std::string, std::string>>& rows) {
  CategoryHierarchy h;
  for (const auto& [key, parent] : rows) {
    if (key.empty()) throw DataError("empty category key");
    if (!h.index_.emplace(key, static_cast<CategoryId>(h.keys_.size())).second) {
      throw DataError("duplicate category '" + key + "'");
    }
    h.keys_.push_back(key);
  }
  h.parents_.resize(h.keys_.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& parent = rows[i].second;
    if (parent.empty()) continue;
    auto it = h.index_.find(parent);
    if (it == h.index_.end()) {
      throw DataError("category '" + rows[i].first + "' has unknown parent '" + parent + "'");
    }
    h.parents_[i] = it->second;
  }
  // Each walk up the forest must terminate within size() steps.
  for (std::size_t i = 0; i < h.size(); ++i) {
    std::size_t steps = 0;
    for (auto node = h.parents_[i]; node; node = h.parents_[*node]) {
      if (++steps > h.size() || *node == i) {
        throw DataError("cycle in category hierarchy at '" + h.keys_[i] + "'");
      }
    }
  }
  return h;
}

std::optional<CategoryId> CategoryHierarchy::find(std::string_view key) const {
  auto it = index_.find(std::string(key));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::uint64_t NegativePairList::key(CategoryId a, CategoryId b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

void NegativePairList::add(CategoryId a, CategoryId b) { pairs_.insert(key(a, b)); }

bool NegativePairList::contains(CategoryId a, CategoryId b) const { return pairs_.count(key(a, b)) != 0; }

std::vector<std::pair<CategoryId, CategoryId>> NegativePairList::sorted_pairs() const {
  std::vector<std::uint64_t> keys(pairs_.begin(), pairs_.end());
  std::sort(keys.begin(), keys.end());
  std::vector<std::pair<CategoryId, CategoryId>> out;
  out.reserve(keys.size());
  for (auto k : keys) out.emplace_back(static_cast<CategoryId>(k >> 32), static_cast<CategoryId>(k & 0xffffffffu));
  return out;
}

Catalog::Catalog(std::vector<CatalogEntry> entries, CategoryHierarchy hierarchy, NegativePairList negatives,
                 std::optional<std::size_t> feature_dim)
    : entries_(std::move(entries)), hierarchy_(std::move(hierarchy)), negatives_(std::move(negatives)) {
  if (feature_dim) feature_dim_ = *feature_dim;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    if (!index_.emplace(e.key, static_cast<ItemId>(i)).second) throw DataError("duplicate item '" + e.key + "'");
    if (e.category >= hierarchy_.size()) throw DataError("item '" + e.key + "' has unknown category");
    if (e.image_features.empty()) continue;
    if (feature_dim_ == 0) feature_dim_ = e.image_features.size();
    if (e.image_features.size() != feature_dim_) {
      throw DataError("item '" + e.key + "' has " + std::to_string(e.image_features.size()) +
                      " image features, expected " + std::to_string(feature_dim_));
    }
    for (float f : e.image_features) {
      if (!std::isfinite(f)) throw DataError("item '" + e.key + "' has a non-finite image feature");
    }
  }
}

const CatalogEntry& Catalog::entry(ItemId item) const {
  if (item >= entries_.size()) throw std::out_of_range("unknown item id " + std::to_string(item));
  return entries_[item];
}

std::optional<ItemId> Catalog::find(std::string_view key) const {
  auto it = index_.find(std::string(key));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

ItemId Catalog::require(std::string_view key) const {
  auto id = find(key);
  if (!id) throw DataError("unknown item '" + std::string(key) + "'");
  return *id;
}

bool Catalog::all_have_features() const {
  return !entries_.empty() &&
         std::all_of(entries_.begin(), entries_.end(), [](const auto& e) { return !e.image_features.empty(); });
}

bool Catalog::is_complementary(ItemId a, ItemId b) const {
  return categories_complementary(category(a), category(b));
}

std::vector<ItemId> Catalog::complementary_filter(ItemId base, std::span<const ItemId> items) const {
  const CategoryId base_cat = category(base);
  std::vector<ItemId> out;
  out.reserve(items.size());
  for (ItemId item : items) {
    if (categories_complementary(base_cat, category(item))) out.push_back(item);
  }
  return out;
}

std::vector<char> Catalog::complementary_category_mask(CategoryId category) const {
  std::vector<char> mask(hierarchy_.size());
  for (CategoryId c = 0; c < mask.size(); ++c) mask[c] = categories_complementary(category, c);
  return mask;
}

Catalog load_catalog(const CatalogPaths& paths, std::optional<std::size_t> feature_dim) {
  std::vector<std::string_view> f;

  std::vector<std::pair<std::string, std::string>> rows;
  {
    detail::TsvReader in(paths.hierarchy);
    while (in.next(f)) {
      if (f.size() != 2 || f[0].empty() || f[1].empty()) in.fail("expected 'category<TAB>parent|ROOT'");
      rows.emplace_back(std::string(f[0]), f[1] == "ROOT" ? std::string() : std::string(f[1]));
    }
  }
  CategoryHierarchy hierarchy = CategoryHierarchy::from_rows(rows);

  NegativePairList negatives;
  {
    detail::TsvReader in(paths.negative_pairs);
    while (in.next(f)) {
      if (f.size() != 2) in.fail("expected 'category_a<TAB>category_b'");
      auto a = hierarchy.find(f[0]);
      auto b = hierarchy.find(f[1]);
      if (!a || !b) in.fail("unknown category in negative pair");
      negatives.add(*a, *b);
    }
  }

  std::vector<CatalogEntry> entries;
  std::optional<std::size_t> dim = feature_dim;
  {
    detail::TsvReader in(paths.catalog);
    while (in.next(f)) {
      if (f.size() < 2 || f.size() > 3 || f[0].empty()) in.fail("expected 'item<TAB>category[<TAB>features]'");
      CatalogEntry e;
      e.key = std::string(f[0]);
      auto cat = hierarchy.find(f[1]);
      if (!cat) in.fail("unknown category '" + std::string(f[1]) + "'");
      e.category = *cat;
      if (f.size() == 3 && !f[2].empty()) {
        std::string_view rest = f[2];
        for (;;) {
          auto comma = rest.find(',');
          float v = 0;
          if (!detail::parse_number(rest.substr(0, comma), v) || !std::isfinite(v)) in.fail("bad image feature");
          e.image_features.push_back(v);
          if (comma == std::string_view::npos) break;
          rest.remove_prefix(comma + 1);
        }
        if (!dim) dim = e.image_features.size();
        if (e.image_features.size() != *dim) {
          in.fail("image feature length " + std::to_string(e.image_features.size()) + " != " + std::to_string(*dim));
        }
      }
      entries.push_back(std::move(e));
    }
  }
  try {
    return Catalog(std::move(entries), std::move(hierarchy), std::move(negatives), dim);
  } catch (const DataError& e) {
    throw DataError(paths.catalog.filename().string() + ": " + e.what());
  }
}

void write_catalog(const Catalog& catalog, const CatalogPaths& paths) {
  const auto& h = catalog.hierarchy();
  {
    std::ofstream out(paths.hierarchy);
    out << "# category\tparent\n";
    for (CategoryId c = 0; c < h.size(); ++c) {
      auto p = h.parent(c);
      out << h.key(c) << '\t' << (p ? h.key(*p) : std::string("ROOT")) << '\n';
    }
  }
  {
    std::ofstream out(paths.negative_pairs);
    out << "# category_a\tcategory_b\n";
    for (auto [a, b] : catalog.negatives().sorted_pairs()) out << h.key(a) << '\t' << h.key(b) << '\n';
  }
  std::ofstream out(paths.catalog);
  out << "# item\tcategory\timage_features\n";
  out << std::setprecision(9);
  for (ItemId i = 0; i < catalog.size(); ++i) {
    const auto& e = catalog.entry(i);
    out << e.key << '\t' << h.key(e.category);
    if (!e.image_features.empty()) {
      out << '\t';
      for (std::size_t k = 0; k < e.image_features.size(); ++k) out << (k ? "," : "") << e.image_features[k];
    }
    out << '\n';
  }
}

}  // namespace zsfc
