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

#include "zsfc/synth.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "zsfc/rng.h"

namespace zsfc {

namespace {

constexpr std::size_t kMinComplements = 5;
constexpr std::size_t kMaxComplements = 20;
constexpr std::size_t kCategoriesPerGroup = 8;

std::string padded(const char* prefix, std::size_t i, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%0*zu", prefix, width, i);
  return buf;
}

int width_for(std::size_t n) { return static_cast<int>(std::to_string(n > 0 ? n - 1 : 0).size()); }

}  // namespace

void WorldConfig::validate() const {
  auto fraction = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (n_items == 0 || n_categories < 2 || n_users == 0 || events_per_user == 0 || days == 0 || cluster_size < 2 ||
      n_segments == 0) {
    throw std::invalid_argument("world sizes must be positive (and at least two categories)");
  }
  if (!fraction(complementary_affinity) || !fraction(negative_pair_fraction)) {
    throw std::invalid_argument("affinity and negative-pair fraction must lie in [0, 1]");
  }
  if (n_items < n_categories) throw std::invalid_argument("need at least one item per category");
  if (n_segments > n_items) throw std::invalid_argument("more taste segments than items");
  if (n_items <= kMinComplements) throw std::invalid_argument("too few items for planted complement sets");
}

World generate_world(const WorldConfig& config) {
  config.validate();
  Rng rng = make_rng(config.seed, "world");
  const std::size_t n_leaf = config.n_categories;
  const std::size_t n_groups = std::max<std::size_t>(1, (n_leaf + kCategoriesPerGroup - 1) / kCategoriesPerGroup);

  // Hierarchy: group parents first, then leaves dealt round-robin to groups.
  std::vector<std::pair<std::string, std::string>> rows;
  for (std::size_t g = 0; g < n_groups; ++g) rows.emplace_back(padded("group", g, width_for(n_groups)), "");
  for (std::size_t c = 0; c < n_leaf; ++c) {
    rows.emplace_back(padded("cat", c, width_for(n_leaf)), rows[c % n_groups].first);
  }
  CategoryHierarchy hierarchy = CategoryHierarchy::from_rows(rows);
  auto leaf = [&](std::size_t c) { return static_cast<CategoryId>(n_groups + c); };

  // Negative pairs among leaves.
  NegativePairList negatives;
  {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t a = 0; a < n_leaf; ++a) {
      for (std::size_t b = a + 1; b < n_leaf; ++b) pairs.emplace_back(a, b);
    }
    std::shuffle(pairs.begin(), pairs.end(), rng);
    const auto n_neg = static_cast<std::size_t>(std::llround(config.negative_pair_fraction * pairs.size()));
    for (std::size_t i = 0; i < n_neg; ++i) negatives.add(leaf(pairs[i].first), leaf(pairs[i].second));
  }

  // Categories dealt uniformly, then shuffled over items.
  std::vector<CategoryId> item_category(config.n_items);
  for (std::size_t i = 0; i < config.n_items; ++i) item_category[i] = leaf(i % n_leaf);
  std::shuffle(item_category.begin(), item_category.end(), rng);

  // Style clusters.
  World world;
  std::vector<ItemId> order(config.n_items);
  std::iota(order.begin(), order.end(), ItemId{0});
  std::shuffle(order.begin(), order.end(), rng);
  const std::size_t n_clusters = std::max<std::size_t>(1, config.n_items / config.cluster_size);
  world.cluster.resize(config.n_items);
  std::vector<std::vector<ItemId>> members(n_clusters);
  for (std::size_t i = 0; i < order.size(); ++i) {
    world.cluster[order[i]] = static_cast<std::uint32_t>(i % n_clusters);
    members[i % n_clusters].push_back(order[i]);
  }

  std::vector<CatalogEntry> entries(config.n_items);
  {
    std::normal_distribution<float> gauss(0.0f, 1.0f);
    const float style_scale = 0.1f;
    const float noise_scale = 0.02f;
    std::vector<std::vector<float>> style(n_clusters, std::vector<float>(config.feature_dim));
    for (auto& s : style) {
      for (auto& v : s) v = style_scale * gauss(rng);
    }
    for (std::size_t i = 0; i < config.n_items; ++i) {
      auto& e = entries[i];
      e.key = padded("item", i, width_for(config.n_items));
      e.category = item_category[i];
      e.image_features.resize(config.feature_dim);
      for (std::size_t k = 0; k < config.feature_dim; ++k) {
        e.image_features[k] = style[world.cluster[i]][k] + noise_scale * gauss(rng);
      }
    }
  }
  world.catalog = Catalog(std::move(entries), std::move(hierarchy), std::move(negatives),
                          config.feature_dim ? std::optional<std::size_t>(config.feature_dim) : std::nullopt);
  const Catalog& catalog = world.catalog;

  // Planted complements: complementary cluster-mates, topped up from other
  // clusters when a cluster is too homogeneous, capped at the maximum.
  world.complements.resize(config.n_items);
  for (ItemId i = 0; i < config.n_items; ++i) {
    auto& comp = world.complements[i];
    for (ItemId j : members[world.cluster[i]]) {
      if (catalog.is_complementary(i, j)) comp.push_back(j);
    }
    if (comp.size() > kMaxComplements) {
      std::shuffle(comp.begin(), comp.end(), rng);
      comp.resize(kMaxComplements);
    }
    if (comp.size() < kMinComplements) {
      std::vector<ItemId> pool;
      for (ItemId j = 0; j < config.n_items; ++j) {
        if (catalog.is_complementary(i, j) && std::find(comp.begin(), comp.end(), j) == comp.end()) pool.push_back(j);
      }
      std::shuffle(pool.begin(), pool.end(), rng);
      for (std::size_t p = 0; p < pool.size() && comp.size() < kMinComplements; ++p) comp.push_back(pool[p]);
    }
    if (comp.size() < kMinComplements) {
      throw std::invalid_argument("item " + catalog.key(i) + " cannot get " + std::to_string(kMinComplements) +
                                  " complements under the negative pairs");
    }
    std::sort(comp.begin(), comp.end());
  }

  // Taste segments, dealt uniformly and independent of category and style.
  Rng seg_rng = make_rng(config.seed, "segments");
  world.segment.resize(config.n_items);
  for (std::size_t i = 0; i < config.n_items; ++i) world.segment[i] = static_cast<std::uint32_t>(i % config.n_segments);
  std::shuffle(world.segment.begin(), world.segment.end(), seg_rng);
  return world;
}

std::vector<UserHistory> generate_histories(const World& world, const WorldConfig& config) {
  config.validate();
  const Catalog& catalog = world.catalog;
  const std::size_t n_items = catalog.size();
  Rng rng = make_rng(config.seed, "histories");

  std::vector<std::vector<ItemId>> by_segment(config.n_segments);
  for (ItemId i = 0; i < n_items; ++i) by_segment[world.segment[i]].push_back(i);

  constexpr std::size_t kEventsPerSession = 5;
  const Timestamp span = static_cast<Timestamp>(config.days) * kSecondsPerDay;
  constexpr Timestamp kSessionSlack = 6 * kSecondsPerHour;
  const Timestamp latest_start = std::max<Timestamp>(1, span - kSessionSlack);

  std::uniform_int_distribution<ItemId> any_item(0, static_cast<ItemId>(n_items - 1));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto pick = [&](const std::vector<ItemId>& v) { return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)]; };
  auto between = [&](Timestamp lo, Timestamp hi) { return std::uniform_int_distribution<Timestamp>(lo, hi)(rng); };

  std::vector<UserHistory> out(config.n_users);
  for (std::size_t u = 0; u < config.n_users; ++u) {
    UserHistory& h = out[u];
    h.user = u + 1;

    const auto taste = std::uniform_int_distribution<std::uint32_t>(0, static_cast<std::uint32_t>(config.n_segments - 1))(rng);
    auto in_taste = [&](ItemId i) { return world.segment[i] == taste; };
    auto taste_item = [&] { return pick(by_segment[taste]); };

    const std::size_t sessions = std::max<std::size_t>(1, config.events_per_user / kEventsPerSession);
    for (std::size_t s = 0; s < sessions; ++s) {
      Timestamp t = kSynthEpoch + between(0, latest_start - 1);
      auto emit = [&](ItemId item, EventKind kind, Timestamp at) { h.events.push_back({item, kind, at}); };

      const std::size_t browse = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
      for (std::size_t b = 0; b < browse; ++b) {
        emit(unit(rng) < 0.3 ? taste_item() : any_item(rng), EventKind::Click, t);
        t += between(30, 600);
      }
      const ItemId base = any_item(rng);
      emit(base, EventKind::Click, t);

      if (unit(rng) < config.complementary_affinity) {
        // Taste decides which planted complement gets bought.
        const auto& comp = world.complements[base];
        std::vector<ItemId> liked;
        for (ItemId c : comp) {
          if (in_taste(c)) liked.push_back(c);
        }
        const ItemId target = !liked.empty() && unit(rng) < 0.9 ? pick(liked) : pick(comp);
        const Timestamp click_at = t + between(60, 50 * 60);
        emit(target, EventKind::Click, click_at);
        emit(target, EventKind::Order, click_at + between(60, 4 * kSecondsPerHour));
      } else {
        const ItemId other = any_item(rng);
        const Timestamp click_at = t + between(60, 50 * 60);
        emit(other, EventKind::Click, click_at);
        emit(other, EventKind::Order, click_at + between(60, 4 * kSecondsPerHour));
      }
    }
    sort_history(h);
  }
  return out;
}

WorldPaths WorldPaths::in(const std::filesystem::path& dir) {
  WorldPaths p;
  p.catalog = {dir / "catalog.tsv", dir / "hierarchy.tsv", dir / "negative_pairs.tsv"};
  p.complements = dir / "complements.tsv";
  p.interactions = dir / "interactions.tsv";
  return p;
}

void write_world(const World& world, const std::vector<UserHistory>& histories, const WorldPaths& paths) {
  for (const auto* p : {&paths.catalog.catalog, &paths.catalog.hierarchy, &paths.catalog.negative_pairs,
                        &paths.complements, &paths.interactions}) {
    if (p->has_parent_path()) std::filesystem::create_directories(p->parent_path());
  }
  write_catalog(world.catalog, paths.catalog);
  {
    std::ofstream out(paths.complements);
    out << "# item\tcomplements\n";
    for (ItemId i = 0; i < world.complements.size(); ++i) {
      out << world.catalog.key(i) << '\t';
      for (std::size_t j = 0; j < world.complements[i].size(); ++j) {
        out << (j ? "," : "") << world.catalog.key(world.complements[i][j]);
      }
      out << '\n';
    }
  }
  write_interactions(histories, world.catalog, paths.interactions);
}

}  // namespace zsfc
