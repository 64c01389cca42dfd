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

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "zsfc/catalog.h"
#include "zsfc/interactions.h"
#include "zsfc/rng.h"
#include "zsfc/sampler.h"
#include "zsfc/synth.h"

namespace zsfc::testing {

inline std::filesystem::path fixture_dir() { return ZSFC_FIXTURE_DIR; }
inline std::string cli_path() { return ZSFC_CLI_PATH; }

inline CatalogPaths fixture_catalog_paths() {
  const auto d = fixture_dir();
  return {d / "catalog.tsv", d / "hierarchy.tsv", d / "negative_pairs.tsv"};
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto d = std::filesystem::temp_directory_path() / ("zsfc_test_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(d);
  std::filesystem::create_directories(d);
  return d;
}

/// Runs the CLI with `args`, returns its exit status; stdout/stderr go to files in `dir`.
inline int run_cli(const std::string& args, const std::filesystem::path& dir, const std::string& tag = "cli") {
  const std::string cmd = "\"" + cli_path() + "\" " + args + " >\"" + (dir / (tag + ".out")).string() + "\" 2>\"" +
                          (dir / (tag + ".err")).string() + "\"";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

/// Small synthetic catalog: `n_items` items over `n_categories` leaves with
/// image features of width `feature_dim`.
inline Catalog small_catalog(std::size_t n_items, std::size_t n_categories, std::size_t feature_dim,
                             std::uint64_t seed) {
  WorldConfig c;
  c.n_items = n_items;
  c.n_categories = n_categories;
  c.feature_dim = feature_dim;
  c.seed = seed;
  return generate_world(c).catalog;
}

/// Random context with up to 15 clicks and 5 orders; base != target.
inline TrainingExample random_example(std::size_t vocab, Rng& rng, std::size_t max_clicks = 15,
                                      std::size_t max_orders = 5) {
  std::uniform_int_distribution<ItemId> item(0, static_cast<ItemId>(vocab - 1));
  TrainingExample ex;
  ex.clicks.resize(std::uniform_int_distribution<std::size_t>(0, max_clicks)(rng));
  ex.orders.resize(std::uniform_int_distribution<std::size_t>(0, max_orders)(rng));
  for (auto& c : ex.clicks) c = item(rng);
  for (auto& o : ex.orders) o = item(rng);
  ex.base = item(rng);
  do {
    ex.target = item(rng);
  } while (ex.target == ex.base);
  return ex;
}

}  // namespace zsfc::testing
