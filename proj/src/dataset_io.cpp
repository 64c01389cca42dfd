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
#include "zsfc/dataset_io.h"

#include <fstream>
#include <json.hpp>
#include <string>

namespace zsfc {

using nlohmann::json;

void write_dataset(std::ostream& out, std::span<const TrainingExample> examples, const Catalog& catalog) {
  auto keys = [&](const std::vector<ItemId>& ids) {
    json arr = json::array();
    for (ItemId i : ids) arr.push_back(catalog.key(i));
    return arr;
  };
  for (const auto& e : examples) {
    json j;
    j["user"] = e.user;
    j["base"] = catalog.key(e.base);
    j["target"] = catalog.key(e.target);
    j["base_time"] = e.base_time;
    j["clicks"] = keys(e.clicks);
    j["orders"] = keys(e.orders);
    j["ordered_within_day"] = e.ordered_within_day;
    out << j.dump() << '\n';
  }
}

void write_dataset(const std::filesystem::path& path, std::span<const TrainingExample> examples,
                   const Catalog& catalog) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  write_dataset(out, examples, catalog);
}

std::vector<TrainingExample> read_dataset(const std::filesystem::path& path, const Catalog& catalog) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::vector<TrainingExample> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      TrainingExample e;
      e.user = j.at("user").get<std::uint64_t>();
      e.base = catalog.require(j.at("base").get<std::string>());
      e.target = catalog.require(j.at("target").get<std::string>());
      e.base_time = j.at("base_time").get<Timestamp>();
      for (const auto& k : j.at("clicks")) e.clicks.push_back(catalog.require(k.get<std::string>()));
      for (const auto& k : j.at("orders")) e.orders.push_back(catalog.require(k.get<std::string>()));
      e.ordered_within_day = j.at("ordered_within_day").get<bool>();
      out.push_back(std::move(e));
    } catch (const json::exception& err) {
      throw DataError(path.filename().string() + ":" + std::to_string(line_no) + ": " + err.what());
    } catch (const DataError& err) {
      throw DataError(path.filename().string() + ":" + std::to_string(line_no) + ": " + err.what());
    }
  }
  return out;
}

}  // namespace zsfc
