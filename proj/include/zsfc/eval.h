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
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "zsfc/catalog.h"
#include "zsfc/sampler.h"
#include "zsfc/training.h"

namespace zsfc {

struct EvalReport {
  std::size_t k = 5;
  double recall_at_k = 0.0;
  /// Absent when no test example was ordered on the day of its click.
  std::optional<double> order_recall_at_k;
  std::size_t n_total = 0;
  std::size_t n_ordered = 0;

  bool operator==(const EvalReport&) const = default;
};

/// Ranked recommendations for one test example, best first.
using Recommender = std::function<std::vector<ItemId>(const TrainingExample&, std::size_t k)>;

/// Recall@k over `testset` and Order Recall@k over the ordered_within_day
/// subset. The recommender is called concurrently from OpenMP threads.
EvalReport evaluate(const Recommender& recommender, std::span<const TrainingExample> testset, std::size_t k);

nlohmann::json to_json(const EvalReport& report);
std::string format_report(const EvalReport& report, const std::string& label);

struct AblationRow {
  ModelVariant variant = ModelVariant::Stamp;
  EvalReport report;
  double final_loss = 0.0;
};

/// Trains and evaluates every variant with the same seed and data. The
/// variant and initialisation fields of `base_config` are overridden per row.
std::vector<AblationRow> run_ablation(std::span<const TrainingExample> train_set,
                                      std::span<const TrainingExample> test_set, const Catalog& catalog,
                                      const TrainConfig& base_config, std::size_t k = 5);

nlohmann::json to_json(std::span<const AblationRow> rows);
std::string format_ablation(std::span<const AblationRow> rows);

}  // namespace zsfc
