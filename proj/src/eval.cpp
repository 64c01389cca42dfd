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
#include "zsfc/eval.h"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "zsfc/ranking.h"

namespace zsfc {

EvalReport evaluate(const Recommender& recommender, std::span<const TrainingExample> testset, std::size_t k) {
  if (k == 0) throw std::invalid_argument("k must be at least 1");
  if (testset.empty()) throw std::invalid_argument("cannot evaluate an empty test set");

  const auto n = static_cast<std::ptrdiff_t>(testset.size());
  std::vector<char> hit(testset.size(), 0);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto& ex = testset[i];
    const auto top = recommender(ex, k);
    const auto end = top.begin() + static_cast<std::ptrdiff_t>(std::min(k, top.size()));
    hit[i] = std::find(top.begin(), end, ex.target) != end;
  }

  EvalReport report;
  report.k = k;
  report.n_total = testset.size();
  std::size_t hits = 0, ordered_hits = 0;
  for (std::size_t i = 0; i < testset.size(); ++i) {
    hits += hit[i];
    if (testset[i].ordered_within_day) {
      ++report.n_ordered;
      ordered_hits += hit[i];
    }
  }
  report.recall_at_k = static_cast<double>(hits) / static_cast<double>(report.n_total);
  if (report.n_ordered > 0) {
    report.order_recall_at_k = static_cast<double>(ordered_hits) / static_cast<double>(report.n_ordered);
  }
  return report;
}

nlohmann::json to_json(const EvalReport& report) {
  nlohmann::json j;
  j["k"] = report.k;
  j["recall_at_k"] = report.recall_at_k;
  j["order_recall_at_k"] = report.order_recall_at_k ? nlohmann::json(*report.order_recall_at_k) : nlohmann::json();
  j["n_total"] = report.n_total;
  j["n_ordered"] = report.n_ordered;
  return j;
}

namespace {

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string order_cell(const EvalReport& r) { return r.order_recall_at_k ? fixed4(*r.order_recall_at_k) : "n/a"; }

}  // namespace

std::string format_report(const EvalReport& report, const std::string& label) {
  std::ostringstream out;
  out << label << ": Recall@" << report.k << " = " << fixed4(report.recall_at_k) << ", Order Recall@" << report.k
      << " = " << order_cell(report) << " (" << report.n_total << " examples, " << report.n_ordered
      << " ordered same day)\n";
  return out.str();
}

std::vector<AblationRow> run_ablation(std::span<const TrainingExample> train_set,
                                      std::span<const TrainingExample> test_set, const Catalog& catalog,
                                      const TrainConfig& base_config, std::size_t k) {
  if (train_set.empty() || test_set.empty()) throw std::invalid_argument("ablation needs train and test examples");
  std::vector<AblationRow> rows;
  for (ModelVariant v : kAllVariants) {
    TrainConfig config = base_config;
    config.variant = v;
    config.init.reset();
    auto result = train(train_set, catalog, config);
    ModelRecommender rec(result.params, catalog);
    AblationRow row;
    row.variant = v;
    row.report = evaluate([&](const TrainingExample& ex, std::size_t kk) { return rec.recommend(ex, kk); },
                          test_set, k);
    row.final_loss = result.log.empty() ? 0.0 : result.log.back().mean_loss;
    rows.push_back(row);
  }
  return rows;
}

nlohmann::json to_json(std::span<const AblationRow> rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows) {
    auto j = to_json(r.report);
    j["variant"] = variant_name(r.variant);
    j["final_loss"] = r.final_loss;
    out.push_back(j);
  }
  return out;
}

std::string format_ablation(std::span<const AblationRow> rows) {
  std::ostringstream out;
  const std::size_t k = rows.empty() ? 5 : rows.front().report.k;
  char line[128];
  std::snprintf(line, sizeof line, "%-16s %10s %16s %10s\n", "variant", ("Recall@" + std::to_string(k)).c_str(),
                ("OrderRecall@" + std::to_string(k)).c_str(), "loss");
  out << line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%-16s %10s %16s %10s\n", std::string(variant_name(r.variant)).c_str(),
                  fixed4(r.report.recall_at_k).c_str(), order_cell(r.report).c_str(), fixed4(r.final_loss).c_str());
    out << line;
  }
  return out.str();
}

}  // namespace zsfc
