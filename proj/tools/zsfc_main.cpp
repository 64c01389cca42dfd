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

// zsfc: synthetic worlds, dataset sampling, training, evaluation and
// latency benchmarking for the complementary-item recommender.

#include <omp.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "zsfc/bench_rank.h"
#include "zsfc/catalog.h"
#include "zsfc/cf_baseline.h"
#include "zsfc/checkpoint.h"
#include "zsfc/cooccurrence.h"
#include "zsfc/dataset_io.h"
#include "zsfc/eval.h"
#include "zsfc/interactions.h"
#include "zsfc/ranking.h"
#include "zsfc/sampler.h"
#include "zsfc/synth.h"
#include "zsfc/training.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct Globals {
  std::uint64_t seed = 0;
  int threads = 0;
  bool json = false;
};

// Input files; --data-dir fills in the conventional names.
struct InputPaths {
  fs::path data_dir;
  fs::path catalog, hierarchy, negative_pairs, interactions;

  void add_options(CLI::App* app, bool with_interactions) {
    app->add_option("--data-dir", data_dir, "Directory holding catalog.tsv, hierarchy.tsv, negative_pairs.tsv"
                                            " and interactions.tsv");
    app->add_option("--catalog", catalog, "Item catalog TSV");
    app->add_option("--hierarchy", hierarchy, "Category hierarchy TSV");
    app->add_option("--negative-pairs", negative_pairs, "Negative category pairs TSV");
    if (with_interactions) app->add_option("--interactions", interactions, "Interaction log TSV");
  }

  fs::path resolve(const fs::path& explicit_path, const char* name) const {
    if (!explicit_path.empty()) return explicit_path;
    if (!data_dir.empty()) return data_dir / name;
    throw CLI::RequiredError(std::string("--") + std::string(name).substr(0, std::string(name).find('.')) +
                             " (or --data-dir)");
  }

  zsfc::CatalogPaths catalog_paths() const {
    return {resolve(catalog, "catalog.tsv"), resolve(hierarchy, "hierarchy.tsv"),
            resolve(negative_pairs, "negative_pairs.tsv")};
  }
  fs::path interactions_path() const { return resolve(interactions, "interactions.tsv"); }
};

void add_sampler_options(CLI::App* app, zsfc::SamplerConfig& c) {
  app->add_option("--max-clicks", c.max_clicks, "Click context length")->capture_default_str();
  app->add_option("--max-orders", c.max_orders, "Order context length")->capture_default_str();
  app->add_option("--top-n", c.top_n, "Co-occurrence frequency filter")->capture_default_str();
}

struct TrainFlags {
  std::string variant = "zsfc";
  std::string init;
  zsfc::TrainConfig config;

  void add_options(CLI::App* app) {
    app->add_option("--variant", variant, "stamp | stamp+orders | stamp+category | stamp+image | zsfc")
        ->capture_default_str();
    app->add_option("--init", init, "xavier | image (default depends on the variant)");
    app->add_option("--dim", config.dim, "Embedding width")->capture_default_str();
    app->add_option("--lr", config.learning_rate, "Adam learning rate")->capture_default_str();
    app->add_option("--epochs", config.epochs, "Training epochs")->capture_default_str();
    app->add_option("--negatives", config.negatives, "Sampled negatives per example")->capture_default_str();
    app->add_option("--batch-size", config.batch_size, "Minibatch size")->capture_default_str();
  }

  zsfc::TrainConfig resolve(const Globals& g, std::size_t vocab) const {
    zsfc::TrainConfig c = config;
    c.seed = g.seed;
    auto v = zsfc::parse_variant(variant);
    if (!v) throw std::invalid_argument("unknown variant '" + variant + "'");
    c.variant = *v;
    if (!init.empty()) {
      auto m = zsfc::parse_init_mode(init);
      if (!m) throw std::invalid_argument("unknown init mode '" + init + "'");
      c.init = *m;
    }
    if (vocab >= 2 && c.negatives + 2 > vocab) {
      std::cerr << "note: clamping negatives from " << c.negatives << " to " << vocab - 2
                << " for a vocabulary of " << vocab << " items\n";
      c.negatives = vocab - 2;
    }
    return c;
  }
};

void write_json(const fs::path& path, const json& j) {
  if (path.empty()) return;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  out << j.dump(2) << '\n';
  if (!out) throw zsfc::DataError("cannot write " + path.string());
}

json epoch_json(const zsfc::EpochLog& e) {
  return {{"epoch", e.epoch}, {"mean_loss", e.mean_loss}, {"wall_ms", e.wall_ms}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Complementary-item recommender: synth, sample, train, eval, ablate, bench, recommend"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Root seed for every random stream")->capture_default_str();
  app.add_option("--threads", g.threads, "OpenMP threads (1 = deterministic reference mode)");
  app.add_flag("--json", g.json, "Machine-readable output on stdout");

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic world and interaction log");
  zsfc::WorldConfig world_cfg;
  fs::path synth_out;
  synth->add_option("--out-dir", synth_out, "Output directory")->required();
  synth->add_option("--items", world_cfg.n_items)->capture_default_str();
  synth->add_option("--categories", world_cfg.n_categories)->capture_default_str();
  synth->add_option("--feature-dim", world_cfg.feature_dim)->capture_default_str();
  synth->add_option("--users", world_cfg.n_users)->capture_default_str();
  synth->add_option("--events-per-user", world_cfg.events_per_user)->capture_default_str();
  synth->add_option("--affinity", world_cfg.complementary_affinity)->capture_default_str();
  synth->add_option("--negative-fraction", world_cfg.negative_pair_fraction)->capture_default_str();
  synth->add_option("--days", world_cfg.days)->capture_default_str();

  // sample
  auto* sample = app.add_subcommand("sample", "Extract complementary training examples and split by time");
  InputPaths sample_in;
  sample_in.add_options(sample, true);
  zsfc::SamplerConfig sampler_cfg;
  add_sampler_options(sample, sampler_cfg);
  fs::path sample_out;
  sample->add_option("--out-dir", sample_out, "Writes dataset.jsonl, train.jsonl, test.jsonl")->required();

  // train
  auto* train = app.add_subcommand("train", "Train a model and write a checkpoint");
  InputPaths train_in;
  train_in.add_options(train, false);
  TrainFlags train_flags;
  train_flags.add_options(train);
  fs::path train_data, train_ckpt, train_log;
  train->add_option("--train", train_data, "Training dataset JSONL")->required();
  train->add_option("--out", train_ckpt, "Checkpoint path")->required();
  train->add_option("--log", train_log, "Per-epoch loss log (one JSON line per epoch)");

  // eval
  auto* eval = app.add_subcommand("eval", "Recall@k and Order Recall@k on a test set");
  InputPaths eval_in;
  eval_in.add_options(eval, true);
  fs::path eval_ckpt, eval_test, eval_report;
  std::string baseline;
  std::size_t eval_k = 5;
  eval->add_option("--checkpoint", eval_ckpt, "Model checkpoint");
  eval->add_option("--baseline", baseline, "Evaluate a baseline instead of a model (cf)")
      ->check(CLI::IsMember({"cf"}));
  eval->add_option("--test", eval_test, "Test dataset JSONL")->required();
  eval->add_option("-k", eval_k, "Cutoff")->capture_default_str();
  eval->add_option("--report", eval_report, "Write eval_report JSON here");

  // ablate
  auto* ablate = app.add_subcommand("ablate", "Train and evaluate all five variants");
  InputPaths ablate_in;
  ablate_in.add_options(ablate, false);
  TrainFlags ablate_flags;
  ablate_flags.add_options(ablate);
  fs::path ablate_train, ablate_test, ablate_report;
  std::size_t ablate_k = 5;
  ablate->add_option("--train", ablate_train, "Training dataset JSONL")->required();
  ablate->add_option("--test", ablate_test, "Test dataset JSONL")->required();
  ablate->add_option("-k", ablate_k, "Cutoff")->capture_default_str();
  ablate->add_option("--report", ablate_report, "Write ablation JSON here");

  // bench
  auto* bench = app.add_subcommand("bench", "Ranking latency over a large candidate set");
  zsfc::BenchConfig bench_cfg;
  std::size_t bench_dim = 128;
  fs::path bench_ckpt, bench_report;
  InputPaths bench_in;
  bench_in.add_options(bench, false);
  bool bench_serial = false, bench_no_filter = false;
  std::string bench_variant = "zsfc";
  bench->add_option("--checkpoint", bench_ckpt, "Use a trained checkpoint (with its catalog)");
  bench->add_option("--candidates", bench_cfg.n_candidates)->capture_default_str();
  bench->add_option("-k", bench_cfg.k)->capture_default_str();
  bench->add_option("--reps", bench_cfg.reps)->capture_default_str();
  bench->add_option("--dim", bench_dim, "Embedding width of the generated model")->capture_default_str();
  bench->add_option("--variant", bench_variant, "Variant of the generated model")->capture_default_str();
  bench->add_option("--bench-threads", bench_cfg.threads, "Workers while timing (sharded ranking when > 1)")
      ->capture_default_str();
  bench->add_flag("--serial-kernel", bench_serial, "Use the serial reference kernel");
  bench->add_flag("--no-filter", bench_no_filter, "Disable the complementary post-filter");
  bench->add_option("--report", bench_report, "Write bench JSON here");

  // recommend
  auto* recommend = app.add_subcommand("recommend", "Ranked complementary items for one base item");
  InputPaths rec_in;
  rec_in.add_options(recommend, false);
  fs::path rec_ckpt, rec_log;
  std::string rec_base;
  std::size_t rec_k = 5;
  zsfc::SamplerConfig rec_sampler;
  recommend->add_option("--checkpoint", rec_ckpt, "Model checkpoint")->required();
  recommend->add_option("--base", rec_base, "Item key being viewed")->required();
  recommend->add_option("--user-log", rec_log, "Interaction TSV with the user's recent events");
  recommend->add_option("-k", rec_k, "How many items")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (g.threads > 0) omp_set_num_threads(g.threads);

    if (synth->parsed()) {
      world_cfg.seed = g.seed;
      const auto world = zsfc::generate_world(world_cfg);
      const auto histories = zsfc::generate_histories(world, world_cfg);
      fs::create_directories(synth_out);
      zsfc::write_world(world, histories, zsfc::WorldPaths::in(synth_out));
      std::size_t events = 0;
      for (const auto& h : histories) events += h.events.size();
      json j{{"items", world.catalog.size()}, {"users", histories.size()}, {"events", events}};
      if (g.json) {
        std::cout << j.dump() << '\n';
      } else {
        std::cout << "wrote " << world.catalog.size() << " items, " << histories.size() << " users, " << events
                  << " events to " << synth_out.string() << '\n';
      }
      return 0;
    }

    if (sample->parsed()) {
      sampler_cfg.validate();
      const auto catalog = zsfc::load_catalog(sample_in.catalog_paths());
      const auto histories = zsfc::load_interactions(sample_in.interactions_path(), catalog);
      const auto matrix = zsfc::build_cooccurrence(histories, catalog.size());
      const auto examples = zsfc::extract_all(histories, matrix, catalog, sampler_cfg);
      const auto split = zsfc::split_by_time(examples, zsfc::corpus_end(histories));
      fs::create_directories(sample_out);
      zsfc::write_dataset(sample_out / "dataset.jsonl", examples, catalog);
      zsfc::write_dataset(sample_out / "train.jsonl", split.train, catalog);
      zsfc::write_dataset(sample_out / "test.jsonl", split.test, catalog);
      json j{{"examples", examples.size()}, {"train", split.train.size()}, {"test", split.test.size()}};
      if (g.json) {
        std::cout << j.dump() << '\n';
      } else {
        std::cout << examples.size() << " examples (" << split.train.size() << " train, " << split.test.size()
                  << " test) written to " << sample_out.string() << '\n';
      }
      return 0;
    }

    if (train->parsed()) {
      const auto catalog = zsfc::load_catalog(train_in.catalog_paths());
      const auto data = zsfc::read_dataset(train_data, catalog);
      const auto config = train_flags.resolve(g, catalog.size());
      std::ofstream log_out;
      if (!train_log.empty()) {
        if (train_log.has_parent_path()) fs::create_directories(train_log.parent_path());
        log_out.open(train_log);
        if (!log_out) throw zsfc::DataError("cannot write " + train_log.string());
      }
      auto result = zsfc::train(data, catalog, config, [&](const zsfc::EpochLog& e) {
        const std::string line = epoch_json(e).dump();
        if (log_out.is_open()) log_out << line << std::endl;
        if (g.json) {
          std::cout << line << std::endl;
        } else {
          std::cerr << "epoch " << e.epoch << ": loss " << e.mean_loss << " (" << e.wall_ms << " ms)\n";
        }
      });
      if (train_ckpt.has_parent_path()) fs::create_directories(train_ckpt.parent_path());
      zsfc::save_checkpoint(result.params, train_ckpt);
      return 0;
    }

    if (eval->parsed()) {
      if (eval_ckpt.empty() == baseline.empty()) {
        throw CLI::ValidationError("eval", "exactly one of --checkpoint or --baseline is required");
      }
      const auto catalog = zsfc::load_catalog(eval_in.catalog_paths());
      const auto test = zsfc::read_dataset(eval_test, catalog);
      zsfc::EvalReport report;
      std::string label;
      if (!baseline.empty()) {
        const auto histories = zsfc::load_interactions(eval_in.interactions_path(), catalog);
        const auto matrix = zsfc::build_cooccurrence(histories, catalog.size());
        const zsfc::CFModel cf(matrix);
        report = zsfc::evaluate(
            [&](const zsfc::TrainingExample& ex, std::size_t k) { return zsfc::cf_c_recommend(cf, ex.base, k, catalog); },
            test, eval_k);
        label = "cf-c";
      } else {
        const auto params = zsfc::load_checkpoint(eval_ckpt);
        const zsfc::ModelRecommender rec(params, catalog);
        report = zsfc::evaluate(
            [&](const zsfc::TrainingExample& ex, std::size_t k) { return rec.recommend(ex, k); }, test, eval_k);
        label = std::string(zsfc::variant_name(params.variant));
      }
      auto j = zsfc::to_json(report);
      j["model"] = label;
      write_json(eval_report, j);
      if (g.json) {
        std::cout << j.dump() << '\n';
      } else {
        std::cout << zsfc::format_report(report, label);
      }
      return 0;
    }

    if (ablate->parsed()) {
      const auto catalog = zsfc::load_catalog(ablate_in.catalog_paths());
      const auto train_set = zsfc::read_dataset(ablate_train, catalog);
      const auto test_set = zsfc::read_dataset(ablate_test, catalog);
      const auto config = ablate_flags.resolve(g, catalog.size());
      const auto rows = zsfc::run_ablation(train_set, test_set, catalog, config, ablate_k);
      write_json(ablate_report, zsfc::to_json(rows));
      if (g.json) {
        std::cout << zsfc::to_json(rows).dump() << '\n';
      } else {
        std::cout << zsfc::format_ablation(rows);
      }
      return 0;
    }

    if (bench->parsed()) {
      bench_cfg.seed = g.seed;
      bench_cfg.execution = bench_serial ? zsfc::Execution::Serial : zsfc::Execution::Parallel;
      bench_cfg.post_filter = !bench_no_filter;
      std::optional<zsfc::Catalog> catalog;
      zsfc::ModelParams params;
      if (!bench_ckpt.empty()) {
        catalog = zsfc::load_catalog(bench_in.catalog_paths());
        params = zsfc::load_checkpoint(bench_ckpt);
      } else {
        zsfc::WorldConfig wc;
        wc.n_items = bench_cfg.n_candidates;
        wc.feature_dim = 0;
        wc.seed = g.seed;
        catalog = zsfc::generate_world(wc).catalog;
        auto v = zsfc::parse_variant(bench_variant);
        if (!v) throw std::invalid_argument("unknown variant '" + bench_variant + "'");
        params = zsfc::init_params(*catalog, *v, bench_dim, zsfc::InitMode::Xavier, g.seed);
      }
      const auto result = zsfc::bench_rank(params, *catalog, bench_cfg);
      const auto j = zsfc::to_json(result.stats, bench_cfg);
      write_json(bench_report, j);
      if (g.json) {
        std::cout << j.dump() << '\n';
      } else {
        std::printf("%zu candidates, top-%zu, %zu requests: p50 %.3f ms, p99 %.3f ms, mean %.3f ms\n",
                    bench_cfg.n_candidates, bench_cfg.k, bench_cfg.reps, result.stats.p50_ms, result.stats.p99_ms,
                    result.stats.mean_ms);
      }
      return 0;
    }

    if (recommend->parsed()) {
      const auto catalog = zsfc::load_catalog(rec_in.catalog_paths());
      const auto params = zsfc::load_checkpoint(rec_ckpt);
      zsfc::TrainingExample request;
      if (!rec_log.empty()) {
        auto histories = zsfc::load_interactions(rec_log, catalog);
        if (histories.size() > 1) throw zsfc::DataError(rec_log.string() + ": expected the events of one user");
        if (!histories.empty()) {
          request = zsfc::context_at(histories.front(), zsfc::corpus_end(histories) + 1, rec_sampler);
        }
      }
      request.base = catalog.require(rec_base);
      const zsfc::ModelRecommender rec(params, catalog);
      const auto top = rec.recommend_scored(request, rec_k);
      if (g.json) {
        json out = json::array();
        for (const auto& s : top) out.push_back({{"item", catalog.key(s.item)}, {"score", s.score}});
        std::cout << out.dump() << '\n';
      } else {
        for (std::size_t i = 0; i < top.size(); ++i) {
          std::printf("%2zu  %-16s %10.5f\n", i + 1, catalog.key(top[i].item).c_str(), top[i].score);
        }
      }
      return 0;
    }
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
