/*
 * Copyright 2026 The survsynth Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "survsynth/benchmark.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <numeric>
#include <set>
#include <thread>

#include "survsynth/encoder.hpp"
#include "survsynth/folds.hpp"
#include "survsynth/impute.hpp"
#include "survsynth/metrics.hpp"
#include "survsynth/seed.hpp"
#include "survsynth/serialization.hpp"

namespace survsynth {
namespace {

using json = nlohmann::json;

// Stream labels for per-run seeds.
enum Stream : std::uint64_t { kSampler = 1, kGenerator = 2, kGeneration = 3, kSubsample = 4,
                              kStrataSamplers = 16 };

std::vector<int> stratum_codes(const SurvivalDataset& ds, const std::optional<std::string>& column) {
  if (!column) return {ds.event().begin(), ds.event().end()};
  const auto j = ds.column_index(*column);
  if (!j) throw ConfigError("strata column '" + *column + "' is not a covariate");
  if (!ds.column_schema(*j).is_categorical()) {
    throw ConfigError("strata column '" + *column + "' must be categorical");
  }
  std::vector<int> codes(ds.rows());
  for (std::size_t i = 0; i < ds.rows(); ++i) codes[i] = static_cast<int>(ds.value(i, *j));
  return codes;
}

RunRecord evaluate_run(const SurvivalDataset& ds, const BenchConfig& cfg, const Fold& fold,
                       int fold_id, std::uint64_t seed, double horizon) {
  const std::uint64_t base = derive_seed(seed, static_cast<std::uint64_t>(fold_id));
  std::vector<std::size_t> train_rows = fold.train;
  if (cfg.train_fraction < 1.0) {
    train_rows = stratified_subsample(train_rows, ds.event(), cfg.train_fraction,
                                      derive_seed(base, kSubsample));
  }
  const SurvivalDataset train = ds.subset(train_rows);
  const SurvivalDataset test = ds.subset(fold.test);
  const std::size_t n = train.rows();

  SurvivalDataset syn;
  if (cfg.generator == BenchGenerator::real) {
    syn = train;
  } else {
    const auto kind = cfg.generator == BenchGenerator::conditional_cvae ? GeneratorKind::conditional_cvae
                      : cfg.generator == BenchGenerator::unconditional_cvae
                          ? GeneratorKind::unconditional_cvae
                          : GeneratorKind::smote;
    const GeneratorHandle gen =
        fit_generator(train, kind, GeneratorOptions{cfg.cvae, cfg.smote_k}, derive_seed(base, kGenerator));
    std::mt19937_64 rng(derive_seed(base, kGeneration));
    if (cfg.balanced) {
      const std::size_t col = *train.column_index(*cfg.strata_column);
      const auto& labels = train.column_schema(col).categories;
      std::map<std::string, EventTimeSampler> samplers;
      std::map<std::string, std::size_t> counts;
      std::vector<std::string> present;
      for (std::size_t c = 0; c < labels.size(); ++c) {
        std::vector<std::size_t> rows;
        for (std::size_t i = 0; i < train.rows(); ++i) {
          if (static_cast<std::size_t>(train.value(i, col)) == c) rows.push_back(i);
        }
        if (rows.empty()) continue;
        samplers[labels[c]] = fit_event_time_sampler(train.subset(rows), cfg.sampler, cfg.dpmm,
                                                     derive_seed(base, kStrataSamplers + c));
        present.push_back(labels[c]);
      }
      for (std::size_t q = 0; q < present.size(); ++q) {
        counts[present[q]] = n / present.size() + (q < n % present.size() ? 1 : 0);
      }
      syn = balanced_generate(gen, *cfg.strata_column, samplers, counts, rng);
    } else {
      const EventTimeSampler sampler =
          fit_event_time_sampler(train, cfg.sampler, cfg.dpmm, derive_seed(base, kSampler));
      syn = generate(gen, sampler, n, rng);
    }
  }

  RunRecord rec;
  rec.fold = fold_id;
  rec.seed = seed;
  rec.train_rows = n;
  rec.synthetic_rows = syn.rows();
  const std::set<std::string> wanted(cfg.metrics.begin(), cfg.metrics.end());

  if (wanted.contains("c_index") || wanted.contains("brier")) {
    const Encoder enc = Encoder::fit(syn);
    const CoxModel cox = fit_cox(enc.encode(syn), syn.time(), syn.event(), cfg.cox);
    const auto test_x = enc.encode(test).values;
    if (wanted.contains("c_index")) {
      const Eigen::VectorXd risk = predict_risks(cox, test_x);
      rec.metrics["c_index"] = c_index({risk.data(), static_cast<std::size_t>(risk.size())},
                                       test.time(), test.event());
    }
    if (wanted.contains("brier")) rec.metrics["brier"] = brier_score(cox, enc, test, horizon);
  }
  if (wanted.contains("km_divergence") || wanted.contains("optimism")) {
    const MetricGrid grid = union_grid(train, syn);
    if (wanted.contains("km_divergence")) rec.metrics["km_divergence"] = km_divergence(train, syn, grid);
    if (wanted.contains("optimism")) rec.metrics["optimism"] = optimism(train, syn, grid);
  }
  if (wanted.contains("shortsightedness")) rec.metrics["shortsightedness"] = shortsightedness(train, syn);
  if (wanted.contains("js_distance")) rec.metrics["js_distance"] = js_distance(train, syn).value;
  if (wanted.contains("ws_distance")) rec.metrics["ws_distance"] = ws_distance(train, syn).value;
  if (wanted.contains("dcr")) {
    const DcrResult d = dcr(train, syn);
    rec.metrics["dcr_median"] = d.median;
    rec.metrics["dcr_min"] = d.minimum;
  }
  return rec;
}

RunFailure wrap_failure(std::exception_ptr ep, int fold, std::uint64_t seed) {
  const std::string where = "run (fold " + std::to_string(fold) + ", seed " + std::to_string(seed) + ") failed: ";
  try {
    std::rethrow_exception(ep);
  } catch (const FitError& e) {
    return {where + e.what(), fold, seed, RunFailure::Cause::fit};
  } catch (const TrainingError& e) {
    return {where + e.what(), fold, seed, RunFailure::Cause::fit};
  } catch (const ConfigError& e) {
    return {where + e.what(), fold, seed, RunFailure::Cause::config};
  } catch (const Error& e) {
    return {where + e.what(), fold, seed, RunFailure::Cause::domain};
  } catch (const std::exception& e) {
    return {where + e.what(), fold, seed, RunFailure::Cause::other};
  }
}

}  // namespace

std::string_view to_string(BenchGenerator g) {
  switch (g) {
    case BenchGenerator::conditional_cvae: return "cvae";
    case BenchGenerator::unconditional_cvae: return "unconditional";
    case BenchGenerator::smote: return "smote";
    case BenchGenerator::real: return "real";
  }
  return "cvae";
}

BenchGenerator bench_generator_from_string(std::string_view name) {
  if (name == "real") return BenchGenerator::real;
  switch (generator_kind_from_string(name)) {
    case GeneratorKind::conditional_cvae: return BenchGenerator::conditional_cvae;
    case GeneratorKind::unconditional_cvae: return BenchGenerator::unconditional_cvae;
    case GeneratorKind::smote: return BenchGenerator::smote;
  }
  return BenchGenerator::conditional_cvae;
}

const std::vector<std::string>& known_metrics() {
  static const std::vector<std::string> names = {"km_divergence", "optimism", "shortsightedness",
                                                 "c_index",       "brier",    "js_distance",
                                                 "ws_distance",   "dcr"};
  return names;
}

void validate(const BenchConfig& cfg) {
  if (cfg.folds < 2) throw ConfigError("folds must be at least 2");
  if (cfg.seeds.empty()) throw ConfigError("at least one seed is required");
  if (!(cfg.train_fraction > 0.0 && cfg.train_fraction <= 1.0)) {
    throw ConfigError("train_fraction must lie in (0, 1]");
  }
  for (const auto& m : cfg.metrics) {
    if (std::find(known_metrics().begin(), known_metrics().end(), m) == known_metrics().end()) {
      throw ConfigError("unknown metric '" + m + "'");
    }
  }
  if (cfg.balanced && !cfg.strata_column) throw ConfigError("balanced generation needs a strata column");
  if (cfg.balanced && cfg.generator != BenchGenerator::conditional_cvae) {
    throw ConfigError("balanced generation needs the conditional generator");
  }
  if (cfg.brier_horizon && !(*cfg.brier_horizon > 0.0)) throw ConfigError("brier_horizon must be positive");
  if (cfg.smote_k < 1) throw ConfigError("smote_k must be at least 1");
}

json bench_config_to_json(const BenchConfig& cfg) {
  json j{{"folds", cfg.folds},
         {"seeds", cfg.seeds},
         {"generator", std::string(to_string(cfg.generator))},
         {"sampler", std::string(to_string(cfg.sampler))},
         {"metrics", cfg.metrics},
         {"balanced", cfg.balanced},
         {"train_fraction", cfg.train_fraction},
         {"split_seed", cfg.split_seed},
         {"cvae", cvae_config_to_json(cfg.cvae)},
         {"dpmm", dpmm_config_to_json(cfg.dpmm)},
         {"smote_k", cfg.smote_k},
         {"cox", {{"max_iters", cfg.cox.max_iters}, {"tol", cfg.cox.tol}, {"ridge", cfg.cox.ridge},
                  {"max_halvings", cfg.cox.max_halvings}}}};
  j["strata_column"] = cfg.strata_column ? json(*cfg.strata_column) : json(nullptr);
  j["brier_horizon"] = cfg.brier_horizon ? json(*cfg.brier_horizon) : json(nullptr);
  return j;
}

BenchConfig bench_config_from_json(const json& j) {
  static const std::set<std::string> known = {
      "folds", "seeds", "generator", "sampler", "metrics", "balanced", "train_fraction", "split_seed",
      "cvae", "dpmm", "smote_k", "cox", "strata_column", "brier_horizon"};
  if (!j.is_object()) throw ConfigError("benchmark config must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) throw ConfigError("unknown benchmark option '" + key + "'");
  }
  BenchConfig cfg;
  try {
    cfg.folds = j.value("folds", cfg.folds);
    cfg.seeds = j.value("seeds", cfg.seeds);
    if (j.contains("generator")) cfg.generator = bench_generator_from_string(j.at("generator").get<std::string>());
    if (j.contains("sampler")) cfg.sampler = sampler_mode_from_string(j.at("sampler").get<std::string>());
    cfg.metrics = j.value("metrics", cfg.metrics);
    cfg.balanced = j.value("balanced", cfg.balanced);
    cfg.train_fraction = j.value("train_fraction", cfg.train_fraction);
    cfg.split_seed = j.value("split_seed", cfg.split_seed);
    if (j.contains("cvae")) cfg.cvae = cvae_config_from_json(j.at("cvae"));
    if (j.contains("dpmm")) cfg.dpmm = dpmm_config_from_json(j.at("dpmm"));
    cfg.smote_k = j.value("smote_k", cfg.smote_k);
    if (j.contains("cox")) {
      const auto& c = j.at("cox");
      cfg.cox.max_iters = c.value("max_iters", cfg.cox.max_iters);
      cfg.cox.tol = c.value("tol", cfg.cox.tol);
      cfg.cox.ridge = c.value("ridge", cfg.cox.ridge);
      cfg.cox.max_halvings = c.value("max_halvings", cfg.cox.max_halvings);
    }
    if (j.contains("strata_column") && !j.at("strata_column").is_null()) {
      cfg.strata_column = j.at("strata_column").get<std::string>();
    }
    if (j.contains("brier_horizon") && !j.at("brier_horizon").is_null()) {
      cfg.brier_horizon = j.at("brier_horizon").get<double>();
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("benchmark config: ") + e.what());
  }
  validate(cfg);
  return cfg;
}

double default_brier_horizon(const SurvivalDataset& ds) {
  std::vector<double> t;
  for (std::size_t i = 0; i < ds.rows(); ++i) {
    if (ds.event()[i] == 1) t.push_back(ds.time()[i]);
  }
  if (t.empty()) throw DomainError("Brier horizon needs at least one event");
  std::sort(t.begin(), t.end());
  const std::size_t h = t.size() / 2;
  return t.size() % 2 == 1 ? t[h] : 0.5 * (t[h - 1] + t[h]);
}

SurvivalDataset balanced_generate(const GeneratorHandle& gen, const std::string& strata_column,
                                  const std::map<std::string, EventTimeSampler>& samplers,
                                  const std::map<std::string, std::size_t>& counts,
                                  std::mt19937_64& rng) {
  std::optional<std::size_t> col;
  for (std::size_t j = 0; j < gen.schema().size(); ++j) {
    if (gen.schema()[j].name == strata_column) col = j;
  }
  if (!col || !gen.schema()[*col].is_categorical()) {
    throw ConfigError("strata column '" + strata_column + "' is not a categorical covariate");
  }
  const ColumnSchema& schema = gen.schema()[*col];
  std::vector<SurvivalDataset> parts;
  for (const auto& [label, count] : counts) {
    const auto code = schema.category_index(label);
    if (!code) throw ConfigError("unknown stratum '" + label + "' in column '" + strata_column + "'");
    const auto it = samplers.find(label);
    if (it == samplers.end()) throw ConfigError("no event-time sampler for stratum '" + label + "'");
    if (count == 0) continue;
    const auto pairs = it->second.sample_joint(count, rng);
    std::vector<double> time(count);
    std::vector<int> event(count);
    for (std::size_t i = 0; i < count; ++i) {
      time[i] = pairs[i].first;
      event[i] = pairs[i].second;
    }
    const SurvivalDataset part = generate_given(gen, std::move(time), std::move(event), rng);
    parts.push_back(part.with_column(*col, std::vector<double>(count, static_cast<double>(*code))));
  }
  if (parts.empty()) throw ConfigError("balanced generation needs at least one non-empty stratum");
  const SurvivalDataset all = concat(parts);
  std::vector<std::size_t> order(all.rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  return all.subset(order);
}

EvalReport run_tstr(const SurvivalDataset& input, const BenchConfig& cfg, const RunOptions& opts) {
  validate(cfg);
  if (cfg.balanced && !input.column_index(*cfg.strata_column)) {
    throw ConfigError("strata column '" + *cfg.strata_column + "' is not a covariate");
  }
  const SurvivalDataset ds = input.has_missing() ? impute_missing(input) : input;
  const auto strata = stratum_codes(ds, cfg.strata_column);
  const auto folds = stratified_kfold(strata, static_cast<std::size_t>(cfg.folds), cfg.split_seed);
  const double horizon = cfg.brier_horizon ? *cfg.brier_horizon : default_brier_horizon(ds);

  struct Task {
    int fold;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (int f = 0; f < cfg.folds; ++f) {
    for (auto s : cfg.seeds) tasks.push_back({f, s});
  }
  std::vector<RunRecord> results(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  std::mutex progress_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        results[i] = evaluate_run(ds, cfg, folds[static_cast<std::size_t>(tasks[i].fold)],
                                  tasks[i].fold, tasks[i].seed, horizon);
        if (opts.on_run_done) {
          std::lock_guard lock(progress_mutex);
          opts.on_run_done(results[i]);
        }
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(tasks.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (errors[i]) throw wrap_failure(errors[i], tasks[i].fold, tasks[i].seed);
  }

  EvalReport report;
  report.config = bench_config_to_json(cfg);
  report.config["brier_horizon_used"] = horizon;
  report.config["rows"] = ds.rows();
  report.runs = std::move(results);
  std::sort(report.runs.begin(), report.runs.end(), [](const RunRecord& a, const RunRecord& b) {
    return std::tie(a.fold, a.seed) < std::tie(b.fold, b.seed);
  });
  finalize_aggregates(report);
  return report;
}

}  // namespace survsynth
