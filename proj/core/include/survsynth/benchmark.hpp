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

// Train-on-synthetic, test-on-real protocol: stratified folds x seeds, each
// run fitting a sampler and generator on the training folds, generating a
// synthetic set of the same size, fitting Cox on it and scoring on the
// held-out real fold.

#pragma once

#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "survsynth/cox.hpp"
#include "survsynth/dataset.hpp"
#include "survsynth/event_time.hpp"
#include "survsynth/generator.hpp"
#include "survsynth/error.hpp"
#include "survsynth/report.hpp"

namespace survsynth {

// `real` bypasses generation: Cox is trained on the real training rows.
enum class BenchGenerator { conditional_cvae, unconditional_cvae, smote, real };
std::string_view to_string(BenchGenerator g);
BenchGenerator bench_generator_from_string(std::string_view name);

// Metric names accepted in BenchConfig::metrics. "dcr" reports dcr_median
// and dcr_min.
const std::vector<std::string>& known_metrics();

struct BenchConfig {
  int folds = 3;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  BenchGenerator generator = BenchGenerator::conditional_cvae;
  SamplerMode sampler = SamplerMode::dpmm;
  std::vector<std::string> metrics = known_metrics();
  // Folds are stratified by this column when set, otherwise by event.
  std::optional<std::string> strata_column;
  // Equal synthetic counts per stratum, each stratum with its own sampler.
  bool balanced = false;
  double train_fraction = 1.0;
  std::uint64_t split_seed = 0;
  // Overrides the default horizon (median real event time).
  std::optional<double> brier_horizon;
  CvaeConfig cvae;
  DpmmConfig dpmm;
  int smote_k = 5;
  CoxConfig cox;
};

void validate(const BenchConfig& cfg);
nlohmann::json bench_config_to_json(const BenchConfig& cfg);
// Missing keys keep their defaults; unknown keys raise ConfigError.
BenchConfig bench_config_from_json(const nlohmann::json& j);

struct RunOptions {
  // 0 picks the hardware concurrency. Results do not depend on it.
  unsigned threads = 0;
  std::function<void(const RunRecord&)> on_run_done;
};

// Thrown when one (fold, seed) run fails; carries the run identity and the
// category of the underlying error.
class RunFailure : public Error {
 public:
  enum class Cause { domain, fit, config, other };
  RunFailure(const std::string& what, int fold, std::uint64_t seed, Cause cause)
      : Error(what), fold_(fold), seed_(seed), cause_(cause) {}
  int fold() const { return fold_; }
  std::uint64_t seed() const { return seed_; }
  Cause cause() const { return cause_; }

 private:
  int fold_;
  std::uint64_t seed_;
  Cause cause_;
};

EvalReport run_tstr(const SurvivalDataset& ds, const BenchConfig& cfg, const RunOptions& opts = {});

// Draws counts[s] rows per stratum s of `strata_column` from that stratum's
// sampler, overwrites the stratum column with s, then concatenates and
// shuffles. Requires a conditional generator.
SurvivalDataset balanced_generate(const GeneratorHandle& gen, const std::string& strata_column,
                                  const std::map<std::string, EventTimeSampler>& samplers,
                                  const std::map<std::string, std::size_t>& counts,
                                  std::mt19937_64& rng);

// Median of the event times (e = 1) of `ds`.
double default_brier_horizon(const SurvivalDataset& ds);

}  // namespace survsynth
