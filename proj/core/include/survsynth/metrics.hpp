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

// Evaluation metrics for synthetic survival data: event-time fidelity
// (KM divergence, optimism, short-sightedness), downstream discrimination and
// calibration (C-index, IPCW Brier score), covariate fidelity (Jensen-Shannon
// and Wasserstein distances) and distance to closest record.

#pragma once

#include <Eigen/Core>
#include <span>
#include <string>
#include <vector>

#include "survsynth/cox.hpp"
#include "survsynth/dataset.hpp"
#include "survsynth/encoder.hpp"

namespace survsynth {

struct MetricGrid {
  std::vector<double> points;

  // G uniformly spaced points on [0, tmax], both ends included.
  static MetricGrid uniform(double tmax, std::size_t size = 100);
};

// Uniform grid over the union horizon of both datasets.
MetricGrid union_grid(const SurvivalDataset& real, const SurvivalDataset& syn,
                      std::size_t size = 100);

struct MetricResult {
  std::string name;
  double value = 0.0;
  std::vector<double> details;  // per column or per grid point; may be empty
};

// Mean |S_real(g) - S_syn(g)| over the grid.
double km_divergence(const SurvivalDataset& real, const SurvivalDataset& syn,
                     const MetricGrid& grid);
// Mean (S_syn(g) - S_real(g)): positive when the synthetic curve sits above.
double optimism(const SurvivalDataset& real, const SurvivalDataset& syn, const MetricGrid& grid);
// (Tmax_real - Tmax_syn) / Tmax_real.
double shortsightedness(const SurvivalDataset& real, const SurvivalDataset& syn);

// Harrell's C: pairs with t_i < t_j and e_i = 1 are comparable; risk_i >
// risk_j is concordant, tied risks count one half. O(n log n).
double c_index(std::span<const double> risk, std::span<const double> time,
               std::span<const int> event);

// IPCW Brier score at t_star from predicted S(t_star | x_i).
double brier_score(std::span<const double> predicted_survival, std::span<const double> time,
                   std::span<const int> event, double t_star);
// Convenience: encodes `test` with `encoder` and predicts with `model`.
double brier_score(const CoxModel& model, const Encoder& encoder, const SurvivalDataset& test,
                   double t_star);

// Mean over covariate columns of the base-2 Jensen-Shannon distance between
// real and synthetic frequencies (continuous columns binned on the real
// data's 20-quantiles). details = per-column distances.
MetricResult js_distance(const SurvivalDataset& real, const SurvivalDataset& syn);
// Mean over continuous columns of the W1 distance after min-max scaling by
// the real column's range. details = per-column distances.
MetricResult ws_distance(const SurvivalDataset& real, const SurvivalDataset& syn);

struct DcrResult {
  double median = 0.0;
  double minimum = 0.0;
};

// Distance from each synthetic record to its nearest real record, in the
// space of an encoder fit on `real` with time and event slots.
DcrResult dcr(const SurvivalDataset& real, const SurvivalDataset& syn);

inline constexpr std::size_t kJsBins = 20;
inline constexpr std::size_t kWsQuantiles = 1000;
inline constexpr double kJsSmoothing = 1e-9;

}  // namespace survsynth
