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

// SMOTE-style baseline: synthetic rows are convex combinations of a real row
// and one of its k nearest neighbours from the same event stratum.

#pragma once

#include <optional>
#include <random>

#include "survsynth/dataset.hpp"

namespace survsynth {

struct SmoteOptions {
  int k = 5;
  // Fixes the interpolation weight instead of drawing it from U(0, 1).
  std::optional<double> forced_lambda;
};

// Neighbours are searched by Euclidean distance over standardized continuous
// covariates, one-hot categoricals and standardized time. Continuous
// covariates and time are interpolated; categorical cells and the event come
// from the base row. Each present event stratum needs at least k + 1 rows.
SurvivalDataset smote_generate(const SurvivalDataset& ds, const SmoteOptions& options,
                               std::size_t n, std::mt19937_64& rng);

}  // namespace survsynth
