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

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace survsynth {

struct Fold {
  std::vector<std::size_t> train;  // sorted ascending
  std::vector<std::size_t> test;   // sorted ascending
};

// Stratified K-fold split. Within each stratum the row order is shuffled with
// `seed` and dealt round-robin across folds, continuing the deal where the
// previous stratum stopped so overall fold sizes stay balanced. Per-stratum
// fold sizes differ by at most one. Throws DomainError naming the stratum
// when a stratum has fewer than k rows.
std::vector<Fold> stratified_kfold(std::span<const int> strata, std::size_t k, std::uint64_t seed);

// Event-stratified subsample of ceil(fraction * |rows|) indices from `rows`
// (the first argument indexes into `strata`). Returned indices are sorted.
std::vector<std::size_t> stratified_subsample(std::span<const std::size_t> rows,
                                              std::span<const int> strata, double fraction,
                                              std::uint64_t seed);

}  // namespace survsynth
