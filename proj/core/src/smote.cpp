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

#include "survsynth/smote.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <array>
#include <numeric>
#include <string>
#include <vector>

#include "survsynth/encoder.hpp"
#include "survsynth/error.hpp"

namespace survsynth {

SurvivalDataset smote_generate(const SurvivalDataset& ds, const SmoteOptions& options,
                               std::size_t n, std::mt19937_64& rng) {
  if (options.k < 1) throw DomainError("SMOTE needs k >= 1");
  if (n < 1) throw DomainError("SMOTE needs n >= 1");
  if (ds.empty()) throw DomainError("SMOTE needs a non-empty dataset");
  const auto k = static_cast<std::size_t>(options.k);

  std::array<std::vector<std::size_t>, 2> strata;
  for (std::size_t i = 0; i < ds.rows(); ++i) strata[static_cast<std::size_t>(ds.event()[i])].push_back(i);
  for (int e = 0; e < 2; ++e) {
    const auto size = strata[static_cast<std::size_t>(e)].size();
    if (size > 0 && size < k + 1) {
      throw DomainError("SMOTE stratum event=" + std::to_string(e) + " has " +
                        std::to_string(size) + " rows; needs at least " + std::to_string(k + 1));
    }
  }

  const Encoder enc = Encoder::fit(ds, EncoderOptions{true, false});
  const Eigen::MatrixXd space = enc.encode(ds).values.transpose();  // width x rows

  // Nearest neighbours are computed lazily and memoised per base row.
  std::vector<std::vector<std::size_t>> neighbours(ds.rows());
  auto neighbours_of = [&](std::size_t base) -> const std::vector<std::size_t>& {
    auto& out = neighbours[base];
    if (!out.empty()) return out;
    const auto& pool = strata[static_cast<std::size_t>(ds.event()[base])];
    std::vector<std::pair<double, std::size_t>> dist;
    dist.reserve(pool.size());
    for (std::size_t j : pool) {
      if (j == base) continue;
      const auto b = static_cast<Eigen::Index>(base);
      const auto c = static_cast<Eigen::Index>(j);
      dist.emplace_back((space.col(b) - space.col(c)).squaredNorm(), j);
    }
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
    for (std::size_t q = 0; q < k; ++q) out.push_back(dist[q].second);
    return out;
  };

  std::uniform_int_distribution<std::size_t> pick_row(0, ds.rows() - 1);
  std::uniform_int_distribution<std::size_t> pick_nb(0, k - 1);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  std::vector<std::vector<double>> columns(ds.cols(), std::vector<double>(n));
  std::vector<double> time(n);
  std::vector<int> event(n);
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t base = pick_row(rng);
    const std::size_t nb = neighbours_of(base)[pick_nb(rng)];
    const double lambda = options.forced_lambda ? *options.forced_lambda : unif(rng);
    for (std::size_t j = 0; j < ds.cols(); ++j) {
      const double a = ds.value(base, j);
      columns[j][r] = ds.column_schema(j).is_categorical() ? a : a + lambda * (ds.value(nb, j) - a);
    }
    time[r] = ds.time()[base] + lambda * (ds.time()[nb] - ds.time()[base]);
    event[r] = ds.event()[base];
  }
  return ds.with_columns(std::move(columns), std::move(time), std::move(event));
}

}  // namespace survsynth
