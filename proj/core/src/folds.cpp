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

#include "survsynth/folds.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>

#include "survsynth/error.hpp"

namespace survsynth {

std::vector<Fold> stratified_kfold(std::span<const int> strata, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw DomainError("k-fold requires k >= 2");
  std::map<int, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < strata.size(); ++i) groups[strata[i]].push_back(i);
  for (const auto& [label, members] : groups) {
    if (members.size() < k) {
      throw DomainError("stratum " + std::to_string(label) + " has " +
                        std::to_string(members.size()) + " rows, fewer than k=" + std::to_string(k));
    }
  }

  std::mt19937_64 rng(seed);
  std::vector<std::vector<std::size_t>> tests(k);
  std::size_t next = 0;
  for (auto& [label, members] : groups) {
    std::shuffle(members.begin(), members.end(), rng);
    for (auto i : members) {
      tests[next].push_back(i);
      next = (next + 1) % k;
    }
  }

  std::vector<Fold> folds(k);
  std::vector<std::size_t> owner(strata.size());
  for (std::size_t f = 0; f < k; ++f) {
    for (auto i : tests[f]) owner[i] = f;
  }
  for (std::size_t f = 0; f < k; ++f) {
    std::sort(tests[f].begin(), tests[f].end());
    folds[f].test = std::move(tests[f]);
    for (std::size_t i = 0; i < strata.size(); ++i) {
      if (owner[i] != f) folds[f].train.push_back(i);
    }
  }
  return folds;
}

std::vector<std::size_t> stratified_subsample(std::span<const std::size_t> rows,
                                              std::span<const int> strata, double fraction,
                                              std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw DomainError("fraction must lie in (0, 1]");
  const auto target = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(rows.size()) - 1e-9));
  if (target >= rows.size()) {
    std::vector<std::size_t> all(rows.begin(), rows.end());
    std::sort(all.begin(), all.end());
    return all;
  }
  std::map<int, std::vector<std::size_t>> groups;
  for (auto r : rows) groups[strata[r]].push_back(r);

  // Largest-remainder apportionment so the per-stratum shares sum to target.
  std::vector<std::pair<int, double>> quotas;
  std::map<int, std::size_t> take;
  std::size_t assigned = 0;
  for (const auto& [label, members] : groups) {
    const double exact = fraction * static_cast<double>(members.size());
    take[label] = static_cast<std::size_t>(std::floor(exact));
    assigned += take[label];
    quotas.emplace_back(label, exact - std::floor(exact));
  }
  std::stable_sort(quotas.begin(), quotas.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  for (std::size_t q = 0; assigned < target; ++q, ++assigned) {
    const int label = quotas[q % quotas.size()].first;
    ++take[label];
  }

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> out;
  for (auto& [label, members] : groups) {
    std::shuffle(members.begin(), members.end(), rng);
    const auto n = std::min(take[label], members.size());
    out.insert(out.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(n));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace survsynth
