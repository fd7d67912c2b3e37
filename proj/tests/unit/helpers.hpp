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

#include <filesystem>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "survsynth/csv.hpp"
#include "survsynth/dataset.hpp"

namespace survsynth::testing {

// Fresh empty directory under the build tree.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::path(SURVSYNTH_TEST_TMP) / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline SurvivalDataset read_csv_text(const std::string& text, const SchemaConfig& cfg) {
  std::istringstream in(text);
  return read_csv(in, cfg);
}

// age (continuous), stage {I, II}, time, event.
inline SchemaConfig age_stage_config() {
  SchemaConfig cfg;
  cfg.covariates = {{"age", ColumnKind::continuous, {}}, {"stage", ColumnKind::categorical, {}}};
  return cfg;
}

// Random dataset with `cont` continuous and `cat` three-level categorical
// covariates and about 30% censoring.
inline SurvivalDataset random_dataset(std::size_t n, int cont, int cat, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<int> level(0, 2);
  std::exponential_distribution<double> expo(0.1);
  std::bernoulli_distribution censor(0.3);
  std::vector<ColumnSchema> schema;
  std::vector<std::vector<double>> cols;
  for (int j = 0; j < cont; ++j) {
    schema.push_back({"c" + std::to_string(j), ColumnKind::continuous, {}});
    std::vector<double> v(n);
    for (auto& x : v) x = 3.0 * normal(rng) + j;
    cols.push_back(std::move(v));
  }
  for (int j = 0; j < cat; ++j) {
    schema.push_back({"k" + std::to_string(j), ColumnKind::categorical, {"a", "b", "c"}});
    std::vector<double> v(n);
    for (auto& x : v) x = level(rng);
    cols.push_back(std::move(v));
  }
  std::vector<double> t(n);
  std::vector<int> e(n);
  for (std::size_t i = 0; i < n; ++i) {
    t[i] = expo(rng);
    e[i] = censor(rng) ? 0 : 1;
  }
  return SurvivalDataset(std::move(schema), std::move(cols), std::move(t), std::move(e));
}

}  // namespace survsynth::testing
