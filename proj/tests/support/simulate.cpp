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

#include "simulate.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "survsynth/csv.hpp"
#include "survsynth/error.hpp"
#include "survsynth/impute.hpp"

namespace survsynth::testing {
namespace {

double censored_share(const std::vector<double>& event_time, const std::vector<double>& unit_exp,
                      double rate) {
  std::size_t censored = 0;
  for (std::size_t i = 0; i < event_time.size(); ++i) {
    if (unit_exp[i] / rate < event_time[i]) ++censored;
  }
  return static_cast<double>(censored) / static_cast<double>(event_time.size());
}

}  // namespace

SurvivalDataset simulate(const SimulationSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::exponential_distribution<double> unit_exp(1.0);
  const std::size_t n = spec.rows;

  std::vector<ColumnSchema> schema;
  std::vector<std::vector<double>> columns;
  std::vector<double> eta(n, 0.0);
  for (int j = 0; j < spec.continuous; ++j) {
    schema.push_back({"x" + std::to_string(j), ColumnKind::continuous, {}});
    std::vector<double> col(n);
    const double beta = spec.effect * (j % 2 == 0 ? 1.0 : -0.6) / (1.0 + 0.3 * j);
    for (std::size_t i = 0; i < n; ++i) {
      // Mix of symmetric and skewed marginals.
      const double z = normal(rng);
      col[i] = j % 3 == 2 ? std::round(std::exp(0.5 * z) * 100.0) / 10.0 : 50.0 + 10.0 * z;
      eta[i] += beta * z;
    }
    columns.push_back(std::move(col));
  }
  for (int j = 0; j < spec.categorical; ++j) {
    ColumnSchema c{"g" + std::to_string(j), ColumnKind::categorical, {}};
    for (int l = 0; l < spec.levels; ++l) c.categories.push_back(std::string(1, static_cast<char>('a' + l)));
    schema.push_back(c);
    std::vector<double> col(n);
    for (std::size_t i = 0; i < n; ++i) {
      // Unequal level frequencies.
      const double u = unif(rng);
      int level = 0;
      double acc = 0.0, mass = 0.5;
      for (; level < spec.levels - 1; ++level) {
        acc += mass;
        if (u < acc) break;
        mass *= 0.6;
      }
      col[i] = level;
      eta[i] += spec.effect * 0.5 * (level - 0.5 * (spec.levels - 1)) * (j % 2 == 0 ? 1.0 : -1.0);
    }
    columns.push_back(std::move(col));
  }

  std::vector<double> event_time(n), cens_draw(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double e = unit_exp(rng) / std::exp(eta[i]);
    event_time[i] = spec.time_scale * std::pow(e / std::log(2.0), 1.0 / spec.weibull_shape);
    cens_draw[i] = unit_exp(rng);
  }
  // Bisection on the censoring rate (in log space) to hit the target share.
  double lo = 1e-8, hi = 1e4;
  for (int it = 0; it < 200; ++it) {
    const double mid = std::sqrt(lo * hi);
    if (censored_share(event_time, cens_draw, mid) < spec.censored_fraction) lo = mid; else hi = mid;
  }
  const double rate = std::sqrt(lo * hi);
  const double scale = std::pow(10.0, spec.time_decimals);
  std::vector<double> time(n);
  std::vector<int> event(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double c = cens_draw[i] / rate;
    const double t = std::min(event_time[i], c);
    time[i] = std::max(std::round(t * scale) / scale, 1.0 / scale);
    event[i] = event_time[i] <= c ? 1 : 0;
  }
  CsvLayout layout;
  for (const auto& c : schema) layout.order.push_back(c.name);
  layout.order.push_back(layout.time_name);
  layout.order.push_back(layout.event_name);
  return SurvivalDataset(std::move(schema), std::move(columns), std::move(time), std::move(event),
                         std::move(layout));
}

SimulationSpec gbsg_like() {
  return {"gbsg", 2232, 4, 3, 2, 965.0 / 2232.0, 1.3, 60.0, 0.6, 1};
}

SimulationSpec flchain_like() {
  return {"flchain", 7874, 6, 3, 3, 5705.0 / 7874.0, 1.1, 4000.0, 0.9, 0};
}

SimulationSpec aids_like() {
  return {"aids", 1151, 6, 5, 2, 1055.0 / 1151.0, 1.0, 250.0, 0.7, 0};
}

std::optional<SurvivalDataset> load_public(const std::filesystem::path& data_dir,
                                           const std::string& name) {
  const auto csv = data_dir / (name + ".csv");
  const auto schema = data_dir / (name + ".schema.json");
  if (!std::filesystem::exists(csv) || !std::filesystem::exists(schema)) return std::nullopt;
  const SurvivalDataset ds = load_csv(csv, load_schema_config(schema));
  return ds.has_missing() ? impute_missing(ds) : ds;
}

NamedDataset public_or_simulated(const std::filesystem::path& data_dir, const std::string& name,
                                 std::uint64_t seed) {
  if (auto ds = load_public(data_dir, name)) return {name, false, std::move(*ds)};
  SimulationSpec spec = name == "gbsg" ? gbsg_like() : name == "flchain" ? flchain_like() : aids_like();
  return {name, true, simulate(spec, seed)};
}

}  // namespace survsynth::testing
