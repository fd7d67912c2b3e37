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

#include "survsynth/event_time.hpp"

#include <algorithm>

#include "survsynth/error.hpp"
#include "survsynth/log.hpp"

namespace survsynth {

EventRateModel fit_event_rate(std::span<const int> events) {
  if (events.empty()) throw DomainError("fit_event_rate: empty dataset");
  const auto n1 = std::count(events.begin(), events.end(), 1);
  return {static_cast<double>(n1) / static_cast<double>(events.size())};
}

EventRateModel fit_event_rate(const SurvivalDataset& ds) { return fit_event_rate(ds.event()); }

std::string_view to_string(SamplerMode mode) {
  return mode == SamplerMode::dpmm ? "dpmm" : "empirical";
}

SamplerMode sampler_mode_from_string(std::string_view name) {
  if (name == "dpmm") return SamplerMode::dpmm;
  if (name == "empirical") return SamplerMode::empirical;
  throw ConfigError("unknown sampler mode '" + std::string(name) + "' (expected dpmm|empirical)");
}

EventTimeSampler::EventTimeSampler(SamplerMode mode, EventRateModel rate, TimeModel censored,
                                   TimeModel observed)
    : mode_(mode), rate_(rate), models_{std::move(censored), std::move(observed)} {
  if (!(rate_.rate >= 0.0 && rate_.rate <= 1.0)) throw DomainError("event rate outside [0, 1]");
  for (int e = 0; e < 2; ++e) {
    const auto& m = models_[e];
    if (mode_ == SamplerMode::empirical) {
      const auto* emp = std::get_if<EmpiricalTimes>(&m);
      if (!emp) throw ConfigError("empirical sampler needs stored time lists");
      if (emp->times.empty()) {
        throw DomainError("event type " + std::to_string(e) + " has no training times");
      }
      if (!std::is_sorted(emp->times.begin(), emp->times.end())) {
        throw DomainError("empirical time list must be sorted");
      }
    } else {
      const auto* dp = std::get_if<DpmmModel>(&m);
      if (!dp) throw ConfigError("dpmm sampler needs fitted mixtures");
      if (dp->weights.empty() || dp->weights.size() != dp->means.size() ||
          dp->weights.size() != dp->variances.size()) {
        throw DomainError("malformed mixture for event type " + std::to_string(e));
      }
      if (!(dp->upper_bound >= 0.0)) {
        throw DomainError("negative time bound for event type " + std::to_string(e));
      }
    }
  }
}

double EventTimeSampler::sample_event_time(int e, std::mt19937_64& rng) const {
  const auto& m = time_model(e);
  if (const auto* emp = std::get_if<EmpiricalTimes>(&m)) {
    std::uniform_int_distribution<std::size_t> pick(0, emp->times.size() - 1);
    return emp->times[pick(rng)];
  }
  const auto& dp = std::get<DpmmModel>(m);
  double t = 0.0;
  for (int attempt = 0; attempt < kRejectionBudget; ++attempt) {
    t = inverse_transform(dp.transform, dp.sample_transformed(rng));
    if (t >= 0.0 && t <= dp.upper_bound) return t;
  }
  t = std::clamp(t, 0.0, dp.upper_bound);
  log::warn("event-time draw stayed outside [0, " + std::to_string(dp.upper_bound) + "] after " +
            std::to_string(kRejectionBudget) + " attempts; clamped to " + std::to_string(t));
  return t;
}

std::vector<std::pair<double, int>> EventTimeSampler::sample_joint(std::size_t n,
                                                                   std::mt19937_64& rng) const {
  if (n < 1) throw DomainError("sample_joint: n must be >= 1");
  std::vector<std::pair<double, int>> out;
  out.reserve(n);
  std::bernoulli_distribution coin(rate_.rate);
  for (std::size_t i = 0; i < n; ++i) {
    const int e = coin(rng) ? 1 : 0;
    out.emplace_back(sample_event_time(e, rng), e);
  }
  return out;
}

EventTimeSampler fit_event_time_sampler(const SurvivalDataset& ds, SamplerMode mode,
                                        const DpmmConfig& config, std::uint64_t seed) {
  const auto rate = fit_event_rate(ds);
  std::array<std::vector<double>, 2> times;
  for (std::size_t i = 0; i < ds.rows(); ++i) times[ds.event()[i]].push_back(ds.time()[i]);
  std::array<TimeModel, 2> models;
  for (int e = 0; e < 2; ++e) {
    if (times[e].empty()) {
      throw DomainError(std::string("no ") + (e ? "event" : "censored") +
                        " rows to fit p(t | e=" + std::to_string(e) + ")");
    }
    if (mode == SamplerMode::empirical) {
      std::sort(times[e].begin(), times[e].end());
      models[e] = EmpiricalTimes{std::move(times[e])};
    } else {
      models[e] = fit_dpmm(times[e], config, seed + static_cast<std::uint64_t>(e));
    }
  }
  return EventTimeSampler(mode, rate, std::move(models[0]), std::move(models[1]));
}

}  // namespace survsynth
