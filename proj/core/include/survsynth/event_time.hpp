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

// Marginal event-indicator model p(e) and per-type event-time models
// p(t | e = 0), p(t | e = 1).

#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "survsynth/dataset.hpp"
#include "survsynth/dpmm.hpp"

namespace survsynth {

struct EventRateModel {
  double rate = 0.0;  // p(e = 1)
};

EventRateModel fit_event_rate(const SurvivalDataset& ds);
EventRateModel fit_event_rate(std::span<const int> events);

enum class SamplerMode { dpmm, empirical };
std::string_view to_string(SamplerMode mode);
SamplerMode sampler_mode_from_string(std::string_view name);

// Sorted list of observed times for one event type.
struct EmpiricalTimes {
  std::vector<double> times;
};

using TimeModel = std::variant<DpmmModel, EmpiricalTimes>;

class EventTimeSampler {
 public:
  EventTimeSampler() = default;
  // Both time models must be non-empty; DPMM models must match `mode`.
  EventTimeSampler(SamplerMode mode, EventRateModel rate, TimeModel censored, TimeModel observed);

  SamplerMode mode() const { return mode_; }
  const EventRateModel& rate_model() const { return rate_; }
  double rate() const { return rate_.rate; }
  // Model for event type e (0 = censored, 1 = event).
  const TimeModel& time_model(int e) const { return models_.at(static_cast<std::size_t>(e)); }

  // One draw from p(t | e). DPMM draws outside [0, upper_bound] are redrawn
  // up to 100 times, then clamped into range (logged).
  double sample_event_time(int e, std::mt19937_64& rng) const;
  // n i.i.d. (t, e) pairs: e ~ Bernoulli(rate), t ~ p(t | e).
  std::vector<std::pair<double, int>> sample_joint(std::size_t n, std::mt19937_64& rng) const;

 private:
  SamplerMode mode_ = SamplerMode::empirical;
  EventRateModel rate_;
  std::array<TimeModel, 2> models_;
};

// Fits p(e) and both p(t | e) from a dataset. Each event type needs at least
// one row.
EventTimeSampler fit_event_time_sampler(const SurvivalDataset& ds, SamplerMode mode,
                                        const DpmmConfig& config, std::uint64_t seed);

inline constexpr int kRejectionBudget = 100;

}  // namespace survsynth
