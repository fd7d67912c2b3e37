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

#include "survsynth/kaplan_meier.hpp"

#include <algorithm>
#include <numeric>

#include "survsynth/error.hpp"

namespace survsynth {

KMCurve kaplan_meier(std::span<const double> time, std::span<const int> event) {
  if (time.empty()) throw DomainError("kaplan_meier: empty input");
  if (time.size() != event.size()) throw DomainError("kaplan_meier: length mismatch");
  std::vector<std::size_t> order(time.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return time[a] < time[b]; });

  KMCurve curve;
  double s = 1.0;
  std::size_t at_risk = time.size();
  for (std::size_t k = 0; k < order.size();) {
    const double t = time[order[k]];
    if (t < 0.0) throw DomainError("kaplan_meier: negative time", static_cast<long>(order[k]));
    std::size_t d = 0, leaving = 0;
    for (; k < order.size() && time[order[k]] == t; ++k, ++leaving) d += event[order[k]] == 1;
    if (d > 0) {
      s *= 1.0 - static_cast<double>(d) / static_cast<double>(at_risk);
      curve.event_times.push_back(t);
      curve.survival.push_back(s);
      curve.n_at_risk.push_back(at_risk);
      curve.n_events.push_back(d);
    }
    at_risk -= leaving;
  }
  return curve;
}

double km_eval(const KMCurve& curve, double t) {
  const auto it = std::upper_bound(curve.event_times.begin(), curve.event_times.end(), t);
  if (it == curve.event_times.begin()) return 1.0;
  return curve.survival[static_cast<std::size_t>(it - curve.event_times.begin()) - 1];
}

double km_eval_left(const KMCurve& curve, double t) {
  const auto it = std::lower_bound(curve.event_times.begin(), curve.event_times.end(), t);
  if (it == curve.event_times.begin()) return 1.0;
  return curve.survival[static_cast<std::size_t>(it - curve.event_times.begin()) - 1];
}

}  // namespace survsynth
