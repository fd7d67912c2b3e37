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
#include <span>
#include <vector>

namespace survsynth {

// Product-limit estimate. One knot per distinct time with at least one event.
struct KMCurve {
  std::vector<double> event_times;  // strictly increasing
  std::vector<double> survival;     // S just after each knot
  std::vector<std::size_t> n_at_risk;
  std::vector<std::size_t> n_events;
};

KMCurve kaplan_meier(std::span<const double> time, std::span<const int> event);

// Right-continuous step evaluation: 1 before the first knot, carry-forward
// after the last.
double km_eval(const KMCurve& curve, double t);
// Left limit S(t-): the value strictly before t.
double km_eval_left(const KMCurve& curve, double t);

}  // namespace survsynth
