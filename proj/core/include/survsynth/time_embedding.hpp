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

// Sinusoidal time embedding used to build the generator's condition vector
// c = E_t(t) (+) e.

#pragma once

#include <vector>

namespace survsynth {

struct TimeEmbeddingConfig {
  int m = 4;             // even
  double t_scale = 1.0;  // maximum training time

  friend bool operator==(const TimeEmbeddingConfig&, const TimeEmbeddingConfig&) = default;
};

void validate(const TimeEmbeddingConfig& cfg);

// With s = t / t_scale: out[2i] = sin(s / 10000^(2i/m)),
// out[2i+1] = cos(s / 10000^(2i/m)), i = 0 .. m/2 - 1.
std::vector<double> embed_time(double t, const TimeEmbeddingConfig& cfg);

// embed_time(t) followed by the event indicator; length m + 1.
std::vector<double> condition_vector(double t, int e, const TimeEmbeddingConfig& cfg);

}  // namespace survsynth
