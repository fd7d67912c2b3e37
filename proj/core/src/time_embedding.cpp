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

#include "survsynth/time_embedding.hpp"

#include <cmath>
#include <string>

#include "survsynth/error.hpp"

namespace survsynth {

void validate(const TimeEmbeddingConfig& cfg) {
  if (cfg.m <= 0 || cfg.m % 2 != 0) {
    throw ConfigError("time embedding size must be a positive even number, got " +
                      std::to_string(cfg.m));
  }
  if (!(cfg.t_scale > 0.0)) throw ConfigError("time embedding scale must be positive");
}

std::vector<double> embed_time(double t, const TimeEmbeddingConfig& cfg) {
  validate(cfg);
  const double s = t / cfg.t_scale;
  std::vector<double> out(static_cast<std::size_t>(cfg.m));
  for (int i = 0; i < cfg.m / 2; ++i) {
    const double freq = std::pow(10000.0, 2.0 * i / cfg.m);
    out[2 * i] = std::sin(s / freq);
    out[2 * i + 1] = std::cos(s / freq);
  }
  return out;
}

std::vector<double> condition_vector(double t, int e, const TimeEmbeddingConfig& cfg) {
  auto c = embed_time(t, cfg);
  c.push_back(static_cast<double>(e));
  return c;
}

}  // namespace survsynth
