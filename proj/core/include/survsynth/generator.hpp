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

// Generator front end: reverse-conditioned sampling of (t, e) followed by
// covariates, plus the unconditional and SMOTE baselines behind one handle.

#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <variant>

#include "survsynth/cvae.hpp"
#include "survsynth/dataset.hpp"
#include "survsynth/event_time.hpp"
#include "survsynth/smote.hpp"

namespace survsynth {

enum class GeneratorKind { conditional_cvae, unconditional_cvae, smote };
std::string_view to_string(GeneratorKind kind);
GeneratorKind generator_kind_from_string(std::string_view name);

// SMOTE keeps its training data; generation resamples it directly.
struct SmoteModel {
  SurvivalDataset data;
  int k = 5;
};

class GeneratorHandle {
 public:
  GeneratorHandle() = default;
  // Throws ConfigError when `kind` does not match the payload.
  GeneratorHandle(GeneratorKind kind, std::variant<CvaeModel, SmoteModel> payload,
                  std::vector<ColumnSchema> schema, CsvLayout layout);

  GeneratorKind kind() const { return kind_; }
  const std::vector<ColumnSchema>& schema() const { return schema_; }
  const CsvLayout& layout() const { return layout_; }
  const CvaeModel& cvae() const { return std::get<CvaeModel>(payload_); }
  const SmoteModel& smote() const { return std::get<SmoteModel>(payload_); }

 private:
  GeneratorKind kind_ = GeneratorKind::conditional_cvae;
  std::variant<CvaeModel, SmoteModel> payload_;
  std::vector<ColumnSchema> schema_;
  CsvLayout layout_;
};

struct GeneratorOptions {
  CvaeConfig cvae;
  int smote_k = 5;
};

GeneratorHandle fit_generator(const SurvivalDataset& ds, GeneratorKind kind,
                              const GeneratorOptions& options, std::uint64_t seed);

// Draws n synthetic rows. For the conditional kind the (time, event) columns
// are exactly the sampler's draws. The sampler is not used by the
// unconditional and SMOTE kinds.
SurvivalDataset generate(const GeneratorHandle& gen, const EventTimeSampler& sampler,
                         std::size_t n, std::mt19937_64& rng);

// Conditional covariate draw for given (t, e) pairs.
SurvivalDataset generate_given(const GeneratorHandle& gen, std::vector<double> time,
                               std::vector<int> event, std::mt19937_64& rng);

}  // namespace survsynth
