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

#include "survsynth/generator.hpp"

#include <string>

#include "survsynth/error.hpp"

namespace survsynth {

std::string_view to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::conditional_cvae: return "cvae";
    case GeneratorKind::unconditional_cvae: return "unconditional";
    case GeneratorKind::smote: return "smote";
  }
  return "cvae";
}

GeneratorKind generator_kind_from_string(std::string_view name) {
  if (name == "cvae") return GeneratorKind::conditional_cvae;
  if (name == "unconditional") return GeneratorKind::unconditional_cvae;
  if (name == "smote") return GeneratorKind::smote;
  throw ConfigError("unknown generator '" + std::string(name) +
                    "' (expected cvae, unconditional or smote)");
}

GeneratorHandle::GeneratorHandle(GeneratorKind kind, std::variant<CvaeModel, SmoteModel> payload,
                                 std::vector<ColumnSchema> schema, CsvLayout layout)
    : kind_(kind), payload_(std::move(payload)), schema_(std::move(schema)),
      layout_(std::move(layout)) {
  bool ok = false;
  if (const auto* m = std::get_if<CvaeModel>(&payload_)) {
    ok = (kind_ == GeneratorKind::conditional_cvae && m->conditional) ||
         (kind_ == GeneratorKind::unconditional_cvae && !m->conditional);
    ok = ok && m->data_encoder.schema() == schema_;
  } else {
    ok = kind_ == GeneratorKind::smote && smote().data.schema() == schema_;
  }
  if (!ok) throw ConfigError("generator kind does not match its stored model");
}

GeneratorHandle fit_generator(const SurvivalDataset& ds, GeneratorKind kind,
                              const GeneratorOptions& options, std::uint64_t seed) {
  if (ds.has_missing()) throw DomainError("generators require a dataset without missing cells");
  switch (kind) {
    case GeneratorKind::conditional_cvae:
      return {kind, train_cvae(ds, options.cvae, seed), ds.schema(), ds.layout()};
    case GeneratorKind::unconditional_cvae:
      return {kind, train_unconditional_cvae(ds, options.cvae, seed), ds.schema(), ds.layout()};
    case GeneratorKind::smote:
      if (options.smote_k < 1) throw ConfigError("SMOTE k must be at least 1");
      return {kind, SmoteModel{ds, options.smote_k}, ds.schema(), ds.layout()};
  }
  throw ConfigError("unknown generator kind");
}

SurvivalDataset generate_given(const GeneratorHandle& gen, std::vector<double> time,
                               std::vector<int> event, std::mt19937_64& rng) {
  if (gen.kind() != GeneratorKind::conditional_cvae) {
    throw ConfigError("conditional generation needs a conditional CVAE");
  }
  auto columns = cvae_sample_covariates(gen.cvae(), time, event, rng);
  return SurvivalDataset(gen.schema(), std::move(columns), std::move(time), std::move(event),
                         gen.layout());
}

SurvivalDataset generate(const GeneratorHandle& gen, const EventTimeSampler& sampler,
                         std::size_t n, std::mt19937_64& rng) {
  if (n < 1) throw DomainError("synthetic sample size must be at least 1");
  switch (gen.kind()) {
    case GeneratorKind::conditional_cvae: {
      const auto pairs = sampler.sample_joint(n, rng);
      std::vector<double> time(n);
      std::vector<int> event(n);
      for (std::size_t i = 0; i < n; ++i) {
        time[i] = pairs[i].first;
        event[i] = pairs[i].second;
      }
      return generate_given(gen, std::move(time), std::move(event), rng);
    }
    case GeneratorKind::unconditional_cvae: {
      const SurvivalDataset like(gen.schema(), std::vector<std::vector<double>>(gen.schema().size()),
                                 {}, {}, gen.layout());
      return cvae_sample_unconditional(gen.cvae(), like, n, rng);
    }
    case GeneratorKind::smote:
      return smote_generate(gen.smote().data, SmoteOptions{gen.smote().k, std::nullopt}, n, rng);
  }
  throw ConfigError("unknown generator kind");
}

}  // namespace survsynth
