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

// JSON persistence for fitted artifacts: encoders, event-time samplers, CVAE
// models, generator handles, datasets and the model bundle written by the
// command-line `fit` step. Every top-level document carries a format tag.

#pragma once

#include <filesystem>
#include <map>
#include <nlohmann/json.hpp>
#include <string>

#include "survsynth/csv.hpp"
#include "survsynth/encoder.hpp"
#include "survsynth/event_time.hpp"
#include "survsynth/generator.hpp"

namespace survsynth {

inline constexpr const char* kCvaeFormat = "survsynth.cvae.v1";
inline constexpr const char* kSamplerFormat = "survsynth.sampler.v1";
inline constexpr const char* kBundleFormat = "survsynth.bundle.v1";

nlohmann::json encoder_to_json(const Encoder& enc);
Encoder encoder_from_json(const nlohmann::json& j);

nlohmann::json sampler_to_json(const EventTimeSampler& s);
EventTimeSampler sampler_from_json(const nlohmann::json& j);

nlohmann::json cvae_config_to_json(const CvaeConfig& c);
// Missing keys keep their defaults; unknown keys are rejected.
CvaeConfig cvae_config_from_json(const nlohmann::json& j);
nlohmann::json dpmm_config_to_json(const DpmmConfig& c);
DpmmConfig dpmm_config_from_json(const nlohmann::json& j);

// Layer shapes are stored for validation and must match the shapes rebuilt
// from the config and encoder.
nlohmann::json cvae_to_json(const CvaeModel& m);
CvaeModel cvae_from_json(const nlohmann::json& j);

nlohmann::json dataset_to_json(const SurvivalDataset& ds);
SurvivalDataset dataset_from_json(const nlohmann::json& j);

nlohmann::json generator_to_json(const GeneratorHandle& g);
GeneratorHandle generator_from_json(const nlohmann::json& j);

// Everything `synthesize` needs: the schema used at fit time, the sampler,
// the generator and optional per-stratum samplers keyed by column name and
// category label.
struct ModelBundle {
  SchemaConfig schema;
  EventTimeSampler sampler;
  GeneratorHandle generator;
  std::map<std::string, std::map<std::string, EventTimeSampler>> strata_samplers;
};

nlohmann::json bundle_to_json(const ModelBundle& b);
ModelBundle bundle_from_json(const nlohmann::json& j);
void save_bundle(const std::filesystem::path& path, const ModelBundle& b);
ModelBundle load_bundle(const std::filesystem::path& path);

// Parses JSON text, mapping syntax errors to ParseError.
nlohmann::json parse_json(std::string_view text);

}  // namespace survsynth
