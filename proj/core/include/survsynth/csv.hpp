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

// CSV ingestion and emission for survival datasets, plus the schema config
// file that types each column.
//
// Schema config (JSON):
//   {
//     "time": "days", "event": "status",
//     "covariates": [
//       {"name": "age", "kind": "continuous"},
//       {"name": "stage", "kind": "categorical", "categories": ["I", "II"]}
//     ],
//     "missing": ["", "NA"]
//   }
// "categories" is optional; labels not listed are appended in first-appearance
// order. CSV columns not named in the config are ignored.

#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "survsynth/dataset.hpp"

namespace survsynth {

struct CovariateSpec {
  std::string name;
  ColumnKind kind = ColumnKind::continuous;
  std::vector<std::string> categories;

  friend bool operator==(const CovariateSpec&, const CovariateSpec&) = default;
};

struct SchemaConfig {
  std::string time_column = "time";
  std::string event_column = "event";
  std::vector<CovariateSpec> covariates;
  std::vector<std::string> missing_tokens = {"", "NA"};

  friend bool operator==(const SchemaConfig&, const SchemaConfig&) = default;
};

SchemaConfig parse_schema_config(std::string_view json_text);
SchemaConfig load_schema_config(const std::filesystem::path& path);
std::string schema_config_to_json(const SchemaConfig& config);
// Config that reproduces `ds`'s schema exactly, categories included.
SchemaConfig schema_config_from(const SurvivalDataset& ds);

SurvivalDataset read_csv(std::istream& in, const SchemaConfig& config);
SurvivalDataset load_csv(const std::filesystem::path& path, const SchemaConfig& config);

// Writes the dataset in its CsvLayout column order. Reals use the shortest
// representation that round-trips exactly; missing cells are empty.
void write_csv(std::ostream& out, const SurvivalDataset& ds);
void save_csv(const std::filesystem::path& path, const SurvivalDataset& ds);

// Splits one CSV record (RFC 4180 quoting). Exposed for tests.
std::vector<std::string> split_csv_record(std::string_view line);

}  // namespace survsynth
