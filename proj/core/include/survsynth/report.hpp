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

// Evaluation report: per-run metric values plus mean and standard deviation
// across runs, serialized as versioned JSON with a fixed field order.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

namespace survsynth {

inline constexpr const char* kReportFormat = "survsynth.report.v1";

struct RunRecord {
  int fold = 0;
  std::uint64_t seed = 0;
  std::size_t train_rows = 0;
  std::size_t synthetic_rows = 0;
  std::map<std::string, double> metrics;

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

struct Aggregate {
  double mean = 0.0;
  double std = 0.0;  // population standard deviation (denominator N)
  std::size_t count = 0;

  friend bool operator==(const Aggregate&, const Aggregate&) = default;
};

struct EvalReport {
  nlohmann::json config;  // snapshot of the settings that produced the runs
  std::vector<RunRecord> runs;
  std::map<std::string, Aggregate> aggregates;

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

// Recomputes `aggregates` from `runs`.
void finalize_aggregates(EvalReport& report);

std::string report_to_string(const EvalReport& report);
EvalReport report_from_string(std::string_view text);
// Atomic write; throws IoError when the path is not writable.
void report_write(const EvalReport& report, const std::filesystem::path& path);
EvalReport report_read(const std::filesystem::path& path);

}  // namespace survsynth
