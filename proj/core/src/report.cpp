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

#include "survsynth/report.hpp"

#include <cmath>

#include "survsynth/error.hpp"
#include "survsynth/io.hpp"

namespace survsynth {

using json = nlohmann::json;

void finalize_aggregates(EvalReport& report) {
  std::map<std::string, std::vector<double>> values;
  for (const auto& run : report.runs) {
    for (const auto& [name, v] : run.metrics) values[name].push_back(v);
  }
  report.aggregates.clear();
  for (const auto& [name, v] : values) {
    Aggregate a;
    a.count = v.size();
    double sum = 0.0;
    for (double x : v) sum += x;
    a.mean = sum / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - a.mean) * (x - a.mean);
    a.std = std::sqrt(ss / static_cast<double>(v.size()));
    report.aggregates[name] = a;
  }
}

std::string report_to_string(const EvalReport& report) {
  json runs = json::array();
  for (const auto& r : report.runs) {
    runs.push_back({{"fold", r.fold},
                    {"seed", r.seed},
                    {"train_rows", r.train_rows},
                    {"synthetic_rows", r.synthetic_rows},
                    {"metrics", r.metrics}});
  }
  json aggregates = json::object();
  for (const auto& [name, a] : report.aggregates) {
    aggregates[name] = {{"mean", a.mean}, {"std", a.std}, {"count", a.count}};
  }
  const json doc{{"format", kReportFormat},
                 {"config", report.config},
                 {"runs", std::move(runs)},
                 {"aggregates", std::move(aggregates)}};
  return doc.dump(2) + "\n";
}

EvalReport report_from_string(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("report is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || doc.value("format", "") != kReportFormat) {
    throw SchemaError(std::string("expected a report with format '") + kReportFormat + "'");
  }
  EvalReport report;
  try {
    report.config = doc.at("config");
    for (const auto& r : doc.at("runs")) {
      RunRecord rec;
      rec.fold = r.at("fold").get<int>();
      rec.seed = r.at("seed").get<std::uint64_t>();
      rec.train_rows = r.at("train_rows").get<std::size_t>();
      rec.synthetic_rows = r.at("synthetic_rows").get<std::size_t>();
      rec.metrics = r.at("metrics").get<std::map<std::string, double>>();
      report.runs.push_back(std::move(rec));
    }
    for (const auto& [name, a] : doc.at("aggregates").items()) {
      report.aggregates[name] = {a.at("mean").get<double>(), a.at("std").get<double>(),
                                 a.at("count").get<std::size_t>()};
    }
  } catch (const json::exception& e) {
    throw SchemaError(std::string("report: ") + e.what());
  }
  return report;
}

void report_write(const EvalReport& report, const std::filesystem::path& path) {
  write_text_file_atomic(path, report_to_string(report));
}

EvalReport report_read(const std::filesystem::path& path) {
  return report_from_string(read_text_file(path));
}

}  // namespace survsynth
