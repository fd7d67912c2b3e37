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

#include "survsynth/csv.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <sstream>

#include "survsynth/error.hpp"
#include "survsynth/io.hpp"

namespace survsynth {
namespace {

using json = nlohmann::json;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_real(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::string quote_if_needed(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::vector<std::string> split_csv_record(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  for (auto& f : fields) f = std::string(trim(f));
  return fields;
}

SchemaConfig parse_schema_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw SchemaError(std::string("schema config is not valid JSON: ") + e.what());
  }
  SchemaConfig cfg;
  try {
    cfg.time_column = doc.at("time").get<std::string>();
    cfg.event_column = doc.at("event").get<std::string>();
    for (const auto& c : doc.at("covariates")) {
      CovariateSpec spec;
      spec.name = c.at("name").get<std::string>();
      spec.kind = column_kind_from_string(c.at("kind").get<std::string>());
      if (c.contains("categories")) {
        for (const auto& cat : c.at("categories")) {
          spec.categories.push_back(cat.is_string() ? cat.get<std::string>() : cat.dump());
        }
      }
      cfg.covariates.push_back(std::move(spec));
    }
    if (doc.contains("missing")) cfg.missing_tokens = doc.at("missing").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw SchemaError(std::string("schema config: ") + e.what());
  }
  if (cfg.time_column == cfg.event_column) {
    throw SchemaError("time and event must be different columns");
  }
  return cfg;
}

SchemaConfig load_schema_config(const std::filesystem::path& path) {
  return parse_schema_config(read_text_file(path));
}

std::string schema_config_to_json(const SchemaConfig& config) {
  json doc;
  doc["time"] = config.time_column;
  doc["event"] = config.event_column;
  doc["covariates"] = json::array();
  for (const auto& c : config.covariates) {
    json col{{"name", c.name}, {"kind", std::string(to_string(c.kind))}};
    if (!c.categories.empty()) col["categories"] = c.categories;
    doc["covariates"].push_back(col);
  }
  doc["missing"] = config.missing_tokens;
  return doc.dump(2);
}

SchemaConfig schema_config_from(const SurvivalDataset& ds) {
  SchemaConfig cfg;
  cfg.time_column = ds.layout().time_name;
  cfg.event_column = ds.layout().event_name;
  for (const auto& c : ds.schema()) cfg.covariates.push_back({c.name, c.kind, c.categories});
  return cfg;
}

SurvivalDataset read_csv(std::istream& in, const SchemaConfig& config) {
  std::string line;
  if (!std::getline(in, line)) throw SchemaError("CSV has no header row");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  const auto header = split_csv_record(line);

  std::map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (!position.emplace(header[i], i).second) {
      throw SchemaError("duplicate CSV column '" + header[i] + "'");
    }
  }
  auto require = [&](const std::string& name) {
    auto it = position.find(name);
    if (it == position.end()) throw SchemaError("missing column '" + name + "'");
    return it->second;
  };
  const std::size_t time_pos = require(config.time_column);
  const std::size_t event_pos = require(config.event_column);
  std::vector<std::size_t> cov_pos;
  for (const auto& c : config.covariates) cov_pos.push_back(require(c.name));

  std::vector<ColumnSchema> schema;
  for (const auto& c : config.covariates) schema.push_back({c.name, c.kind, c.categories});

  CsvLayout layout;
  layout.time_name = config.time_column;
  layout.event_name = config.event_column;
  for (const auto& name : header) {
    const bool used = name == config.time_column || name == config.event_column ||
                      std::any_of(config.covariates.begin(), config.covariates.end(),
                                  [&](const CovariateSpec& c) { return c.name == name; });
    if (used) layout.order.push_back(name);
  }

  auto is_missing_token = [&](std::string_view s) {
    return std::find(config.missing_tokens.begin(), config.missing_tokens.end(), s) !=
           config.missing_tokens.end();
  };

  std::vector<std::vector<double>> cols(config.covariates.size());
  std::vector<double> time;
  std::vector<int> event;
  long row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto fields = split_csv_record(line);
    const std::string where = " (row " + std::to_string(row) + ")";
    if (fields.size() != header.size()) {
      throw ParseError("expected " + std::to_string(header.size()) + " fields, found " +
                           std::to_string(fields.size()) + where,
                       row);
    }
    const auto& ts = fields[time_pos];
    if (is_missing_token(ts)) throw DomainError("missing time value" + where, row);
    auto t = parse_real(ts);
    if (!t) throw ParseError("non-numeric time '" + ts + "'" + where, row);
    if (*t < 0.0) throw DomainError("negative time" + where, row);
    if (!std::isfinite(*t)) throw DomainError("non-finite time" + where, row);

    const auto& es = fields[event_pos];
    if (is_missing_token(es)) throw DomainError("missing event value" + where, row);
    auto e = parse_real(es);
    if (!e) throw ParseError("non-numeric event '" + es + "'" + where, row);
    if (*e != 0.0 && *e != 1.0) throw DomainError("event must be 0 or 1" + where, row);
    time.push_back(*t);
    event.push_back(static_cast<int>(*e));

    for (std::size_t j = 0; j < cov_pos.size(); ++j) {
      const auto& cell = fields[cov_pos[j]];
      if (is_missing_token(cell)) {
        cols[j].push_back(kMissing);
        continue;
      }
      auto& col = schema[j];
      if (col.is_categorical()) {
        auto idx = col.category_index(cell);
        if (!idx) {
          col.categories.push_back(cell);
          idx = static_cast<int>(col.categories.size() - 1);
        }
        cols[j].push_back(static_cast<double>(*idx));
      } else {
        auto v = parse_real(cell);
        if (!v) {
          throw ParseError("non-numeric value '" + cell + "' in column '" + col.name + "'" + where,
                           row);
        }
        cols[j].push_back(*v);
      }
    }
    ++row;
  }
  return SurvivalDataset(std::move(schema), std::move(cols), std::move(time), std::move(event),
                         std::move(layout));
}

SurvivalDataset load_csv(const std::filesystem::path& path, const SchemaConfig& config) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return read_csv(in, config);
}

void write_csv(std::ostream& out, const SurvivalDataset& ds) {
  const auto& layout = ds.layout();
  enum class Src { covariate, time, event };
  std::vector<std::pair<Src, std::size_t>> plan;
  for (std::size_t k = 0; k < layout.order.size(); ++k) {
    const auto& name = layout.order[k];
    if (k) out << ',';
    out << quote_if_needed(name);
    if (name == layout.time_name) {
      plan.emplace_back(Src::time, 0);
    } else if (name == layout.event_name) {
      plan.emplace_back(Src::event, 0);
    } else {
      auto j = ds.column_index(name);
      if (!j) throw SchemaError("layout names unknown column '" + name + "'");
      plan.emplace_back(Src::covariate, *j);
    }
  }
  out << '\n';
  for (std::size_t i = 0; i < ds.rows(); ++i) {
    for (std::size_t k = 0; k < plan.size(); ++k) {
      if (k) out << ',';
      const auto [src, j] = plan[k];
      switch (src) {
        case Src::time:
          out << format_real(ds.time()[i]);
          break;
        case Src::event:
          out << ds.event()[i];
          break;
        case Src::covariate: {
          const double v = ds.value(i, j);
          if (is_missing(v)) break;
          if (ds.column_schema(j).is_categorical()) {
            out << quote_if_needed(ds.label(i, j));
          } else {
            out << format_real(v);
          }
          break;
        }
      }
    }
    out << '\n';
  }
}

void save_csv(const std::filesystem::path& path, const SurvivalDataset& ds) {
  std::ostringstream buf;
  write_csv(buf, ds);
  write_text_file_atomic(path, buf.str());
}

}  // namespace survsynth
