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

#include "survsynth/dataset.hpp"

#include <algorithm>
#include <set>

#include "survsynth/error.hpp"

namespace survsynth {

std::string_view to_string(ColumnKind kind) {
  return kind == ColumnKind::continuous ? "continuous" : "categorical";
}

ColumnKind column_kind_from_string(std::string_view name) {
  if (name == "continuous") return ColumnKind::continuous;
  if (name == "categorical") return ColumnKind::categorical;
  throw SchemaError("unknown column kind '" + std::string(name) +
                    "' (expected continuous or categorical)");
}

std::optional<int> ColumnSchema::category_index(std::string_view label) const {
  for (std::size_t i = 0; i < categories.size(); ++i) {
    if (categories[i] == label) return static_cast<int>(i);
  }
  return std::nullopt;
}

SurvivalDataset::SurvivalDataset(std::vector<ColumnSchema> schema,
                                 std::vector<std::vector<double>> columns,
                                 std::vector<double> time, std::vector<int> event,
                                 CsvLayout layout)
    : schema_(std::move(schema)),
      columns_(std::move(columns)),
      time_(std::move(time)),
      event_(std::move(event)),
      layout_(std::move(layout)) {
  if (layout_.order.empty()) {
    for (const auto& c : schema_) layout_.order.push_back(c.name);
    layout_.order.push_back(layout_.time_name);
    layout_.order.push_back(layout_.event_name);
  }
  validate();
}

void SurvivalDataset::validate() const {
  std::set<std::string> names;
  for (const auto& c : schema_) {
    if (!names.insert(c.name).second) throw SchemaError("duplicate column name '" + c.name + "'");
    if (c.is_categorical()) {
      if (c.categories.size() < 2) {
        throw SchemaError("categorical column '" + c.name + "' needs at least 2 categories");
      }
      std::set<std::string> labels(c.categories.begin(), c.categories.end());
      if (labels.size() != c.categories.size()) {
        throw SchemaError("categorical column '" + c.name + "' has duplicate categories");
      }
    } else if (!c.categories.empty()) {
      throw SchemaError("continuous column '" + c.name + "' must not list categories");
    }
  }
  if (names.count(layout_.time_name) || names.count(layout_.event_name)) {
    throw SchemaError("time/event column name collides with a covariate");
  }
  if (columns_.size() != schema_.size()) {
    throw SchemaError("column count does not match schema");
  }
  if (event_.size() != time_.size()) throw SchemaError("time and event lengths differ");
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    if (columns_[j].size() != time_.size()) {
      throw SchemaError("column '" + schema_[j].name + "' length differs from time vector");
    }
    if (!schema_[j].is_categorical()) continue;
    const double k = static_cast<double>(schema_[j].categories.size());
    for (std::size_t i = 0; i < columns_[j].size(); ++i) {
      const double v = columns_[j][i];
      if (is_missing(v)) continue;
      if (v < 0 || v >= k || v != std::floor(v)) {
        throw DomainError("categorical code out of range in column '" + schema_[j].name + "'",
                          static_cast<long>(i));
      }
    }
  }
  for (std::size_t i = 0; i < time_.size(); ++i) {
    if (!(time_[i] >= 0.0) || !std::isfinite(time_[i])) {
      throw DomainError("time must be finite and non-negative (row " + std::to_string(i) + ")",
                        static_cast<long>(i));
    }
    if (event_[i] != 0 && event_[i] != 1) {
      throw DomainError("event must be 0 or 1 (row " + std::to_string(i) + ")",
                        static_cast<long>(i));
    }
  }
}

std::optional<std::size_t> SurvivalDataset::column_index(std::string_view name) const {
  for (std::size_t j = 0; j < schema_.size(); ++j) {
    if (schema_[j].name == name) return j;
  }
  return std::nullopt;
}

std::string SurvivalDataset::label(std::size_t row, std::size_t col) const {
  const double v = columns_.at(col).at(row);
  if (is_missing(v)) return {};
  return schema_[col].categories.at(static_cast<std::size_t>(v));
}

bool SurvivalDataset::has_missing() const {
  return std::any_of(columns_.begin(), columns_.end(), [](const auto& col) {
    return std::any_of(col.begin(), col.end(), [](double v) { return is_missing(v); });
  });
}

std::size_t SurvivalDataset::event_count() const {
  return static_cast<std::size_t>(std::count(event_.begin(), event_.end(), 1));
}

double SurvivalDataset::max_time() const {
  if (time_.empty()) throw DomainError("max_time of an empty dataset");
  return *std::max_element(time_.begin(), time_.end());
}

SurvivalDataset SurvivalDataset::subset(std::span<const std::size_t> indices) const {
  std::vector<std::vector<double>> cols(columns_.size());
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    cols[j].reserve(indices.size());
    for (auto i : indices) cols[j].push_back(columns_[j].at(i));
  }
  std::vector<double> t;
  std::vector<int> e;
  t.reserve(indices.size());
  e.reserve(indices.size());
  for (auto i : indices) {
    t.push_back(time_.at(i));
    e.push_back(event_.at(i));
  }
  return SurvivalDataset(schema_, std::move(cols), std::move(t), std::move(e), layout_);
}

SurvivalDataset SurvivalDataset::with_columns(std::vector<std::vector<double>> columns,
                                              std::vector<double> time,
                                              std::vector<int> event) const {
  return SurvivalDataset(schema_, std::move(columns), std::move(time), std::move(event), layout_);
}

SurvivalDataset SurvivalDataset::with_column(std::size_t j, std::vector<double> values) const {
  auto cols = columns_;
  cols.at(j) = std::move(values);
  return SurvivalDataset(schema_, std::move(cols), time_, event_, layout_);
}

namespace {
bool same_values(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (is_missing(a[i]) != is_missing(b[i])) return false;
    if (!is_missing(a[i]) && a[i] != b[i]) return false;
  }
  return true;
}
}  // namespace

bool operator==(const SurvivalDataset& a, const SurvivalDataset& b) {
  if (a.schema_ != b.schema_ || a.layout_ != b.layout_) return false;
  if (a.time_ != b.time_ || a.event_ != b.event_) return false;
  for (std::size_t j = 0; j < a.columns_.size(); ++j) {
    if (!same_values(a.columns_[j], b.columns_[j])) return false;
  }
  return true;
}

bool same_schema(const SurvivalDataset& a, const SurvivalDataset& b) {
  return a.schema() == b.schema();
}

SurvivalDataset concat(std::span<const SurvivalDataset> parts) {
  if (parts.empty()) throw DomainError("concat of zero datasets");
  const auto& first = parts.front();
  std::vector<std::vector<double>> cols(first.cols());
  std::vector<double> t;
  std::vector<int> e;
  for (const auto& p : parts) {
    if (!same_schema(first, p)) throw SchemaError("concat: schema mismatch");
    for (std::size_t j = 0; j < p.cols(); ++j) {
      cols[j].insert(cols[j].end(), p.column(j).begin(), p.column(j).end());
    }
    t.insert(t.end(), p.time().begin(), p.time().end());
    e.insert(e.end(), p.event().begin(), p.event().end());
  }
  return SurvivalDataset(first.schema(), std::move(cols), std::move(t), std::move(e),
                         first.layout());
}

}  // namespace survsynth
