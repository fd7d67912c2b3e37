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

// Survival dataset representation: the (covariates, time, event) triplet plus
// the typed column schema.
//
// Covariates are stored column-major as doubles. Continuous cells hold their
// value; categorical cells hold the category index into the column's
// category list. Missing cells are NaN in both cases. A dataset is immutable
// after construction and every constructor validates its invariants.

#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace survsynth {

enum class ColumnKind { continuous, categorical };

std::string_view to_string(ColumnKind kind);
ColumnKind column_kind_from_string(std::string_view name);

struct ColumnSchema {
  std::string name;
  ColumnKind kind = ColumnKind::continuous;
  // Ordered category labels; empty for continuous columns.
  std::vector<std::string> categories;

  bool is_categorical() const { return kind == ColumnKind::categorical; }
  // Index of `label`, or nullopt when unknown.
  std::optional<int> category_index(std::string_view label) const;

  friend bool operator==(const ColumnSchema&, const ColumnSchema&) = default;
};

inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();
inline bool is_missing(double v) { return std::isnan(v); }

// Names used when the dataset is written back to CSV.
struct CsvLayout {
  std::string time_name = "time";
  std::string event_name = "event";
  // Full column order of the source file (covariates, time, event).
  std::vector<std::string> order;

  friend bool operator==(const CsvLayout&, const CsvLayout&) = default;
};

class SurvivalDataset {
 public:
  SurvivalDataset() = default;

  // Validates: unique names, >= 2 categories per categorical column, aligned
  // lengths, time >= 0, event in {0,1}, categorical codes in range. Missing
  // covariate cells (NaN) are permitted; see has_missing().
  SurvivalDataset(std::vector<ColumnSchema> schema,
                  std::vector<std::vector<double>> columns,
                  std::vector<double> time, std::vector<int> event,
                  CsvLayout layout = {});

  std::size_t rows() const { return time_.size(); }
  std::size_t cols() const { return schema_.size(); }
  bool empty() const { return time_.empty(); }

  const std::vector<ColumnSchema>& schema() const { return schema_; }
  const ColumnSchema& column_schema(std::size_t j) const { return schema_.at(j); }
  std::optional<std::size_t> column_index(std::string_view name) const;

  std::span<const double> column(std::size_t j) const { return columns_.at(j); }
  const std::vector<std::vector<double>>& columns() const { return columns_; }
  double value(std::size_t row, std::size_t col) const { return columns_[col][row]; }
  // Category label of a categorical cell, empty string when missing.
  std::string label(std::size_t row, std::size_t col) const;

  std::span<const double> time() const { return time_; }
  std::span<const int> event() const { return event_; }
  const CsvLayout& layout() const { return layout_; }

  bool has_missing() const;
  std::size_t event_count() const;
  std::size_t censored_count() const { return rows() - event_count(); }
  double max_time() const;

  // Row subset in the given order (indices may repeat).
  SurvivalDataset subset(std::span<const std::size_t> indices) const;
  // Same schema, new data.
  SurvivalDataset with_columns(std::vector<std::vector<double>> columns,
                               std::vector<double> time, std::vector<int> event) const;
  // Same rows with one covariate column replaced.
  SurvivalDataset with_column(std::size_t j, std::vector<double> values) const;

  friend bool operator==(const SurvivalDataset& a, const SurvivalDataset& b);

 private:
  void validate() const;

  std::vector<ColumnSchema> schema_;
  std::vector<std::vector<double>> columns_;
  std::vector<double> time_;
  std::vector<int> event_;
  CsvLayout layout_;
};

// Row-wise concatenation; schemas must be identical.
SurvivalDataset concat(std::span<const SurvivalDataset> parts);

// True when both schemas list the same columns with the same kinds and
// categories.
bool same_schema(const SurvivalDataset& a, const SurvivalDataset& b);

}  // namespace survsynth
