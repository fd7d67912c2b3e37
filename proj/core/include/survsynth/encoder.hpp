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

// Numeric encoding of survival datasets: standardized continuous slots and
// one-hot categorical slot groups, optionally followed by a standardized time
// slot and a raw 0/1 event slot.

#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <vector>

#include "survsynth/dataset.hpp"

namespace survsynth {

inline constexpr double kStdFloor = 1e-8;

enum class SlotKind { continuous, categorical, binary };

struct SlotGroup {
  enum class Source { covariate, time, event };
  Source source = Source::covariate;
  std::size_t column = 0;  // covariate index when source == covariate
  SlotKind kind = SlotKind::continuous;
  std::size_t offset = 0;
  std::size_t width = 1;
  double mean = 0.0;
  double std = 1.0;

  friend bool operator==(const SlotGroup&, const SlotGroup&) = default;
};

struct EncoderOptions {
  bool include_time = false;
  bool include_event = false;

  friend bool operator==(const EncoderOptions&, const EncoderOptions&) = default;
};

struct EncodedMatrix {
  Eigen::MatrixXd values;  // rows x width
  std::vector<SlotGroup> layout;
};

struct DecodedRows {
  std::vector<std::vector<double>> columns;  // covariate cells, dataset convention
  std::vector<double> time;                  // filled when the encoder has a time slot
  std::vector<double> event;                 // raw decoded event slot, not thresholded
};

class Encoder {
 public:
  Encoder() = default;
  Encoder(std::vector<ColumnSchema> schema, std::vector<SlotGroup> groups, EncoderOptions options);

  // Statistics come from `ds` only. Standard deviations use the N-1
  // denominator and are floored at kStdFloor. `ds` must have no missing cells.
  static Encoder fit(const SurvivalDataset& ds, EncoderOptions options = {});

  EncodedMatrix encode(const SurvivalDataset& ds) const;
  // Inverse of encode: de-standardize continuous slots, argmax per categorical
  // group with ties going to the lowest index.
  DecodedRows decode(const Eigen::MatrixXd& values) const;
  DecodedRows decode(const EncodedMatrix& m) const { return decode(m.values); }

  std::size_t width() const { return width_; }
  const std::vector<SlotGroup>& groups() const { return groups_; }
  const std::vector<ColumnSchema>& schema() const { return schema_; }
  const EncoderOptions& options() const { return options_; }

  friend bool operator==(const Encoder&, const Encoder&) = default;

 private:
  std::vector<ColumnSchema> schema_;
  std::vector<SlotGroup> groups_;
  EncoderOptions options_;
  std::size_t width_ = 0;
};

}  // namespace survsynth
