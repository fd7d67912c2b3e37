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

#include "survsynth/encoder.hpp"

#include <algorithm>
#include <cmath>

#include "survsynth/error.hpp"

namespace survsynth {
namespace {

// Sums run over sorted values so the statistics do not depend on row order.
std::pair<double, double> mean_and_std(std::span<const double> column) {
  std::vector<double> v(column.begin(), column.end());
  std::sort(v.begin(), v.end());
  const double n = static_cast<double>(v.size());
  double mean = 0.0;
  for (double x : v) mean += x;
  mean = v.empty() ? 0.0 : mean / n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double sd = v.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  return {mean, std::max(sd, kStdFloor)};
}

}  // namespace

Encoder::Encoder(std::vector<ColumnSchema> schema, std::vector<SlotGroup> groups,
                 EncoderOptions options)
    : schema_(std::move(schema)), groups_(std::move(groups)), options_(options) {
  for (const auto& g : groups_) {
    if (g.offset != width_) throw LayoutError("encoder slot groups are not contiguous");
    if (!(g.std > 0.0)) throw LayoutError("encoder standard deviation must be positive");
    width_ += g.width;
  }
}

Encoder Encoder::fit(const SurvivalDataset& ds, EncoderOptions options) {
  if (ds.has_missing()) throw DomainError("fit_encoder requires a dataset without missing cells");
  std::vector<SlotGroup> groups;
  std::size_t offset = 0;
  for (std::size_t j = 0; j < ds.cols(); ++j) {
    SlotGroup g;
    g.column = j;
    g.offset = offset;
    const auto& schema = ds.column_schema(j);
    if (schema.is_categorical()) {
      g.kind = SlotKind::categorical;
      g.width = schema.categories.size();
    } else {
      std::tie(g.mean, g.std) = mean_and_std(ds.column(j));
    }
    offset += g.width;
    groups.push_back(g);
  }
  if (options.include_time) {
    SlotGroup g;
    g.source = SlotGroup::Source::time;
    g.offset = offset++;
    std::tie(g.mean, g.std) = mean_and_std(ds.time());
    groups.push_back(g);
  }
  if (options.include_event) {
    SlotGroup g;
    g.source = SlotGroup::Source::event;
    g.kind = SlotKind::binary;
    g.offset = offset++;
    groups.push_back(g);
  }
  return Encoder(ds.schema(), std::move(groups), options);
}

EncodedMatrix Encoder::encode(const SurvivalDataset& ds) const {
  if (ds.schema() != schema_) throw LayoutError("dataset schema does not match encoder layout");
  EncodedMatrix m;
  m.layout = groups_;
  m.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(ds.rows()),
                                   static_cast<Eigen::Index>(width_));
  for (const auto& g : groups_) {
    const auto col = static_cast<Eigen::Index>(g.offset);
    for (std::size_t i = 0; i < ds.rows(); ++i) {
      const auto r = static_cast<Eigen::Index>(i);
      switch (g.source) {
        case SlotGroup::Source::time:
          m.values(r, col) = (ds.time()[i] - g.mean) / g.std;
          break;
        case SlotGroup::Source::event:
          m.values(r, col) = ds.event()[i];
          break;
        case SlotGroup::Source::covariate: {
          const double v = ds.value(i, g.column);
          if (is_missing(v)) throw DomainError("cannot encode a missing cell", static_cast<long>(i));
          if (g.kind == SlotKind::categorical) {
            m.values(r, col + static_cast<Eigen::Index>(v)) = 1.0;
          } else {
            m.values(r, col) = (v - g.mean) / g.std;
          }
          break;
        }
      }
    }
  }
  return m;
}

DecodedRows Encoder::decode(const Eigen::MatrixXd& values) const {
  if (static_cast<std::size_t>(values.cols()) != width_) {
    throw LayoutError("encoded width " + std::to_string(values.cols()) + " != encoder width " +
                      std::to_string(width_));
  }
  const auto n = static_cast<std::size_t>(values.rows());
  DecodedRows out;
  out.columns.assign(schema_.size(), std::vector<double>(n));
  for (const auto& g : groups_) {
    const auto col = static_cast<Eigen::Index>(g.offset);
    for (std::size_t i = 0; i < n; ++i) {
      const auto r = static_cast<Eigen::Index>(i);
      switch (g.source) {
        case SlotGroup::Source::time:
          out.time.push_back(values(r, col) * g.std + g.mean);
          break;
        case SlotGroup::Source::event:
          out.event.push_back(values(r, col));
          break;
        case SlotGroup::Source::covariate:
          if (g.kind == SlotKind::categorical) {
            Eigen::Index best = 0;
            // maxCoeff keeps the first maximum: ties resolve to the lowest index.
            values.row(r).segment(col, static_cast<Eigen::Index>(g.width)).maxCoeff(&best);
            out.columns[g.column][i] = static_cast<double>(best);
          } else {
            out.columns[g.column][i] = values(r, col) * g.std + g.mean;
          }
          break;
      }
    }
  }
  return out;
}

}  // namespace survsynth
