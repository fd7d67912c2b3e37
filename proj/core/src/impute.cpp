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

#include "survsynth/impute.hpp"

#include <algorithm>

#include "survsynth/error.hpp"

namespace survsynth {

SurvivalDataset impute_missing(const SurvivalDataset& ds) {
  // time and event can never be missing: the dataset constructor rejects it.
  auto cols = ds.columns();
  for (std::size_t j = 0; j < cols.size(); ++j) {
    auto& col = cols[j];
    const auto& schema = ds.column_schema(j);
    double fill = 0.0;
    std::size_t observed = 0;
    if (schema.is_categorical()) {
      std::vector<std::size_t> counts(schema.categories.size(), 0);
      for (double v : col) {
        if (is_missing(v)) continue;
        ++counts[static_cast<std::size_t>(v)];
        ++observed;
      }
      // max_element returns the first maximum, i.e. the lowest index on ties.
      fill = static_cast<double>(std::max_element(counts.begin(), counts.end()) - counts.begin());
    } else {
      double sum = 0.0;
      for (double v : col) {
        if (is_missing(v)) continue;
        sum += v;
        ++observed;
      }
      fill = observed ? sum / static_cast<double>(observed) : 0.0;
    }
    if (observed == 0 && !col.empty()) {
      throw DomainError("column '" + schema.name + "' is entirely missing");
    }
    std::replace_if(col.begin(), col.end(), [](double v) { return is_missing(v); }, fill);
  }
  return ds.with_columns(std::move(cols), {ds.time().begin(), ds.time().end()},
                         {ds.event().begin(), ds.event().end()});
}

}  // namespace survsynth
