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

#pragma once

#include "survsynth/dataset.hpp"

namespace survsynth {

// Fills missing covariate cells: continuous columns with the mean of their
// observed values, categorical columns with the mode (ties go to the lowest
// category index). Throws DomainError when a column has no observed value.
SurvivalDataset impute_missing(const SurvivalDataset& ds);

}  // namespace survsynth
