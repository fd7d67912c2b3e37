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

// Minimal process-wide diagnostics sink. Defaults to stderr; tests and the CLI
// may redirect or silence it.

#pragma once

#include <functional>
#include <string_view>

namespace survsynth::log {

enum class Level { info, warning };

using Sink = std::function<void(Level, std::string_view)>;

void set_sink(Sink sink);
void info(std::string_view message);
void warn(std::string_view message);

}  // namespace survsynth::log
