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

#include <filesystem>
#include <string>
#include <string_view>

namespace survsynth {

std::string read_text_file(const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it into place, so a failed
// write never leaves a partial file at `path`.
void write_text_file_atomic(const std::filesystem::path& path, std::string_view content);

// Shortest decimal representation that parses back to the same double.
std::string format_real(double v);

}  // namespace survsynth
