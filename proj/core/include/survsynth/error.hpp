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

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace survsynth {

// Base of every error raised by the library. The CLI maps the concrete
// subclasses onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Declared columns missing from a file, duplicate names, bad schema config.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// Unparseable cell. Carries the zero-based data row index when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, long row = -1) : Error(what), row_(row) {}
  long row() const { return row_; }

 private:
  long row_;
};

// Values outside their mathematical domain (negative times, empty input, ...).
class DomainError : public Error {
 public:
  DomainError(const std::string& what, long row = -1) : Error(what), row_(row) {}
  long row() const { return row_; }

 private:
  long row_;
};

// Encoded matrix does not match the encoder layout / model dimensions.
class LayoutError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration (benchmark config, missing per-stratum sampler, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Numerical failure while training a generator.
class TrainingError : public Error {
 public:
  TrainingError(const std::string& what, int epoch) : Error(what), epoch_(epoch) {}
  int epoch() const { return epoch_; }

 private:
  int epoch_;
};

// Cox Newton iterations failed to converge.
class FitError : public Error {
 public:
  FitError(const std::string& what, std::vector<double> last_beta, double gradient_norm)
      : Error(what), last_beta_(std::move(last_beta)), gradient_norm_(gradient_norm) {}
  const std::vector<double>& last_beta() const { return last_beta_; }
  double gradient_norm() const { return gradient_norm_; }

 private:
  std::vector<double> last_beta_;
  double gradient_norm_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace survsynth
