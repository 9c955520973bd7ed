// Copyright 2026 The nfdm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace nfdm {

/// Base for all library errors. `kind()` is a stable machine-readable tag
/// that the CLI puts into its JSON error object.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error("domain", what) {}
};

/// Eigensolver failure, degenerate derivative and similar numerical breakdowns.
class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what) : Error("numeric", what) {}
};

class OverflowError : public Error {
 public:
  OverflowError(const std::string& what, double t)
      : Error("overflow", what), t_(t) {}
  /// Time coordinate (normalized) at which the overflow was detected.
  double time() const noexcept { return t_; }

 private:
  double t_;
};

/// A stated precondition on the input (window length, grid coverage) fails.
class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what)
      : Error("precondition", what) {}
};

/// Field energy wrapped across the periodic FFT window.
class WindowingError : public Error {
 public:
  explicit WindowingError(const std::string& what) : Error("windowing", what) {}
};

/// Frame assembly violates the symbol-interval guard.
class FrameError : public Error {
 public:
  explicit FrameError(const std::string& what) : Error("frame", what) {}
};

/// Invalid configuration. `path()` is a JSON-pointer-like field path.
class ConfigError : public Error {
 public:
  ConfigError(std::string path, const std::string& what)
      : Error("config", path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error("io", what) {}
};

}  // namespace nfdm
