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

#include <complex>
#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace nfdm {

using Complex = std::complex<double>;

/// Uniform time grid t_i = t_start + i*dt, i in [0, count).
struct TimeGrid {
  double t_start = 0.0;
  double dt = 1.0;
  std::size_t count = 0;

  /// Symmetric grid of `count` samples covering [-half_width, half_width).
  static TimeGrid centered(double half_width, std::size_t count);

  double time(std::size_t i) const noexcept {
    return t_start + static_cast<double>(i) * dt;
  }
  double length() const noexcept { return dt * static_cast<double>(count); }
  void validate() const;
};

/// Complex envelope on a uniform grid, in normalized soliton units.
class SampledPulse {
 public:
  SampledPulse() = default;
  /// Throws DomainError unless dt > 0, at least two samples and all finite.
  SampledPulse(std::vector<Complex> samples, double t_start, double dt);
  static SampledPulse zeros(const TimeGrid& grid);

  std::size_t size() const noexcept { return samples_.size(); }
  double t_start() const noexcept { return t_start_; }
  double dt() const noexcept { return dt_; }
  double time(std::size_t i) const noexcept {
    return t_start_ + static_cast<double>(i) * dt_;
  }
  TimeGrid grid() const noexcept { return {t_start_, dt_, samples_.size()}; }

  std::span<const Complex> samples() const noexcept { return samples_; }
  std::span<Complex> samples() noexcept { return samples_; }
  const Complex& operator[](std::size_t i) const { return samples_[i]; }
  Complex& operator[](std::size_t i) { return samples_[i]; }

  /// Trapezoid-rule integral of |q|^2.
  double energy() const;
  double peak() const;

  /// Samples with indices in [first, first+count) as an independent pulse.
  SampledPulse slice(std::size_t first, std::size_t count) const;

 private:
  std::vector<Complex> samples_;
  double t_start_ = 0.0;
  double dt_ = 1.0;
};

/// Writes `<base>.bin` (little-endian float64 re,im pairs) and `<base>.json`
/// ({t_start, dt, count}). Round trip is bit-exact.
void write_pulse(const SampledPulse& pulse, const std::filesystem::path& base);
SampledPulse read_pulse(const std::filesystem::path& base);

}  // namespace nfdm
