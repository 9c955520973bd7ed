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

#include <filesystem>
#include <span>
#include <vector>

#include "nfdm/pulse.hpp"
#include "nfdm/spectrum.hpp"

namespace nfdm {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const noexcept { return hi - lo; }
};

/// Smallest interval outside which |q(t)| / sqrt(E) < epsilon, with the
/// crossings located by linear interpolation between samples.
/// Throws DomainError for an all-zero pulse.
Interval pulse_duration(const SampledPulse& pulse, double epsilon = 0.01);

/// Width (cycles per normalized time unit) of the smallest interval centred on
/// the spectral centroid that holds 99% of |Q(f)|^2, Q the linear Fourier
/// transform. Each FFT bin is treated as a uniform density over its width so
/// the result does not jump with the grid.
double bandwidth99(const SampledPulse& pulse, double energy_fraction = 0.99);

struct BandwidthProfile {
  std::vector<double> distances;
  std::vector<double> bw;
};

/// Lossless surrogate: propagate_spectrum to each z, synthesize on `grid`,
/// measure bandwidth99.
BandwidthProfile bandwidth_profile(const DiscreteSpectrum& spec, std::span<const double> z_samples,
                                   const TimeGrid& grid);

/// CSV with header "z,bw".
void write_bandwidth_csv(const BandwidthProfile& profile, const std::filesystem::path& path);

/// Largest |detected - nominal| after greedy nearest matching; a nominal left
/// without a detection within `radius` contributes `radius`.
double eigenvalue_deviation(std::span<const Eigenvalue> detected,
                            std::span<const Eigenvalue> nominal, double radius = 0.5);

}  // namespace nfdm
