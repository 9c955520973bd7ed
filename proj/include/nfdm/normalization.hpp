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
#include <vector>

#include "nfdm/pulse.hpp"

namespace nfdm {

/// Field in physical units: sqrt(W) envelope sampled every dt_s seconds.
struct PhysicalSignal {
  std::vector<Complex> samples;
  double t_start_s = 0.0;
  double dt_s = 1.0;
};

/// Bridge between physical units and the normalized NLSE
///   j q_z = 1/2 q_tt + |q|^2 q,   t = T/T0, z = Z/Z0, q = A/sqrt(P0)
/// with Z0 = T0^2/|beta2| and P0 = |beta2|/(gamma T0^2).
class NormalizationMap {
 public:
  /// beta2 in s^2/m (negative), gamma in 1/(W m), t0 in s.
  static NormalizationMap from_fiber(double t0_s, double beta2_s2_per_m,
                                     double gamma_per_w_m);
  /// Convenience with the customary engineering units.
  static NormalizationMap from_fiber_units(double t0_ps,
                                           double beta2_ps2_per_km,
                                           double gamma_per_w_km);

  double t0() const noexcept { return t0_; }
  double p0() const noexcept { return p0_; }
  double z0() const noexcept { return z0_; }
  double beta2() const noexcept { return beta2_; }
  double gamma() const noexcept { return gamma_; }

  double to_normalized_distance(double meters) const noexcept { return meters / z0_; }
  double to_meters(double z) const noexcept { return z * z0_; }

 private:
  NormalizationMap(double t0, double beta2, double gamma);
  double t0_, p0_, z0_, beta2_, gamma_;
};

SampledPulse normalize(const PhysicalSignal& signal, const NormalizationMap& map);
PhysicalSignal denormalize(const SampledPulse& pulse, const NormalizationMap& map);

}  // namespace nfdm
