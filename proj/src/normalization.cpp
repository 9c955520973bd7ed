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

#include "nfdm/normalization.hpp"

#include <cmath>

#include "nfdm/errors.hpp"

namespace nfdm {

NormalizationMap::NormalizationMap(double t0, double beta2, double gamma)
    : t0_(t0), beta2_(beta2), gamma_(gamma) {
  if (!(t0 > 0.0) || !std::isfinite(t0)) throw DomainError("NormalizationMap: T0 must be positive");
  if (!(beta2 < 0.0)) throw DomainError("NormalizationMap: beta2 must be negative (anomalous)");
  if (!(gamma > 0.0)) throw DomainError("NormalizationMap: gamma must be positive");
  z0_ = t0 * t0 / std::abs(beta2);
  p0_ = std::abs(beta2) / (gamma * t0 * t0);
}

NormalizationMap NormalizationMap::from_fiber(double t0_s, double beta2_s2_per_m,
                                              double gamma_per_w_m) {
  return NormalizationMap(t0_s, beta2_s2_per_m, gamma_per_w_m);
}

NormalizationMap NormalizationMap::from_fiber_units(double t0_ps, double beta2_ps2_per_km,
                                                    double gamma_per_w_km) {
  return NormalizationMap(t0_ps * 1e-12, beta2_ps2_per_km * 1e-24 / 1e3, gamma_per_w_km / 1e3);
}

SampledPulse normalize(const PhysicalSignal& signal, const NormalizationMap& map) {
  const double scale = 1.0 / std::sqrt(map.p0());
  std::vector<Complex> q(signal.samples.size());
  for (std::size_t i = 0; i < q.size(); ++i) q[i] = signal.samples[i] * scale;
  return SampledPulse(std::move(q), signal.t_start_s / map.t0(), signal.dt_s / map.t0());
}

PhysicalSignal denormalize(const SampledPulse& pulse, const NormalizationMap& map) {
  const double scale = std::sqrt(map.p0());
  PhysicalSignal out;
  out.samples.resize(pulse.size());
  for (std::size_t i = 0; i < pulse.size(); ++i) out.samples[i] = pulse[i] * scale;
  out.t_start_s = pulse.t_start() * map.t0();
  out.dt_s = pulse.dt() * map.t0();
  return out;
}

}  // namespace nfdm
