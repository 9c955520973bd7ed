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

#include <cstdint>
#include <filesystem>
#include <random>
#include <vector>

#include "nfdm/normalization.hpp"
#include "nfdm/pulse.hpp"

namespace nfdm {

struct FiberSpan {
  double length_km = 24.2;
  double beta2_ps2_per_km = -5.75;
  double gamma_per_w_km = 1.6;
  double alpha_db_per_km = 0.2;

  /// Throws DomainError on a non-physical span.
  void validate() const;
  double loss_db() const noexcept { return alpha_db_per_km * length_km; }
  /// Power attenuation coefficient in 1/km.
  double alpha_per_km() const noexcept;
};

struct AmplifierModel {
  double gain_db = 0.0;
  /// -infinity selects the noiseless amplifier.
  double nf_db = 5.0;
  double center_frequency_hz = 193.4e12;
  double filter_bandwidth_hz = 50e9;
  std::uint64_t noise_seed = 1;

  /// Gain equal to the loss of `span`.
  static AmplifierModel compensating(const FiberSpan& span, double nf_db);
  void validate() const;
  double gain() const noexcept;
  /// One-sided ASE density (G-1) (NF/2) h nu in W/Hz, zero when noiseless.
  double noise_psd() const noexcept;
  bool adds_noise() const noexcept { return noise_psd() > 0.0; }
};

struct LinkProfile {
  FiberSpan span;
  int spans_per_loop = 3;
  int loops = 28;
  AmplifierModel amplifier;
  NormalizationMap normalization = NormalizationMap::from_fiber_units(2000.0 / 12.0, -5.75, 1.6);
  double dz_km = 0.1;

  void validate() const;
  int span_count() const noexcept { return spans_per_loop * loops; }
  double total_length_km() const noexcept {
    return span.length_km * static_cast<double>(span_count());
  }
};

/// Field after every amplifier, with the cumulative distance.
struct PropagationRecord {
  std::vector<SampledPulse> snapshots;
  std::vector<double> distance_km;
};

/// Symmetric split-step over one span: ceil(length/dz) steps of
/// D(h/2) N(h) D(h/2), adjacent half steps merged. Loss enters the nonlinear
/// step exactly (effective length for the Kerr phase).
/// Unless `periodic`, throws WindowingError when more than 1e-6 of the energy
/// ends up in the outer 1/32 of the window on either side.
SampledPulse propagate_span(const SampledPulse& pulse, const FiberSpan& span,
                            const NormalizationMap& map, double dz_km,
                            bool periodic = false);

/// Scales by sqrt(G) and adds circular Gaussian ASE, generated in the
/// frequency domain inside the brick-wall band |f| <= B/2.
SampledPulse amplify(const SampledPulse& pulse, const AmplifierModel& amp,
                     const NormalizationMap& map, std::mt19937_64& rng);

/// Variance of the normalized ASE field per time sample on `grid`:
/// rho * B_eff / P0, B_eff being the bandwidth of the FFT bins kept.
double noise_variance_per_sample(const AmplifierModel& amp, const NormalizationMap& map,
                                 const TimeGrid& grid);

/// Path-average launch factor K = alpha L / (1 - exp(-alpha L)) for the power;
/// 1 for a lossless span.
double path_average_factor(const FiberSpan& span) noexcept;

struct LinkResult {
  SampledPulse output;
  PropagationRecord record;
};

/// Spans and amplifiers in alternation. The noise generator is seeded from
/// `link.amplifier.noise_seed` and `stream` so independent frames draw
/// independent noise. The window check runs only for isolated, noiseless
/// fields (`periodic` false and no ASE).
LinkResult run_link(const SampledPulse& pulse, const LinkProfile& link, bool record,
                    bool periodic = false, std::uint64_t stream = 0);

/// `<dir>/snapshot_NNN.{bin,json}` plus `<dir>/index.json`.
void export_snapshots(const PropagationRecord& record, const std::filesystem::path& dir);

}  // namespace nfdm
