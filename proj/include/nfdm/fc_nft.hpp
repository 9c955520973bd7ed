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

#include <cstddef>
#include <span>
#include <vector>

#include "nfdm/pulse.hpp"
#include "nfdm/spectrum.hpp"

namespace nfdm {

/// Jost scattering coefficients at one spectral parameter.
struct ScatteringPair {
  Complex a;
  Complex b;
};

struct DetectOptions {
  int harmonics = 64;          ///< Fourier modes -M..M per component
  double im_threshold = 0.15;  ///< discard eigenvalues with Im below this
  double dedup_tolerance = 1e-3;
  /// Require |q| at both window edges <= 0.05 sqrt(E).
  bool check_window = true;
  /// Polish each FC eigenvalue by Newton iteration on a(lambda); a step that
  /// wanders more than 0.2 away or fails keeps the FC value.
  bool refine = false;
};

/// Discrete eigenvalues by Fourier collocation: the Zakharov-Shabat operator
/// projected on exp(j k_m t), m = -M..M, over the pulse window, solved as a
/// dense 2(2M+1) eigenproblem. Canonically ordered.
/// Throws PreconditionError (M < 16 or window too short) or NumericError.
std::vector<Eigenvalue> detect_eigenvalues(const SampledPulse& pulse,
                                           const DetectOptions& options = {});
std::vector<Eigenvalue> detect_eigenvalues(const SampledPulse& pulse, int harmonics,
                                           double im_threshold);

/// Transfer-matrix integration with the exact exponential of the
/// piecewise-constant ZS matrix per sample. Throws OverflowError when the
/// solution leaves the double range.
ScatteringPair scattering(const SampledPulse& pulse, Complex lambda);

/// Coefficient b of the bound state phi = b psi at an eigenvalue, matched
/// between the left and right Jost solutions at an interior point.
Complex bound_state_coefficient(const SampledPulse& pulse, Complex lambda);

/// q_d = b / a'(lambda), b from bound_state_coefficient and a' by central
/// difference of scattering() with step 1e-4.
/// Throws NumericError when |a'| < 1e-8.
Complex spectral_amplitude(const SampledPulse& pulse, const Eigenvalue& lambda);

/// Newton iteration on a(lambda) starting at `guess`.
Complex refine_eigenvalue(const SampledPulse& pulse, Complex guess, int max_iterations = 20,
                          double tolerance = 1e-12);

/// Spectral amplitudes at the given eigenvalues.
DiscreteSpectrum measure_spectrum(const SampledPulse& pulse,
                                  std::span<const Eigenvalue> eigenvalues);

struct OokDecision {
  std::vector<bool> bits;              ///< one per nominal eigenvalue
  std::size_t unmatched_detections = 0;
};

/// Bit i is set iff a detected eigenvalue lies within `radius` of nominal i.
/// Greedy nearest-first matching; each detection is consumed at most once.
OokDecision ook_decide(std::span<const Eigenvalue> detected, std::span<const Eigenvalue> nominal,
                       double radius = 0.5);

}  // namespace nfdm
