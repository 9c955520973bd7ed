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

#include <span>
#include <vector>

#include "nfdm/pulse.hpp"
#include "nfdm/spectrum.hpp"

namespace nfdm {

/// Seed eigenvector coefficients for one eigenvalue: the zero-potential
/// solution (a e^{-j lambda t}, b e^{+j lambda t}).
struct DarbouxSeed {
  Complex a{1.0, 0.0};
  Complex b{1.0, 0.0};
};

/// One seed per eigenvalue. Every `a` is nonzero.
class DarbouxConstants {
 public:
  DarbouxConstants() = default;
  explicit DarbouxConstants(std::vector<DarbouxSeed> seeds);
  static DarbouxConstants unit(std::size_t count);
  /// a = 1, b = exp(j phase) for each phase.
  static DarbouxConstants from_phases(std::span<const double> phases);

  std::size_t size() const noexcept { return seeds_.size(); }
  const DarbouxSeed& operator[](std::size_t i) const { return seeds_[i]; }
  std::span<const DarbouxSeed> seeds() const noexcept { return seeds_; }
  Complex ratio(std::size_t i) const { return seeds_[i].b / seeds_[i].a; }

 private:
  std::vector<DarbouxSeed> seeds_;
};

/// Default synthesis window: t in [-16, 16), 2^12 samples.
TimeGrid default_synthesis_grid();

/// N-soliton envelope by iterated Darboux transformation of the zero
/// potential, eigenvalues added in the given order.
/// Throws DomainError on duplicate eigenvalues or a size mismatch and
/// OverflowError if the field stops being finite.
SampledPulse synthesize(std::span<const Eigenvalue> eigenvalues,
                        const DarbouxConstants& constants, const TimeGrid& grid);

/// Synthesizes the pulse whose discrete spectrum is `spec`.
SampledPulse synthesize(const DiscreteSpectrum& spec, const TimeGrid& grid);

/// kappa_i with q_d(lambda_i) = kappa_i * b_i / a_i for the Darboux
/// construction above. Depends only on the eigenvalue set:
///   kappa_i = (conj(l_i) - l_i) * prod_{m != i} (l_i - conj(l_m)) / (l_i - l_m)
std::vector<Complex> amplitude_kernel(std::span<const Eigenvalue> eigenvalues);

/// q_d values produced by unit constants (|a| = |b| = 1, zero phase).
std::vector<Complex> reference_amplitudes(std::span<const Eigenvalue> eigenvalues);

/// Maps designer-facing spectral amplitudes to Darboux seeds with a = 1 and
/// b = q_d / reference. Throws DomainError for a zero amplitude.
DarbouxConstants constants_from_spectrum(const DiscreteSpectrum& spec);

/// Inverse of constants_from_spectrum.
DiscreteSpectrum spectrum_from_constants(std::span<const Eigenvalue> eigenvalues,
                                         const DarbouxConstants& constants);

}  // namespace nfdm
