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

#include <compare>
#include <complex>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace nfdm {

using Complex = std::complex<double>;

/// Discrete eigenvalue lambda = omega + j*sigma in the open upper half plane.
class Eigenvalue {
 public:
  /// Throws DomainError unless sigma > 0 and both parts are finite.
  Eigenvalue(double omega, double sigma);
  static Eigenvalue from_complex(Complex lambda) {
    return Eigenvalue(lambda.real(), lambda.imag());
  }

  double omega() const noexcept { return omega_; }
  double sigma() const noexcept { return sigma_; }
  Complex value() const noexcept { return {omega_, sigma_}; }

  /// Canonical order: omega ascending, then sigma ascending.
  friend auto operator<=>(const Eigenvalue&, const Eigenvalue&) = default;

 private:
  double omega_;
  double sigma_;
};

double distance(const Eigenvalue& a, const Eigenvalue& b);

/// Smallest pairwise distance; +inf for fewer than two eigenvalues.
double min_separation(std::span<const Eigenvalue> eigenvalues);

/// Cartesian product omegas x sigmas in canonical order.
std::vector<Eigenvalue> make_grid(std::span<const double> omegas,
                                  std::span<const double> sigmas);

/// The 10-point grid omega in {-2,-1,0,1,2}, sigma in {1,2}.
std::vector<Eigenvalue> default_grid();

struct SpectrumEntry {
  Eigenvalue lambda;
  Complex amplitude;  ///< discrete spectral amplitude q_d(lambda)
};

/// Eigenvalues with attached spectral amplitudes, kept in canonical order.
class DiscreteSpectrum {
 public:
  DiscreteSpectrum() = default;
  /// Sorts canonically. Throws DomainError on duplicate eigenvalues or on a
  /// zero / non-finite amplitude.
  explicit DiscreteSpectrum(std::vector<SpectrumEntry> entries);

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const SpectrumEntry& operator[](std::size_t i) const { return entries_[i]; }
  auto begin() const noexcept { return entries_.begin(); }
  auto end() const noexcept { return entries_.end(); }
  const std::vector<SpectrumEntry>& entries() const noexcept { return entries_; }

  std::vector<Eigenvalue> eigenvalues() const;
  std::vector<Complex> amplitudes() const;

  /// Disjoint union; throws DomainError if an eigenvalue appears in both.
  DiscreteSpectrum merged(const DiscreteSpectrum& other) const;

  friend bool operator==(const DiscreteSpectrum& a, const DiscreteSpectrum& b);

 private:
  std::vector<SpectrumEntry> entries_;
};

/// Soliton energy from the trace identity: 4 * sum of Im(lambda).
double soliton_energy(const DiscreteSpectrum& spec);

/// Analytic lossless evolution of the discrete spectrum over normalized
/// distance z: q_d -> q_d * exp(c * j * lambda^2 * z); eigenvalues unchanged.
/// `c` defaults to the calibrated constant (see calibration.hpp).
DiscreteSpectrum propagate_spectrum(const DiscreteSpectrum& spec, double z);
DiscreteSpectrum propagate_spectrum(const DiscreteSpectrum& spec, double z,
                                    double evolution_constant);

Complex evolution_factor(const Eigenvalue& lambda, double z,
                         double evolution_constant);

// {eigenvalues: [[w,s],...], amplitudes: [[re,im],...]}
nlohmann::json to_json(const DiscreteSpectrum& spec);
DiscreteSpectrum spectrum_from_json(const nlohmann::json& j);

nlohmann::json to_json(std::span<const Eigenvalue> eigenvalues);
std::vector<Eigenvalue> eigenvalues_from_json(const nlohmann::json& j);

}  // namespace nfdm
