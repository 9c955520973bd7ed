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

#include "nfdm/darboux.hpp"

#include <cmath>
#include <sstream>

#include "nfdm/errors.hpp"
#include "nfdm/kernels.hpp"

namespace nfdm {

DarbouxConstants::DarbouxConstants(std::vector<DarbouxSeed> seeds) : seeds_(std::move(seeds)) {
  for (const auto& s : seeds_) {
    if (s.a == Complex(0.0)) throw DomainError("DarbouxConstants: coefficient a must be nonzero");
    if (!std::isfinite(std::abs(s.a)) || !std::isfinite(std::abs(s.b)))
      throw DomainError("DarbouxConstants: non-finite coefficient");
  }
}

DarbouxConstants DarbouxConstants::unit(std::size_t count) {
  return DarbouxConstants(std::vector<DarbouxSeed>(count));
}

DarbouxConstants DarbouxConstants::from_phases(std::span<const double> phases) {
  std::vector<DarbouxSeed> seeds;
  seeds.reserve(phases.size());
  for (double p : phases) seeds.push_back({Complex(1.0), std::polar(1.0, p)});
  return DarbouxConstants(std::move(seeds));
}

TimeGrid default_synthesis_grid() { return TimeGrid::centered(16.0, 4096); }

namespace {

// Planar storage for one eigenvector on the grid.
struct EigenvectorStore {
  std::vector<double> re1, im1, re2, im2;
  explicit EigenvectorStore(std::size_t n) : re1(n), im1(n), re2(n), im2(n) {}
  kernels::EigenvectorView view() { return {re1.data(), im1.data(), re2.data(), im2.data()}; }
  kernels::ConstEigenvectorView cview() const {
    return {re1.data(), im1.data(), re2.data(), im2.data()};
  }
};

}  // namespace

SampledPulse synthesize(std::span<const Eigenvalue> eigenvalues, const DarbouxConstants& constants,
                        const TimeGrid& grid) {
  grid.validate();
  if (eigenvalues.size() != constants.size())
    throw DomainError("synthesize: one Darboux seed per eigenvalue required");
  for (std::size_t i = 0; i < eigenvalues.size(); ++i)
    for (std::size_t j = i + 1; j < eigenvalues.size(); ++j)
      if (eigenvalues[i] == eigenvalues[j]) throw DomainError("synthesize: duplicate eigenvalue");

  const std::size_t n = grid.count;
  const std::size_t k = eigenvalues.size();
  std::vector<double> q_re(n, 0.0), q_im(n, 0.0);

  // Seeds scaled per sample by exp(-sigma|t|) / max(|a|,|b|) so nothing overflows.
  std::vector<EigenvectorStore> vecs;
  vecs.reserve(k);
  for (std::size_t e = 0; e < k; ++e) {
    const double w = eigenvalues[e].omega(), s = eigenvalues[e].sigma();
    const Complex a = constants[e].a, b = constants[e].b;
    const double log_norm = std::log(std::max(std::abs(a), std::abs(b)));
    const double la = std::log(std::abs(a)) - log_norm, lb = std::log(std::abs(b)) - log_norm;
    const double pa = std::arg(a), pb = std::arg(b);
    auto& v = vecs.emplace_back(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double t = grid.time(i);
      const double m1 = std::exp(la + s * (t - std::abs(t)));
      const double m2 = std::exp(lb - s * (t + std::abs(t)));
      v.re1[i] = m1 * std::cos(pa - w * t);
      v.im1[i] = m1 * std::sin(pa - w * t);
      v.re2[i] = m2 * std::cos(pb + w * t);
      v.im2[i] = m2 * std::sin(pb + w * t);
    }
  }

  const auto& kt = kernels::active();
  std::vector<kernels::PendingEigenvector> pending;
  for (std::size_t step = 0; step < k; ++step) {
    pending.clear();
    for (std::size_t j = step + 1; j < k; ++j)
      pending.push_back({vecs[j].view(), eigenvalues[j].omega(), eigenvalues[j].sigma()});
    kt.darboux_step(n, eigenvalues[step].omega(), eigenvalues[step].sigma(), vecs[step].cview(),
                    q_re.data(), q_im.data(), pending.data(), pending.size());
  }

  std::vector<Complex> q(n);
  for (std::size_t i = 0; i < n; ++i) {
    q[i] = Complex(q_re[i], q_im[i]);
    if (!std::isfinite(q_re[i]) || !std::isfinite(q_im[i])) {
      std::ostringstream os;
      os << "synthesize: field overflow at t = " << grid.time(i);
      throw OverflowError(os.str(), grid.time(i));
    }
  }
  return SampledPulse(std::move(q), grid.t_start, grid.dt);
}

std::vector<Complex> amplitude_kernel(std::span<const Eigenvalue> eigenvalues) {
  std::vector<Complex> kappa(eigenvalues.size());
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
    const Complex li = eigenvalues[i].value();
    Complex value = std::conj(li) - li;
    for (std::size_t m = 0; m < eigenvalues.size(); ++m) {
      if (m == i) continue;
      const Complex lm = eigenvalues[m].value();
      value *= (li - std::conj(lm)) / (li - lm);
    }
    kappa[i] = value;
  }
  return kappa;
}

std::vector<Complex> reference_amplitudes(std::span<const Eigenvalue> eigenvalues) {
  return amplitude_kernel(eigenvalues);
}

DarbouxConstants constants_from_spectrum(const DiscreteSpectrum& spec) {
  const auto eig = spec.eigenvalues();
  const auto ref = reference_amplitudes(eig);
  std::vector<DarbouxSeed> seeds;
  seeds.reserve(spec.size());
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const Complex amp = spec[i].amplitude;
    if (amp == Complex(0.0)) throw DomainError("constants_from_spectrum: zero spectral amplitude");
    seeds.push_back({Complex(1.0), amp / ref[i]});
  }
  return DarbouxConstants(std::move(seeds));
}

DiscreteSpectrum spectrum_from_constants(std::span<const Eigenvalue> eigenvalues,
                                         const DarbouxConstants& constants) {
  if (eigenvalues.size() != constants.size())
    throw DomainError("spectrum_from_constants: size mismatch");
  const auto ref = reference_amplitudes(eigenvalues);
  std::vector<SpectrumEntry> entries;
  for (std::size_t i = 0; i < eigenvalues.size(); ++i)
    entries.push_back({eigenvalues[i], ref[i] * constants.ratio(i)});
  return DiscreteSpectrum(std::move(entries));
}

SampledPulse synthesize(const DiscreteSpectrum& spec, const TimeGrid& grid) {
  const auto eig = spec.eigenvalues();
  return synthesize(eig, constants_from_spectrum(spec), grid);
}

}  // namespace nfdm
