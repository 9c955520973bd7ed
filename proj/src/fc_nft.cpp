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

#include "nfdm/fc_nft.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "nfdm/errors.hpp"
#include "nfdm/fft.hpp"

namespace nfdm {
namespace {

constexpr Complex kJ(0.0, 1.0);

bool is_zero(const SampledPulse& pulse) {
  return std::all_of(pulse.samples().begin(), pulse.samples().end(),
                     [](const Complex& s) { return s == Complex(0.0); });
}

}  // namespace

std::vector<Eigenvalue> detect_eigenvalues(const SampledPulse& pulse, int harmonics,
                                           double im_threshold) {
  DetectOptions opt;
  opt.harmonics = harmonics;
  opt.im_threshold = im_threshold;
  return detect_eigenvalues(pulse, opt);
}

std::vector<Eigenvalue> detect_eigenvalues(const SampledPulse& pulse,
                                           const DetectOptions& options) {
  if (options.harmonics < 16)
    throw PreconditionError("detect_eigenvalues: at least 16 harmonics required");
  if (is_zero(pulse)) return {};

  if (options.check_window) {
    const double limit = 0.05 * std::sqrt(pulse.energy());
    const double edge = std::max(std::abs(pulse.samples().front()),
                                 std::abs(pulse.samples().back()));
    if (edge > limit) {
      std::ostringstream os;
      os << "detect_eigenvalues: window too short, edge magnitude " << edge
         << " exceeds 0.05*sqrt(E) = " << limit;
      throw PreconditionError(os.str());
    }
  }

  const std::size_t n = pulse.size();
  const int m_max = options.harmonics;
  const double period = pulse.dt() * static_cast<double>(n);

  // Fourier coefficients Q_p = (1/L) int q e^{-j k_p (t - t0)} dt, |p| < N/2.
  std::vector<Complex> spectrum(pulse.samples().begin(), pulse.samples().end());
  Fft(n).forward(spectrum);
  const auto coefficient = [&](int p) -> Complex {
    const auto half = static_cast<long>(n) / 2;
    if (std::abs(static_cast<long>(p)) >= half) return Complex(0.0);
    const std::size_t idx = p >= 0 ? static_cast<std::size_t>(p)
                                   : n - static_cast<std::size_t>(-p);
    return spectrum[idx] / static_cast<double>(n);
  };

  const int modes = 2 * m_max + 1;
  const int dim = 2 * modes;
  // Column-major dense operator for zgeev.
  std::vector<Complex> op(static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim));
  const auto at = [&](int r, int c) -> Complex& {
    return op[static_cast<std::size_t>(c) * static_cast<std::size_t>(dim) +
              static_cast<std::size_t>(r)];
  };
  const double dk = 2.0 * std::numbers::pi / period;
  for (int r = 0; r < modes; ++r) {
    const double k = dk * static_cast<double>(r - m_max);
    at(r, r) = -k;
    at(modes + r, modes + r) = k;
    for (int c = 0; c < modes; ++c) {
      const int p = r - c;
      at(r, modes + c) = -kJ * coefficient(p);
      at(modes + r, c) = -kJ * std::conj(coefficient(-p));
    }
  }

  std::vector<Complex> w(static_cast<std::size_t>(dim));
  const lapack_int info = LAPACKE_zgeev(
      LAPACK_COL_MAJOR, 'N', 'N', dim, reinterpret_cast<lapack_complex_double*>(op.data()), dim,
      reinterpret_cast<lapack_complex_double*>(w.data()), nullptr, 1, nullptr, 1);
  if (info != 0) throw NumericError("detect_eigenvalues: eigensolver did not converge");

  std::vector<Complex> raw;
  for (const Complex& l : w) {
    if (!(l.imag() > options.im_threshold) || !std::isfinite(l.real())) continue;
    Complex v = l;
    if (options.refine) {
      try {
        const Complex r = refine_eigenvalue(pulse, l);
        if (std::isfinite(r.real()) && std::isfinite(r.imag()) && std::abs(r - l) < 0.2 &&
            r.imag() > options.im_threshold)
          v = r;
      } catch (const Error&) {
      }
    }
    raw.push_back(v);
  }
  std::sort(raw.begin(), raw.end(), [](const Complex& a, const Complex& b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  std::vector<Eigenvalue> out;
  for (const Complex& l : raw) {
    const bool dup = std::any_of(out.begin(), out.end(), [&](const Eigenvalue& e) {
      return std::abs(e.value() - l) < options.dedup_tolerance;
    });
    if (!dup) out.push_back(Eigenvalue::from_complex(l));
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// exp(U h) for U = [[-j lambda, q], [-conj(q), j lambda]]: c I + s U.
struct CellPropagator {
  Complex c, s;
};

CellPropagator cell(Complex lambda_sq, Complex q, double h) {
  const Complex kappa = std::sqrt(lambda_sq + std::norm(q));
  const Complex kh = kappa * h;
  const Complex s = std::abs(kh) < 1e-6 ? h * (1.0 - kh * kh / 6.0) : std::sin(kh) / kappa;
  return {std::cos(kh), s};
}

}  // namespace

ScatteringPair scattering(const SampledPulse& pulse, Complex lambda) {
  const double h = pulse.dt();
  const double t_left = pulse.t_start() - 0.5 * h;
  const double t_right = pulse.time(pulse.size() - 1) + 0.5 * h;

  // v scaled by exp(j lambda t_left) so the left boundary value is (1, 0).
  Complex v1(1.0), v2(0.0);
  const Complex l2 = lambda * lambda;
  for (std::size_t i = 0; i < pulse.size(); ++i) {
    const Complex q = pulse[i];
    const auto [c, s] = cell(l2, q, h);
    const Complex n1 = (c - kJ * lambda * s) * v1 + s * q * v2;
    const Complex n2 = -s * std::conj(q) * v1 + (c + kJ * lambda * s) * v2;
    v1 = n1;
    v2 = n2;
  }
  if (!std::isfinite(std::abs(v1)) || !std::isfinite(std::abs(v2))) {
    std::ostringstream os;
    os << "scattering: Jost solution overflow for lambda = " << lambda;
    throw OverflowError(os.str(), t_right);
  }
  const Complex a = v1 * std::exp(kJ * lambda * (t_right - t_left));
  const Complex b = v2 * std::exp(-kJ * lambda * (t_right + t_left));
  return {a, b};
}

Complex bound_state_coefficient(const SampledPulse& pulse, Complex lambda) {
  // Reading b at the right edge amplifies the residual a(lambda) by
  // exp(2 sigma t_R) times the tail of q, so b is taken instead as the ratio
  // phi/psi of the left and right Jost solutions at an interior point.
  const std::size_t n = pulse.size();
  const double h = pulse.dt();
  const double t_left = pulse.t_start() - 0.5 * h;
  const double t_right = pulse.time(n - 1) + 0.5 * h;
  const Complex l2 = lambda * lambda;

  std::vector<Complex> phi1(n + 1), phi2(n + 1), psi1(n + 1), psi2(n + 1);
  std::vector<double> phi_log(n + 1, 0.0), psi_log(n + 1, 0.0);
  phi1[0] = 1.0;
  phi2[0] = 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Complex q = pulse[i];
    const auto [c, s] = cell(l2, q, h);
    Complex n1 = (c - kJ * lambda * s) * phi1[i] + s * q * phi2[i];
    Complex n2 = -s * std::conj(q) * phi1[i] + (c + kJ * lambda * s) * phi2[i];
    const double mag = std::max(std::abs(n1), std::abs(n2));
    acc += std::log(mag);
    phi1[i + 1] = n1 / mag;
    phi2[i + 1] = n2 / mag;
    phi_log[i + 1] = acc;
  }
  psi1[n] = 0.0;
  psi2[n] = 1.0;
  acc = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    const Complex q = pulse[i];
    const auto [c, s] = cell(l2, q, h);
    // exp(-U h) = c I - s U
    Complex n1 = (c + kJ * lambda * s) * psi1[i + 1] - s * q * psi2[i + 1];
    Complex n2 = s * std::conj(q) * psi1[i + 1] + (c - kJ * lambda * s) * psi2[i + 1];
    const double mag = std::max(std::abs(n1), std::abs(n2));
    acc += std::log(mag);
    psi1[i] = n1 / mag;
    psi2[i] = n2 / mag;
    psi_log[i] = acc;
  }
  // True magnitudes: |phi| = |e^{-j lambda t_L}| e^{phi_log}, likewise for psi.
  const double phi_base = lambda.imag() * t_left;
  const double psi_base = -lambda.imag() * t_right;
  std::size_t best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m <= n; ++m) {
    const double score = std::min(phi_base + phi_log[m], psi_base + psi_log[m]);
    if (score > best_score) {
      best_score = score;
      best = m;
    }
  }
  const Complex proj = (phi1[best] * std::conj(psi1[best]) + phi2[best] * std::conj(psi2[best])) /
                       (std::norm(psi1[best]) + std::norm(psi2[best]));
  // phi_true = e^{-j lambda t_L} e^{phi_log} phi, psi_true = e^{j lambda t_R} e^{psi_log} psi
  return proj * std::exp(-kJ * lambda * (t_left + t_right) + (phi_log[best] - psi_log[best]));
}

Complex spectral_amplitude(const SampledPulse& pulse, const Eigenvalue& lambda) {
  constexpr double step = 1e-4;
  const Complex l = lambda.value();
  const Complex da =
      (scattering(pulse, l + step).a - scattering(pulse, l - step).a) / (2.0 * step);
  if (std::abs(da) < 1e-8)
    throw NumericError("spectral_amplitude: a'(lambda) vanishes (degenerate eigenvalue)");
  return bound_state_coefficient(pulse, l) / da;
}

Complex refine_eigenvalue(const SampledPulse& pulse, Complex guess, int max_iterations,
                          double tolerance) {
  constexpr double step = 1e-5;
  Complex l = guess;
  for (int it = 0; it < max_iterations; ++it) {
    const Complex a = scattering(pulse, l).a;
    const Complex da =
        (scattering(pulse, l + step).a - scattering(pulse, l - step).a) / (2.0 * step);
    if (da == Complex(0.0)) break;
    const Complex delta = a / da;
    l -= delta;
    if (std::abs(delta) < tolerance) break;
  }
  return l;
}

DiscreteSpectrum measure_spectrum(const SampledPulse& pulse,
                                  std::span<const Eigenvalue> eigenvalues) {
  std::vector<SpectrumEntry> entries;
  entries.reserve(eigenvalues.size());
  for (const auto& l : eigenvalues) entries.push_back({l, spectral_amplitude(pulse, l)});
  return DiscreteSpectrum(std::move(entries));
}

OokDecision ook_decide(std::span<const Eigenvalue> detected, std::span<const Eigenvalue> nominal,
                       double radius) {
  struct Candidate {
    double dist;
    std::size_t det;
    std::size_t nom;
  };
  std::vector<Candidate> cands;
  for (std::size_t d = 0; d < detected.size(); ++d)
    for (std::size_t m = 0; m < nominal.size(); ++m) {
      const double dist = distance(detected[d], nominal[m]);
      if (dist < radius) cands.push_back({dist, d, m});
    }
  // Ties broken by index so the outcome never depends on sort stability.
  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    if (a.dist != b.dist) return a.dist < b.dist;
    if (a.nom != b.nom) return a.nom < b.nom;
    return a.det < b.det;
  });
  OokDecision out;
  out.bits.assign(nominal.size(), false);
  std::vector<bool> used(detected.size(), false);
  for (const auto& c : cands) {
    if (used[c.det] || out.bits[c.nom]) continue;
    used[c.det] = true;
    out.bits[c.nom] = true;
  }
  out.unmatched_detections =
      static_cast<std::size_t>(std::count(used.begin(), used.end(), false));
  return out;
}

}  // namespace nfdm
