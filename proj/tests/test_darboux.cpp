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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "nfdm/darboux.hpp"
#include "nfdm/errors.hpp"
#include "nfdm/fc_nft.hpp"

namespace nfdm {
namespace {

// One Darboux step on the zero potential, written out by hand from the seed
// (a e^{-j l t}, b e^{j l t}): q = 4 sigma a conj(b) e^{-2j omega t} /
// (|a|^2 e^{2 sigma t} + |b|^2 e^{-2 sigma t}).
Complex one_soliton(double t, Eigenvalue l, Complex a, Complex b) {
  const double s = l.sigma(), w = l.omega();
  const Complex num = 4.0 * s * a * std::conj(b) * std::exp(Complex(0.0, -2.0 * w * t));
  return num / (std::norm(a) * std::exp(2.0 * s * t) + std::norm(b) * std::exp(-2.0 * s * t));
}

TEST(Darboux, SingleSolitonMatchesHandFormula) {
  const Eigenvalue l(0.4, 0.75);
  const Complex b = 3.0 * std::exp(Complex(0, 0.7));
  const auto g = TimeGrid::centered(16, 2048);
  const auto q = synthesize(std::vector{l}, DarbouxConstants({{Complex(1, 0), b}}), g);
  double err = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i)
    err = std::max(err, std::abs(q[i] - one_soliton(q.time(i), l, 1.0, b)));
  EXPECT_LT(err, 1e-12);
  EXPECT_NEAR(q.peak(), 2 * l.sigma(), 1e-3);
}

TEST(Darboux, SechPeakIsTwiceSigma) {
  for (double s : {0.5, 1.0, 2.0}) {
    const auto q = synthesize(std::vector{Eigenvalue(0, s)}, DarbouxConstants::unit(1), default_synthesis_grid());
    EXPECT_NEAR(std::abs(q[q.size() / 2]), 2 * s, 1e-12) << s;
  }
}

TEST(Darboux, EnergyEqualsTraceIdentity) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 2 * std::numbers::pi);
  const auto grid = default_grid();
  std::vector<double> phases(grid.size());
  for (auto& p : phases) p = u(rng);
  const auto q = synthesize(grid, DarbouxConstants::from_phases(phases), default_synthesis_grid());
  EXPECT_NEAR(q.energy(), 60.0, 60.0 * 1e-6);
}

TEST(Darboux, InvariantUnderInsertionOrder) {
  const std::vector<Eigenvalue> l{Eigenvalue(-1, 1), Eigenvalue(0, 2), Eigenvalue(1.5, 0.5)};
  const DarbouxConstants c({{1.0, Complex(0.2, 1)}, {Complex(0, 1), 2.0}, {1.0, Complex(-1, -1)}});
  const auto g = TimeGrid::centered(16, 1024);
  const auto ref = synthesize(l, c, g);
  std::vector<std::size_t> order{0, 1, 2};
  while (std::next_permutation(order.begin(), order.end())) {
    std::vector<Eigenvalue> lp;
    std::vector<DarbouxSeed> sp;
    for (auto k : order) {
      lp.push_back(l[k]);
      sp.push_back(c[k]);
    }
    const auto q = synthesize(lp, DarbouxConstants(sp), g);
    for (std::size_t i = 0; i < q.size(); ++i) ASSERT_NEAR(std::abs(q[i] - ref[i]), 0.0, 1e-10);
  }
}

TEST(Darboux, AmplitudeShiftMovesPulseInTime) {
  // q(t - tau) has spectrum q_d exp(-2j lambda tau).
  const std::vector<Eigenvalue> l{Eigenvalue(-1, 1), Eigenvalue(1, 2)};
  const auto g = TimeGrid::centered(16, 2048);
  const DiscreteSpectrum s({{l[0], Complex(1, 1)}, {l[1], Complex(-2, 0.5)}});
  const std::size_t shift = 96;
  const double tau = shift * g.dt;
  std::vector<SpectrumEntry> moved;
  for (const auto& e : s)
    moved.push_back({e.lambda, e.amplitude * std::exp(Complex(0, -2) * e.lambda.value() * tau)});
  const auto a = synthesize(s, g);
  const auto b = synthesize(DiscreteSpectrum(moved), g);
  for (std::size_t i = shift; i < g.count; ++i) ASSERT_NEAR(std::abs(b[i] - a[i - shift]), 0.0, 1e-9);
}

TEST(Darboux, KernelClosedFormMatchesForwardTransform) {
  // Measured q_d converges to kappa b / a as the grid is refined.
  const std::vector<Eigenvalue> l{Eigenvalue(-1, 1), Eigenvalue(0, 2), Eigenvalue(1, 1)};
  const std::vector<double> phases{0.0, 2.0, -1.0};
  const auto c = DarbouxConstants::from_phases(phases);
  const auto kappa = amplitude_kernel(l);
  double err[2] = {0, 0};
  for (int k = 0; k < 2; ++k) {
    const auto q = synthesize(l, c, TimeGrid::centered(16, 4096u << k));
    const auto measured = measure_spectrum(q, l);
    for (std::size_t i = 0; i < l.size(); ++i)
      err[k] = std::max(err[k], std::abs(measured[i].amplitude / (kappa[i] * c.ratio(i)) - 1.0));
  }
  EXPECT_LT(err[0], 1e-3);
  EXPECT_LT(err[1], err[0] / 3.0);
}

TEST(Darboux, SpectrumConstantsRoundTrip) {
  const std::vector<Eigenvalue> l{Eigenvalue(0, 1), Eigenvalue(1, 2)};
  const DarbouxConstants c({{1.0, Complex(0.3, -2)}, {1.0, Complex(-1, 0.1)}});
  const auto s = spectrum_from_constants(l, c);
  const auto back = constants_from_spectrum(s);
  for (std::size_t i = 0; i < 2; ++i) EXPECT_NEAR(std::abs(back.ratio(i) - c.ratio(i)), 0.0, 1e-13);
  // Direct synthesis from the spectrum equals synthesis from the seeds.
  const auto g = TimeGrid::centered(12, 512);
  const auto a = synthesize(s, g), b = synthesize(l, c, g);
  for (std::size_t i = 0; i < g.count; ++i) ASSERT_NEAR(std::abs(a[i] - b[i]), 0.0, 1e-11);
}

TEST(Darboux, RejectsBadInput) {
  const auto g = TimeGrid::centered(8, 64);
  EXPECT_THROW(synthesize(std::vector{Eigenvalue(0, 1), Eigenvalue(0, 1)}, DarbouxConstants::unit(2), g),
               DomainError);
  EXPECT_THROW(synthesize(std::vector{Eigenvalue(0, 1)}, DarbouxConstants::unit(2), g), DomainError);
  EXPECT_THROW(DarbouxConstants({{0.0, 1.0}}), DomainError);
}

TEST(Darboux, EmptySpectrumIsZeroPulse) {
  const auto q = synthesize(DiscreteSpectrum(), TimeGrid::centered(8, 64));
  EXPECT_EQ(q.peak(), 0.0);
}

}  // namespace
}  // namespace nfdm
