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

#include "nfdm/darboux.hpp"
#include "nfdm/errors.hpp"
#include "nfdm/fc_nft.hpp"

namespace nfdm {
namespace {

SampledPulse sech(double amplitude, const TimeGrid& g) {
  auto p = SampledPulse::zeros(g);
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = amplitude / std::cosh(p.time(i));
  return p;
}

// A sech(t) has eigenvalues j(A - k - 1/2) for 0 <= k < A - 1/2.
std::vector<double> satsuma_yajima(double a) {
  std::vector<double> out;
  for (int k = 0; a - k - 0.5 > 0; ++k) out.push_back(a - k - 0.5);
  std::sort(out.begin(), out.end());
  return out;
}

TEST(FourierCollocation, SatsumaYajimaSpectra) {
  const auto g = TimeGrid::centered(16, 4096);
  for (double a : {1.0, 2.2, 3.0}) {
    const auto d = detect_eigenvalues(sech(a, g), 64, 0.05);
    const auto want = satsuma_yajima(a);
    ASSERT_EQ(d.size(), want.size()) << "A=" << a;
    std::vector<double> im;
    for (const auto& l : d) {
      EXPECT_NEAR(l.omega(), 0.0, 1e-6);
      im.push_back(l.sigma());
    }
    std::sort(im.begin(), im.end());
    for (std::size_t k = 0; k < want.size(); ++k) EXPECT_NEAR(im[k], want[k], 1e-3) << "A=" << a;
  }
}

TEST(FourierCollocation, BelowThresholdPulseHasNoEigenvalue) {
  // A sech(t) with A <= 1/2 carries no discrete spectrum.
  EXPECT_TRUE(detect_eigenvalues(sech(0.4, TimeGrid::centered(16, 1024)), 64, 0.05).empty());
}

TEST(FourierCollocation, ErrorShrinksWithHarmonics) {
  const std::vector<Eigenvalue> l{Eigenvalue(-1, 1), Eigenvalue(0, 2), Eigenvalue(1, 1)};
  const auto q = synthesize(l, DarbouxConstants::from_phases(std::vector{0.0, 1.0, 2.5}), default_synthesis_grid());
  double prev = 1e9;
  for (int m : {32, 64, 128}) {
    DetectOptions o;
    o.harmonics = m;
    const auto d = detect_eigenvalues(q, o);
    double err = 0.0;
    for (const auto& want : l) {
      double best = 1e9;
      for (const auto& got : d) best = std::min(best, distance(got, want));
      err = std::max(err, best);
    }
    EXPECT_LE(err, prev * 1.01 + 1e-9) << "M=" << m;
    prev = err;
  }
  EXPECT_LT(prev, 0.05);
}

TEST(FourierCollocation, RejectsTooFewHarmonics) {
  EXPECT_THROW(detect_eigenvalues(sech(1, TimeGrid::centered(16, 256)), 8, 0.1), PreconditionError);
}

TEST(FourierCollocation, WindowCheck) {
  // A soliton sitting on the window edge fails the truncation check.
  auto p = SampledPulse::zeros(TimeGrid::centered(8, 512));
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = 1.0 / std::cosh(p.time(i) - 7.0);
  EXPECT_THROW(detect_eigenvalues(p, DetectOptions{}), PreconditionError);
  DetectOptions lax;
  lax.check_window = false;
  EXPECT_NO_THROW(detect_eigenvalues(p, lax));
}

TEST(Scattering, UnimodularOnRealAxis) {
  const auto q = synthesize(std::vector{Eigenvalue(0, 1), Eigenvalue(1, 0.5)},
                            DarbouxConstants::from_phases(std::vector{0.0, 1.0}), default_synthesis_grid());
  for (double xi : {-3.0, -0.7, 0.0, 0.4, 2.5}) {
    const auto s = scattering(q, Complex(xi, 0.0));
    EXPECT_NEAR(std::norm(s.a) + std::norm(s.b), 1.0, 1e-9) << xi;
  }
}

TEST(Scattering, SingleSolitonTransmissionCoefficientConvergesQuadratically) {
  // a(lambda) = (lambda - l) / (lambda - conj(l)) for one soliton. The
  // piecewise-constant transfer matrix is second order in dt.
  const Eigenvalue l(0.5, 0.8);
  for (Complex z : {Complex(0.1, 0.3), Complex(-1, 0.2), Complex(2, 1.5)}) {
    const Complex want = (z - l.value()) / (z - std::conj(l.value()));
    double err[2];
    for (int k = 0; k < 2; ++k) {
      const auto q = synthesize(std::vector{l}, DarbouxConstants::unit(1), TimeGrid::centered(16, 4096u << k));
      err[k] = std::abs(scattering(q, z).a - want);
    }
    EXPECT_LT(err[0], 2e-5);
    EXPECT_NEAR(err[0] / err[1], 4.0, 0.5) << z;
  }
}

TEST(SpectralAmplitude, NewtonRefinementConverges) {
  const Complex a = refine_eigenvalue(sech(2.2, TimeGrid::centered(16, 4096)), Complex(0.05, 1.6));
  const Complex b = refine_eigenvalue(sech(2.2, TimeGrid::centered(16, 8192)), Complex(0.05, 1.6));
  EXPECT_LT(std::abs(a - Complex(0, 1.7)), 2e-5);
  EXPECT_NEAR(std::abs(a - Complex(0, 1.7)) / std::abs(b - Complex(0, 1.7)), 4.0, 0.5);
}

TEST(OokDecide, NearestMatchingWithinRadius) {
  const auto nominal = default_grid();
  const std::vector<Eigenvalue> det{Eigenvalue(-2.1, 1.05), Eigenvalue(0.3, 2.2), Eigenvalue(5, 5)};
  const auto d = ook_decide(det, nominal, 0.5);
  std::size_t on = 0;
  for (bool b : d.bits) on += b;
  EXPECT_EQ(on, 2u);
  EXPECT_TRUE(d.bits[0]);  // (-2, 1)
  EXPECT_TRUE(d.bits[5]);  // (0, 2)
  EXPECT_EQ(d.unmatched_detections, 1u);
}

TEST(OokDecide, DetectionConsumedOnce) {
  const std::vector<Eigenvalue> nominal{Eigenvalue(0, 1), Eigenvalue(0, 1.4)};
  const auto d = ook_decide(std::vector{Eigenvalue(0, 1.2)}, nominal, 0.5);
  EXPECT_EQ(d.bits[0] + d.bits[1], 1);
}

}  // namespace
}  // namespace nfdm
