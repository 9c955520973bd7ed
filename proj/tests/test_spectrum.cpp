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
#include <cstring>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <numbers>
#include <random>

#include "nfdm/errors.hpp"
#include "nfdm/normalization.hpp"
#include "nfdm/pulse.hpp"
#include "nfdm/spectrum.hpp"

namespace nfdm {
namespace {

TEST(Eigenvalue, RejectsLowerHalfPlaneAndNonFinite) {
  EXPECT_THROW(Eigenvalue(0.0, 0.0), DomainError);
  EXPECT_THROW(Eigenvalue(1.0, -0.5), DomainError);
  EXPECT_THROW(Eigenvalue(NAN, 1.0), DomainError);
  EXPECT_THROW(Eigenvalue(0.0, INFINITY), DomainError);
  EXPECT_NO_THROW(Eigenvalue(-3.0, 1e-9));
}

TEST(Grid, DefaultGridIsTenPointsOneApart) {
  const auto g = default_grid();
  ASSERT_EQ(g.size(), 10u);
  EXPECT_DOUBLE_EQ(min_separation(g), 1.0);
  EXPECT_TRUE(std::is_sorted(g.begin(), g.end()));
  EXPECT_EQ(g.front(), Eigenvalue(-2, 1));
  EXPECT_EQ(g.back(), Eigenvalue(2, 2));
}

TEST(Spectrum, EnergyIsFourTimesImaginarySum) {
  const auto g = default_grid();
  std::vector<SpectrumEntry> e;
  for (const auto& l : g) e.push_back({l, Complex(1.0, 0.0)});
  EXPECT_DOUBLE_EQ(soliton_energy(DiscreteSpectrum(e)), 60.0);
  EXPECT_DOUBLE_EQ(soliton_energy(DiscreteSpectrum({{Eigenvalue(0, 0.5), 1.0}})), 2.0);
  EXPECT_DOUBLE_EQ(soliton_energy(DiscreteSpectrum()), 0.0);
}

TEST(Spectrum, RejectsDuplicatesAndZeroAmplitude) {
  EXPECT_THROW(DiscreteSpectrum({{Eigenvalue(0, 1), 1.0}, {Eigenvalue(0, 1), 2.0}}), DomainError);
  EXPECT_THROW(DiscreteSpectrum({{Eigenvalue(0, 1), 0.0}}), DomainError);
  const DiscreteSpectrum a({{Eigenvalue(0, 1), 1.0}});
  EXPECT_THROW(a.merged(a), DomainError);
}

TEST(Spectrum, CanonicalOrderAfterConstruction) {
  const DiscreteSpectrum s({{Eigenvalue(1, 1), 1.0}, {Eigenvalue(-1, 2), 2.0}, {Eigenvalue(-1, 1), 3.0}});
  EXPECT_EQ(s[0].lambda, Eigenvalue(-1, 1));
  EXPECT_EQ(s[1].lambda, Eigenvalue(-1, 2));
  EXPECT_EQ(s[2].lambda, Eigenvalue(1, 1));
}

TEST(Evolution, MatchesClosedFormAndKeepsEigenvalues) {
  const Eigenvalue l(0.5, 1.5);
  const DiscreteSpectrum s({{l, Complex(0.3, -0.7)}});
  const auto p = propagate_spectrum(s, 0.25, -2.0);
  const Complex lam = l.value();
  const Complex expect = Complex(0.3, -0.7) * std::exp(Complex(0, -2.0) * lam * lam * 0.25);
  EXPECT_EQ(p[0].lambda, l);
  EXPECT_NEAR(std::abs(p[0].amplitude - expect), 0.0, 1e-14);
}

TEST(Evolution, SemigroupAndInverseProperty) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<SpectrumEntry> e;
  for (const auto& l : default_grid()) e.push_back({l, Complex(u(rng), u(rng))});
  const DiscreteSpectrum s(e);
  for (int trial = 0; trial < 20; ++trial) {
    const double z1 = 0.3 * u(rng), z2 = 0.3 * u(rng);
    const auto a = propagate_spectrum(propagate_spectrum(s, z1), z2);
    const auto b = propagate_spectrum(s, z1 + z2);
    for (std::size_t i = 0; i < s.size(); ++i)
      EXPECT_NEAR(std::abs(a[i].amplitude / b[i].amplitude - 1.0), 0.0, 1e-10);
    const auto back = propagate_spectrum(propagate_spectrum(s, z1), -z1);
    for (std::size_t i = 0; i < s.size(); ++i)
      EXPECT_NEAR(std::abs(back[i].amplitude - s[i].amplitude), 0.0, 1e-9 * std::abs(s[i].amplitude));
  }
}

TEST(SpectrumJson, RoundTrip) {
  const DiscreteSpectrum s({{Eigenvalue(-1, 2), Complex(0.125, -3.5)}, {Eigenvalue(2, 1), Complex(1e-3, 7)}});
  const auto j = to_json(s);
  EXPECT_EQ(j.at("eigenvalues").size(), 2u);
  EXPECT_EQ(spectrum_from_json(j), s);
  EXPECT_THROW(spectrum_from_json(nlohmann::json{{"eigenvalues", {{0, 1}}}, {"amplitudes", nlohmann::json::array()}}),
               Error);
}

TEST(Normalization, ReferenceScalesOfTheDefaultFiber) {
  const auto m = NormalizationMap::from_fiber_units(2000.0 / 12.0, -5.75, 1.6);
  // Z0 = T0^2/|beta2|, P0 = |beta2|/(gamma T0^2) computed by hand.
  const double t0 = 2000.0 / 12.0;                   // ps
  const double z0_km = t0 * t0 / 5.75;               // ps^2 / (ps^2/km)
  const double p0_w = 5.75 / (1.6 * t0 * t0);        // (ps^2/km) / (1/(W km) ps^2)
  EXPECT_NEAR(m.z0() / 1e3, z0_km, 1e-9 * z0_km);
  EXPECT_NEAR(m.p0(), p0_w, 1e-12);
  EXPECT_NEAR(m.z0() / 1e3, 4830.9, 0.1);
  EXPECT_NEAR(m.p0() * 1e3, 0.1294, 1e-4);
  EXPECT_NEAR(m.to_normalized_distance(2000e3), 0.414, 1e-3);
}

TEST(Normalization, PhysicalRoundTrip) {
  const auto m = NormalizationMap::from_fiber_units(100.0, -20.0, 1.3);
  SampledPulse p({{1.0, 2.0}, {-0.5, 0.25}, {0.0, 3.0}}, -1.0, 0.5);
  const auto phys = denormalize(p, m);
  EXPECT_NEAR(phys.dt_s, 0.5 * 100e-12, 1e-24);
  EXPECT_NEAR(std::norm(phys.samples[0]), 5.0 * m.p0(), 1e-15);
  const auto back = normalize(phys, m);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(std::abs(back[i] - p[i]), 0.0, 1e-12);
}

TEST(Pulse, TrapezoidEnergyOfGaussian) {
  const auto g = TimeGrid::centered(10.0, 2001);
  auto p = SampledPulse::zeros(g);
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::exp(-0.5 * p.time(i) * p.time(i));
  EXPECT_NEAR(p.energy(), std::sqrt(std::numbers::pi), 1e-9);
}

TEST(Pulse, BinaryRoundTripIsBitExact) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n;
  std::vector<Complex> x(777);
  for (auto& v : x) v = Complex(n(rng), n(rng)) * 1e-300;
  x[3] = Complex(std::numeric_limits<double>::denorm_min(), -0.0);
  const SampledPulse p(x, -3.0000000000000004, 0.1 / 3.0);
  const auto base = std::filesystem::temp_directory_path() / "nfdm_test_pulse";
  write_pulse(p, base);
  EXPECT_EQ(std::filesystem::file_size(base.string() + ".bin"), 777u * 16u);
  const auto q = read_pulse(base);
  ASSERT_EQ(q.size(), p.size());
  EXPECT_EQ(std::memcmp(&p.samples()[0], &q.samples()[0], 777 * sizeof(Complex)), 0);
  EXPECT_EQ(q.t_start(), p.t_start());
  EXPECT_EQ(q.dt(), p.dt());
}

TEST(Pulse, ReadRejectsTruncatedPayload) {
  const SampledPulse p(std::vector<Complex>(8, Complex(1, 0)), 0.0, 1.0);
  const auto base = std::filesystem::temp_directory_path() / "nfdm_test_trunc";
  write_pulse(p, base);
  std::filesystem::resize_file(base.string() + ".bin", 100);
  EXPECT_THROW(read_pulse(base), Error);
}

}  // namespace
}  // namespace nfdm
