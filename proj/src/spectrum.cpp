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

#include "nfdm/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <nlohmann/json.hpp>
#include <sstream>

#include "nfdm/calibration.hpp"
#include "nfdm/errors.hpp"

namespace nfdm {

Eigenvalue::Eigenvalue(double omega, double sigma) : omega_(omega), sigma_(sigma) {
  if (!std::isfinite(omega) || !std::isfinite(sigma) || !(sigma > 0.0)) {
    std::ostringstream os;
    os << "eigenvalue " << omega << (sigma < 0 ? "" : "+") << sigma
       << "j is not in the open upper half plane";
    throw DomainError(os.str());
  }
}

double distance(const Eigenvalue& a, const Eigenvalue& b) {
  return std::abs(a.value() - b.value());
}

double min_separation(std::span<const Eigenvalue> eigenvalues) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < eigenvalues.size(); ++i)
    for (std::size_t j = i + 1; j < eigenvalues.size(); ++j)
      best = std::min(best, distance(eigenvalues[i], eigenvalues[j]));
  return best;
}

std::vector<Eigenvalue> make_grid(std::span<const double> omegas,
                                  std::span<const double> sigmas) {
  for (double s : sigmas)
    if (!(s > 0.0)) throw DomainError("make_grid: every sigma must be positive");
  std::vector<Eigenvalue> grid;
  grid.reserve(omegas.size() * sigmas.size());
  for (double w : omegas)
    for (double s : sigmas) grid.emplace_back(w, s);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

std::vector<Eigenvalue> default_grid() {
  const double omegas[] = {-2.0, -1.0, 0.0, 1.0, 2.0};
  const double sigmas[] = {1.0, 2.0};
  return make_grid(omegas, sigmas);
}

DiscreteSpectrum::DiscreteSpectrum(std::vector<SpectrumEntry> entries)
    : entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(),
            [](const SpectrumEntry& a, const SpectrumEntry& b) { return a.lambda < b.lambda; });
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const Complex a = entries_[i].amplitude;
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag()) || a == Complex(0.0))
      throw DomainError("DiscreteSpectrum: spectral amplitudes must be finite and nonzero");
    if (i > 0 && entries_[i].lambda == entries_[i - 1].lambda)
      throw DomainError("DiscreteSpectrum: duplicate eigenvalue");
  }
}

std::vector<Eigenvalue> DiscreteSpectrum::eigenvalues() const {
  std::vector<Eigenvalue> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.lambda);
  return out;
}

std::vector<Complex> DiscreteSpectrum::amplitudes() const {
  std::vector<Complex> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.amplitude);
  return out;
}

DiscreteSpectrum DiscreteSpectrum::merged(const DiscreteSpectrum& other) const {
  std::vector<SpectrumEntry> all = entries_;
  all.insert(all.end(), other.entries_.begin(), other.entries_.end());
  return DiscreteSpectrum(std::move(all));
}

bool operator==(const DiscreteSpectrum& a, const DiscreteSpectrum& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].lambda != b[i].lambda || a[i].amplitude != b[i].amplitude) return false;
  return true;
}

double soliton_energy(const DiscreteSpectrum& spec) {
  double sum = 0.0;
  for (const auto& e : spec) sum += e.lambda.sigma();
  return 4.0 * sum;
}

Complex evolution_factor(const Eigenvalue& lambda, double z, double evolution_constant) {
  const Complex l = lambda.value();
  return std::exp(Complex(0.0, evolution_constant) * l * l * z);
}

DiscreteSpectrum propagate_spectrum(const DiscreteSpectrum& spec, double z) {
  return propagate_spectrum(spec, z, kEvolutionConstant);
}

DiscreteSpectrum propagate_spectrum(const DiscreteSpectrum& spec, double z,
                                    double evolution_constant) {
  std::vector<SpectrumEntry> out = spec.entries();
  for (auto& e : out) e.amplitude *= evolution_factor(e.lambda, z, evolution_constant);
  return DiscreteSpectrum(std::move(out));
}

nlohmann::json to_json(std::span<const Eigenvalue> eigenvalues) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& l : eigenvalues) arr.push_back({l.omega(), l.sigma()});
  return arr;
}

std::vector<Eigenvalue> eigenvalues_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw ConfigError("eigenvalues", "expected an array of [omega, sigma]");
  std::vector<Eigenvalue> out;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2)
      throw ConfigError("eigenvalues", "each eigenvalue must be [omega, sigma]");
    out.emplace_back(e[0].get<double>(), e[1].get<double>());
  }
  return out;
}

nlohmann::json to_json(const DiscreteSpectrum& spec) {
  nlohmann::json amps = nlohmann::json::array();
  for (const auto& e : spec) amps.push_back({e.amplitude.real(), e.amplitude.imag()});
  const auto eig = spec.eigenvalues();
  return {{"eigenvalues", to_json(std::span<const Eigenvalue>(eig))}, {"amplitudes", amps}};
}

DiscreteSpectrum spectrum_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("eigenvalues") || !j.contains("amplitudes"))
    throw ConfigError("spectrum", "expected {eigenvalues, amplitudes}");
  const auto eig = eigenvalues_from_json(j.at("eigenvalues"));
  const auto& amps = j.at("amplitudes");
  if (!amps.is_array() || amps.size() != eig.size())
    throw ConfigError("spectrum/amplitudes", "must have one [re, im] per eigenvalue");
  std::vector<SpectrumEntry> entries;
  for (std::size_t i = 0; i < eig.size(); ++i) {
    if (!amps[i].is_array() || amps[i].size() != 2)
      throw ConfigError("spectrum/amplitudes/" + std::to_string(i), "expected [re, im]");
    entries.push_back({eig[i], Complex(amps[i][0].get<double>(), amps[i][1].get<double>())});
  }
  return DiscreteSpectrum(std::move(entries));
}

}  // namespace nfdm
