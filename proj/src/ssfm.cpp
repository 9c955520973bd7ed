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

#include "nfdm/ssfm.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <nlohmann/json.hpp>
#include <sstream>

#include "nfdm/errors.hpp"
#include "nfdm/fft.hpp"
#include "nfdm/kernels.hpp"

namespace nfdm {
namespace {

constexpr double kPlanck = 6.62607015e-34;
constexpr double kDbPerNeper = 10.0 / std::numbers::ln10;  // 10 log10(e)

// exp(j d k^2 h / 2), the exact solution of j q_z = -(d/2) q_tt per mode.
std::vector<Complex> dispersion_factors(std::size_t n, double dt, double d, double h) {
  std::vector<Complex> f(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double w = angular_frequency(k, n, dt);
    f[k] = std::polar(1.0, 0.5 * d * w * w * h);
  }
  return f;
}

void check_wrap(std::span<const Complex> x) {
  const auto& kt = kernels::active();
  const std::size_t edge = std::max<std::size_t>(1, x.size() / 32);
  const double total = kt.sum_norm(x.data(), x.size());
  if (total == 0.0) return;
  const double left = kt.sum_norm(x.data(), edge);
  const double right = kt.sum_norm(x.data() + x.size() - edge, edge);
  const double frac = std::max(left, right) / total;
  if (frac > 1e-6) {
    std::ostringstream os;
    os << "propagate_span: " << frac << " of the energy reached the window edge (limit 1e-6); "
       << "widen the grid";
    throw WindowingError(os.str());
  }
}

}  // namespace

void FiberSpan::validate() const {
  if (!(length_km > 0.0)) throw DomainError("FiberSpan: length must be positive");
  if (!(beta2_ps2_per_km < 0.0)) throw DomainError("FiberSpan: beta2 must be negative");
  if (!(gamma_per_w_km >= 0.0)) throw DomainError("FiberSpan: gamma must be non-negative");
  if (!(alpha_db_per_km >= 0.0)) throw DomainError("FiberSpan: alpha must be non-negative");
}

double FiberSpan::alpha_per_km() const noexcept { return alpha_db_per_km / kDbPerNeper; }

AmplifierModel AmplifierModel::compensating(const FiberSpan& span, double nf_db) {
  AmplifierModel amp;
  amp.gain_db = span.loss_db();
  amp.nf_db = nf_db;
  return amp;
}

void AmplifierModel::validate() const {
  if (!(gain_db >= 0.0)) throw DomainError("AmplifierModel: gain must be >= 0 dB");
  if (!(filter_bandwidth_hz > 0.0))
    throw DomainError("AmplifierModel: filter bandwidth must be positive");
  if (!(center_frequency_hz > 0.0))
    throw DomainError("AmplifierModel: center frequency must be positive");
  if (std::isnan(nf_db)) throw DomainError("AmplifierModel: noise figure is NaN");
}

double AmplifierModel::gain() const noexcept { return std::pow(10.0, gain_db / 10.0); }

double AmplifierModel::noise_psd() const noexcept {
  if (!std::isfinite(nf_db)) return 0.0;
  const double nf = std::pow(10.0, nf_db / 10.0);
  return (gain() - 1.0) * 0.5 * nf * kPlanck * center_frequency_hz;
}

void LinkProfile::validate() const {
  span.validate();
  amplifier.validate();
  if (spans_per_loop < 1) throw DomainError("LinkProfile: spans_per_loop must be >= 1");
  if (loops < 0) throw DomainError("LinkProfile: loops must be >= 0");
  if (!(dz_km > 0.0) || dz_km > span.length_km)
    throw DomainError("LinkProfile: dz must be in (0, span length]");
}

SampledPulse propagate_span(const SampledPulse& pulse, const FiberSpan& span,
                            const NormalizationMap& map, double dz_km, bool periodic) {
  span.validate();
  if (!(dz_km > 0.0) || dz_km > span.length_km)
    throw DomainError("propagate_span: dz must be in (0, span length]");

  const auto steps = static_cast<std::size_t>(std::ceil(span.length_km / dz_km - 1e-9));
  const double h_km = span.length_km / static_cast<double>(steps);
  const double h = map.to_normalized_distance(h_km * 1e3);
  const double alpha = span.alpha_per_km() * map.z0() * 1e-3;  // per unit z
  // Kerr phase over one lossy step: |q|^2 (1 - e^{-alpha h}) / alpha.
  const double h_eff = alpha > 0.0 ? -std::expm1(-alpha * h) / alpha : h;
  const double gain = std::exp(-0.5 * alpha * h);

  // Coefficients relative to the map, so a span may differ from the fiber the
  // normalization was built on (gamma = 0 gives a linear fiber).
  const double disp = -span.beta2_ps2_per_km * 1e-27 / std::abs(map.beta2());
  const double nl = span.gamma_per_w_km * 1e-3 / map.gamma();

  const std::size_t n = pulse.size();
  const Fft fft(n);
  const auto half = dispersion_factors(n, pulse.dt(), disp, 0.5 * h);
  const auto full = dispersion_factors(n, pulse.dt(), disp, h);
  const auto& kt = kernels::active();

  std::vector<Complex> x(pulse.samples().begin(), pulse.samples().end());
  fft.forward(x);
  kt.cmul(x.data(), half.data(), n);
  for (std::size_t s = 0; s < steps; ++s) {
    fft.inverse(x);
    kt.kerr(x.data(), n, nl * h_eff, gain);
    fft.forward(x);
    kt.cmul(x.data(), s + 1 == steps ? half.data() : full.data(), n);
  }
  fft.inverse(x);
  if (!periodic) check_wrap(x);
  return SampledPulse(std::move(x), pulse.t_start(), pulse.dt());
}

double noise_variance_per_sample(const AmplifierModel& amp, const NormalizationMap& map,
                                 const TimeGrid& grid) {
  const double dt_s = grid.dt * map.t0();
  const double df = 1.0 / (static_cast<double>(grid.count) * dt_s);
  std::size_t kept = 0;
  for (std::size_t k = 0; k < grid.count; ++k) {
    const double f = angular_frequency(k, grid.count, dt_s) / (2.0 * std::numbers::pi);
    if (std::abs(f) <= 0.5 * amp.filter_bandwidth_hz) ++kept;
  }
  return amp.noise_psd() * static_cast<double>(kept) * df / map.p0();
}

SampledPulse amplify(const SampledPulse& pulse, const AmplifierModel& amp,
                     const NormalizationMap& map, std::mt19937_64& rng) {
  amp.validate();
  const std::size_t n = pulse.size();
  std::vector<Complex> x(pulse.samples().begin(), pulse.samples().end());
  const double scale = std::sqrt(amp.gain());
  for (auto& v : x) v *= scale;
  const double rho = amp.noise_psd();
  if (rho <= 0.0) return SampledPulse(std::move(x), pulse.t_start(), pulse.dt());

  // Bin variance s2 gives a per-sample variance kept*s2/N^2 after the 1/N
  // inverse transform; solve for rho * B_eff / P0.
  const double dt_s = pulse.dt() * map.t0();
  const double bin_var = rho * static_cast<double>(n) / (dt_s * map.p0());
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5 * bin_var));
  std::vector<Complex> noise(n, Complex(0.0));
  for (std::size_t k = 0; k < n; ++k) {
    const double f = angular_frequency(k, n, dt_s) / (2.0 * std::numbers::pi);
    if (std::abs(f) > 0.5 * amp.filter_bandwidth_hz) continue;
    const double re = normal(rng);
    const double im = normal(rng);
    noise[k] = Complex(re, im);
  }
  Fft(n).inverse(noise);
  for (std::size_t i = 0; i < n; ++i) x[i] += noise[i];
  return SampledPulse(std::move(x), pulse.t_start(), pulse.dt());
}

double path_average_factor(const FiberSpan& span) noexcept {
  const double al = span.alpha_per_km() * span.length_km;
  if (al <= 0.0) return 1.0;
  return al / -std::expm1(-al);
}

LinkResult run_link(const SampledPulse& pulse, const LinkProfile& link, bool record,
                    bool periodic, std::uint64_t stream) {
  link.validate();
  std::seed_seq seq{static_cast<std::uint32_t>(link.amplifier.noise_seed),
                    static_cast<std::uint32_t>(link.amplifier.noise_seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  std::mt19937_64 rng(seq);
  const bool skip_check = periodic || link.amplifier.adds_noise();

  LinkResult out{pulse, {}};
  for (int s = 0; s < link.span_count(); ++s) {
    out.output = propagate_span(out.output, link.span, link.normalization, link.dz_km, skip_check);
    out.output = amplify(out.output, link.amplifier, link.normalization, rng);
    if (record) {
      out.record.snapshots.push_back(out.output);
      out.record.distance_km.push_back(link.span.length_km * static_cast<double>(s + 1));
    }
  }
  return out;
}

void export_snapshots(const PropagationRecord& record, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("export_snapshots: cannot create " + dir.string() + ": " + ec.message());
  nlohmann::json index = nlohmann::json::array();
  for (std::size_t i = 0; i < record.snapshots.size(); ++i) {
    std::ostringstream name;
    name << "snapshot_" << std::setw(3) << std::setfill('0') << i;
    write_pulse(record.snapshots[i], dir / name.str());
    index.push_back({{"file", name.str()}, {"distance_km", record.distance_km[i]}});
  }
  std::ofstream f(dir / "index.json");
  if (!f) throw IoError("export_snapshots: cannot write index.json");
  f << nlohmann::json{{"snapshots", index}}.dump(2) << '\n';
}

}  // namespace nfdm
