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

#include "nfdm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>

#include "nfdm/darboux.hpp"
#include "nfdm/errors.hpp"
#include "nfdm/fft.hpp"

namespace nfdm {

Interval pulse_duration(const SampledPulse& pulse, double epsilon) {
  if (!(epsilon > 0.0)) throw DomainError("pulse_duration: epsilon must be positive");
  const double energy = pulse.energy();
  if (energy == 0.0) throw DomainError("pulse_duration: all-zero pulse");
  const double thr = epsilon * std::sqrt(energy);
  const auto x = pulse.samples();
  const std::size_t n = x.size();

  std::size_t first = 0;
  while (first < n && std::abs(x[first]) < thr) ++first;
  std::size_t last = n - 1;
  while (last > 0 && std::abs(x[last]) < thr) --last;
  if (first == n) {
    // Energy spread too thin for any sample to reach the threshold.
    const double t = pulse.time(static_cast<std::size_t>(
        std::max_element(x.begin(), x.end(), [](auto a, auto b) { return std::abs(a) < std::abs(b); }) -
        x.begin()));
    return {t, t};
  }
  const auto cross = [&](std::size_t inside, std::size_t outside) {
    const double a = std::abs(x[inside]), b = std::abs(x[outside]);
    const double f = (a - thr) / (a - b);
    return pulse.time(inside) + f * (pulse.time(outside) - pulse.time(inside));
  };
  const double lo = first == 0 ? pulse.time(0) : cross(first, first - 1);
  const double hi = last == n - 1 ? pulse.time(n - 1) : cross(last, last + 1);
  return {lo, hi};
}

double bandwidth99(const SampledPulse& pulse, double energy_fraction) {
  const std::size_t n = pulse.size();
  std::vector<Complex> spec(pulse.samples().begin(), pulse.samples().end());
  Fft(n).forward(spec);
  const double df = 1.0 / (static_cast<double>(n) * pulse.dt());

  // Bins in ascending frequency.
  std::vector<double> f(n), p(n);
  const std::size_t neg = n / 2;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = (i + n - neg) % n;
    f[i] = (static_cast<double>(i) - static_cast<double>(neg)) * df;
    p[i] = std::norm(spec[k]);
  }
  double total = 0.0, moment = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    total += p[i];
    moment += f[i] * p[i];
  }
  if (total == 0.0) throw DomainError("bandwidth99: all-zero pulse");
  const double centre = moment / total;
  const double target = energy_fraction * total;

  // Cumulative energy below x for piecewise-constant density over the bins.
  std::vector<double> cum(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) cum[i + 1] = cum[i] + p[i];
  const double f_lo = f[0] - 0.5 * df;
  const auto below = [&](double x) {
    const double u = (x - f_lo) / df;
    if (u <= 0.0) return 0.0;
    if (u >= static_cast<double>(n)) return total;
    const auto i = static_cast<std::size_t>(u);
    return cum[i] + p[i] * (u - static_cast<double>(i));
  };
  const auto inside = [&](double w) { return below(centre + w) - below(centre - w); };
  double lo = 0.0, hi = 0.5 * df * static_cast<double>(n) + std::abs(centre);
  for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (inside(mid) >= target ? hi : lo) = mid;
  }
  return 2.0 * hi;
}

BandwidthProfile bandwidth_profile(const DiscreteSpectrum& spec, std::span<const double> z_samples,
                                   const TimeGrid& grid) {
  BandwidthProfile out;
  for (double z : z_samples) {
    out.distances.push_back(z);
    out.bw.push_back(spec.size() == 0 ? 0.0 : bandwidth99(synthesize(propagate_spectrum(spec, z), grid)));
  }
  return out;
}

void write_bandwidth_csv(const BandwidthProfile& profile, const std::filesystem::path& path) {
  std::ofstream f(path);
  if (!f) throw IoError("write_bandwidth_csv: cannot open " + path.string());
  f << "z,bw\n" << std::setprecision(17);
  for (std::size_t i = 0; i < profile.distances.size(); ++i)
    f << profile.distances[i] << ',' << profile.bw[i] << '\n';
}

double eigenvalue_deviation(std::span<const Eigenvalue> detected,
                            std::span<const Eigenvalue> nominal, double radius) {
  struct Pair {
    double dist;
    std::size_t det, nom;
  };
  std::vector<Pair> pairs;
  for (std::size_t d = 0; d < detected.size(); ++d)
    for (std::size_t m = 0; m < nominal.size(); ++m) {
      const double dist = distance(detected[d], nominal[m]);
      if (dist < radius) pairs.push_back({dist, d, m});
    }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    if (a.dist != b.dist) return a.dist < b.dist;
    if (a.nom != b.nom) return a.nom < b.nom;
    return a.det < b.det;
  });
  std::vector<double> best(nominal.size(), radius);
  std::vector<bool> used(detected.size(), false), done(nominal.size(), false);
  for (const auto& p : pairs) {
    if (used[p.det] || done[p.nom]) continue;
    used[p.det] = done[p.nom] = true;
    best[p.nom] = p.dist;
  }
  return nominal.empty() ? 0.0 : *std::max_element(best.begin(), best.end());
}

}  // namespace nfdm
