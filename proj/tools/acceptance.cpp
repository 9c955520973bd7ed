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

// Acceptance suite: nine end-to-end criteria, one PASS/FAIL line each.
//
// Tolerances are compile-time constants below. `--only 2,5` runs a subset;
// `--expect-fail 3,9` makes the exit status 0 when exactly those criteria
// fail (used by ctest so documented failures stay visible but do not break
// the build).

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <nlohmann/json.hpp>
#include <numbers>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "nfdm/calibration.hpp"
#include "nfdm/darboux.hpp"
#include "nfdm/designer.hpp"
#include "nfdm/fc_nft.hpp"
#include "nfdm/metrics.hpp"
#include "nfdm/pipeline.hpp"
#include "nfdm/ssfm.hpp"

namespace {

using namespace nfdm;
using Clock = std::chrono::steady_clock;

// Criterion 1
constexpr double kSyTolerance = 1e-3;
constexpr double kSyBudgetS = 10;
// Criterion 2
constexpr double kRoundTripEigTolerance = 1e-2;
constexpr double kRoundTripPhaseTolerance = 1e-3;
constexpr double kRoundTripBudgetS = 60;
// Criterion 3
constexpr double kTargetDuration = 12.0;
constexpr double kDurationRelTolerance = 0.05;
constexpr double kDurationBudgetS = 10;
// Criterion 4
constexpr double kEnergyRelTolerance = 5e-3;
constexpr double kEnergyBudgetS = 30;
// Criterion 5
constexpr double kInvarianceEigTolerance = 5e-2;
constexpr double kInvariancePhaseTolerance = 2e-2;
constexpr double kInvarianceBudgetS = 300;
// Criterion 6
constexpr double kDeviationRatio = 2.0;
constexpr double kDeviationBudgetS = 900;
// Criterion 7
constexpr double kEndDurationRelTolerance = 0.02;
constexpr double kContractionBudgetS = 300;
// Criterion 8
constexpr double kSearchTolerance = 1e-6;
constexpr double kSearchBudgetS = 600;
// Criterion 9
constexpr double kBerLow = 1e-3;
constexpr double kBerHigh = 5e-2;
constexpr std::size_t kBerSymbols = 2000;  // 2e4 bits
constexpr double kBerBudgetS = 3600;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double nearest(const Eigenvalue& want, std::span<const Eigenvalue> got) {
  double best = INFINITY;
  for (const auto& g : got) best = std::min(best, distance(g, want));
  return best;
}

std::vector<double> seeded_phases(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
  std::vector<double> out(n);
  for (auto& p : out) p = u(rng);
  return out;
}

// Amplitude of the entry nearest to `nominal`. Detected eigenvalues whose
// omegas tie can come back in either canonical order.
Complex amplitude_near(const DiscreteSpectrum& s, const Eigenvalue& nominal) {
  const SpectrumEntry* best = &s[0];
  for (const auto& e : s)
    if (distance(e.lambda, nominal) < distance(best->lambda, nominal)) best = &e;
  return best->amplitude;
}

// Detection that also polishes each eigenvalue; used where FC alone is too
// coarse for the pulse at hand.
std::vector<Eigenvalue> detect_refined(const SampledPulse& q, int harmonics) {
  DetectOptions o;
  o.harmonics = harmonics;
  o.check_window = false;
  o.refine = true;
  return detect_eigenvalues(q, o);
}

// Reduced design settings shared by the codebook-based criteria.
DesignRules reduced_rules() {
  DesignRules r;
  r.grid = TimeGrid::centered(16, 1024);
  r.z_sampling = uniform_sampling(r.z_link, 9);
  return r;
}

SearchOptions reduced_search() {
  SearchOptions s;
  s.strategy = SearchStrategy::coordinate;
  s.starts = 1;
  s.pair_moves = false;
  return s;
}

// 2^8 balanced patterns; the first complementary pair is swapped for
// all-on / all-off so the worst case is always present.
std::vector<BitPattern> acceptance_patterns() {
  auto ps = balanced_patterns(10, 256, 1);
  const BitPattern on(10, true), off(10, false);
  if (std::find(ps.begin(), ps.end(), on) == ps.end()) {
    BitPattern first = ps.front(), twin = first;
    twin.flip();
    std::replace(ps.begin(), ps.end(), first, on);
    std::replace(ps.begin(), ps.end(), twin, off);
  }
  return ps;
}

const Codebook& shared_codebook() {
  static const Codebook book = [] {
    const auto t0 = Clock::now();
    auto b = build_codebook(default_grid(), acceptance_patterns(), reduced_rules(), reduced_search(), 1);
    std::cout << fmt("      (shared 256-entry codebook designed in %.1f s)\n", seconds_since(t0));
    return b;
  }();
  return book;
}

Outcome satsuma_yajima() {
  const auto g = TimeGrid::centered(16, 4096);
  double worst = 0.0;
  std::ostringstream found;
  for (auto [a, want] : {std::pair{1.0, std::vector{0.5}}, std::pair{2.2, std::vector{0.7, 1.7}}}) {
    auto q = SampledPulse::zeros(g);
    for (std::size_t i = 0; i < q.size(); ++i) q[i] = a / std::cosh(q.time(i));
    const auto d = detect_eigenvalues(q, 64, 0.05);
    if (d.size() != want.size()) return {false, fmt("A=%.1f: %zu eigenvalues, expected %zu", a, d.size(), want.size())};
    for (double s : want) worst = std::max(worst, nearest(Eigenvalue(0, s), d));
    found << " A=" << a << ":";
    for (const auto& l : d) found << " " << l.sigma() << "j";
  }
  return {worst <= kSyTolerance, fmt("max |err| %.2e (tol %.0e);", worst, kSyTolerance) + found.str()};
}

Outcome round_trip() {
  const auto grid = default_grid();
  const auto q = synthesize(grid, DarbouxConstants::from_phases(seeded_phases(10, 7)), default_synthesis_grid());
  DetectOptions o;
  o.harmonics = 256;
  const auto d = detect_eigenvalues(q, o);
  double eig_err = 0.0;
  for (const auto& l : grid) eig_err = std::max(eig_err, nearest(l, d));
  const bool count_ok = d.size() == grid.size();

  // Two-soliton cases: seeded pairs and phases, q_d measured at the detected
  // eigenvalues and compared with kappa * e^{j phase}.
  std::mt19937_64 rng(11);
  double phase_err = 0.0;
  const int cases = 8;
  for (int c = 0; c < cases; ++c) {
    std::size_t i = rng() % 10, j = rng() % 9;
    if (j >= i) ++j;
    const std::vector<Eigenvalue> pair{grid[std::min(i, j)], grid[std::max(i, j)]};
    const auto ph = seeded_phases(2, 100 + c);
    const auto pulse = synthesize(pair, DarbouxConstants::from_phases(ph), default_synthesis_grid());
    const auto det = detect_refined(pulse, 128);
    if (det.size() != 2) return {false, fmt("2-soliton case %d: %zu eigenvalues detected", c, det.size())};
    const auto measured = measure_spectrum(pulse, det);
    const auto kappa = amplitude_kernel(pair);
    for (std::size_t k = 0; k < 2; ++k) {
      const double got = std::arg(amplitude_near(measured, pair[k]) / kappa[k]);
      phase_err = std::max(phase_err, std::abs(std::remainder(got - ph[k], 2 * std::numbers::pi)));
    }
  }
  const bool pass = count_ok && eig_err <= kRoundTripEigTolerance && phase_err <= kRoundTripPhaseTolerance;
  return {pass, fmt("10-eig max |err| %.2e (tol %.0e, %zu found); %d two-soliton phase err %.2e (tol %.0e)", eig_err,
                    kRoundTripEigTolerance, d.size(), cases, phase_err, kRoundTripPhaseTolerance)};
}

Outcome all_on_duration() {
  // All ten eigenvalues, unit Darboux seeds a = b = 1.
  const auto grid = TimeGrid::centered(24, 8192);
  const auto q = synthesize(default_grid(), DarbouxConstants::unit(10), grid);
  const double d = pulse_duration(q, 0.01).width();
  // Diagnostics: same pulse with an un-normalized |q| < 0.01 threshold, and
  // the designed transmit pulse of the all-on codeword.
  const double d_abs = pulse_duration(q, 0.01 / std::sqrt(q.energy())).width();
  const auto mid = synthesize(midlink_reference(default_grid(), std::vector<double>(10, 0.0)), grid);
  const double d_mid = pulse_duration(mid, 0.01).width();
  const double d_mid_abs = pulse_duration(mid, 0.01 / std::sqrt(mid.energy())).width();
  const auto tx = to_transmit_spectrum(midlink_reference(default_grid(), std::vector<double>(10, 0.0)), 0.414);
  const double d_tx = pulse_duration(synthesize(tx, grid), 0.01).width();
  const bool pass = std::abs(d / kTargetDuration - 1.0) <= kDurationRelTolerance;
  return {pass, fmt("duration %.3f, target %.1f +-%.0f%%; diagnostics: |q|<0.01 gives %.3f; zero-phase mid-link "
                    "design %.3f (|q|<0.01: %.3f); its transmit pulse %.3f",
                    d, kTargetDuration, 100 * kDurationRelTolerance, d_abs, d_mid, d_mid_abs, d_tx)};
}

Outcome energy_identity() {
  const auto& book = shared_codebook();
  const auto t0 = Clock::now();
  const auto grid = reduced_rules().grid;
  double worst = 0.0, all_on = 0.0;
  for (const auto& e : book.entries) {
    if (e.transmit.empty()) continue;
    const double want = soliton_energy(e.transmit);
    const double got = synthesize(e.transmit, grid).energy();
    worst = std::max(worst, std::abs(got / want - 1.0));
    if (e.transmit.size() == 10) all_on = got;
  }
  const double t = seconds_since(t0);
  return {worst <= kEnergyRelTolerance && t < kEnergyBudgetS,
          fmt("%zu entries, max rel err %.2e (tol %.1e), all-on energy %.4f; check %.1f s", book.entries.size(), worst,
              kEnergyRelTolerance, all_on, t)};
}

Outcome ideal_channel() {
  const auto grid = default_grid();
  std::vector<double> ph(10);
  std::mt19937_64 rng(5);
  for (auto& p : ph) p = static_cast<double>(rng() % 8) * std::numbers::pi / 4;
  const auto tx = to_transmit_spectrum(midlink_reference(grid, ph), 0.414);
  const auto q0 = synthesize(tx, default_synthesis_grid());

  FiberSpan span;
  span.alpha_db_per_km = 0.0;
  span.length_km = 2000.0;
  const auto map = NormalizationMap::from_fiber_units(2000.0 / 12.0, -5.75, 1.6);
  const double z = map.to_normalized_distance(2000e3);
  const auto q1 = propagate_span(q0, span, map, 0.1);

  const auto d0 = detect_refined(q0, 128), d1 = detect_refined(q1, 128);
  double eig_err = 0.0;
  for (const auto& l : grid) eig_err = std::max({eig_err, nearest(l, d0), nearest(l, d1)});
  if (d0.size() != 10 || d1.size() != 10)
    return {false, fmt("detected %zu / %zu eigenvalues at the ends", d0.size(), d1.size())};
  const auto s0 = measure_spectrum(q0, d0), s1 = measure_spectrum(q1, d1);
  double phase_err = 0.0;
  for (std::size_t i = 0; i < 10; ++i) {
    const Complex law = evolution_factor(grid[i], z, kEvolutionConstant);
    const double got = std::arg(amplitude_near(s1, grid[i]) / amplitude_near(s0, grid[i]) / law);
    phase_err = std::max(phase_err, std::abs(got));
  }
  return {eig_err <= kInvarianceEigTolerance && phase_err <= kInvariancePhaseTolerance,
          fmt("z=%.4f (2000 km, dz 100 m): eig drift %.2e (tol %.0e), phase err vs c=%g law %.2e (tol %.0e)", z,
              eig_err, kInvarianceEigTolerance, kEvolutionConstant, phase_err, kInvariancePhaseTolerance)};
}

// Worst eigenvalue deviation seen at the end of each loop of the lossy,
// noiseless link, launch scaling removed.
double in_link_deviation(const DiscreteSpectrum& tx, std::span<const Eigenvalue> nominal, const LinkProfile& link) {
  const double amp = launch_amplitude(link, LaunchOptions{});
  // Twice the default window at the same step: max-bandwidth designs spread
  // far enough to touch the default edges.
  auto q = synthesize(tx, TimeGrid::centered(32, 8192));
  for (auto& v : q.samples()) v *= amp;
  const auto rec = run_link(q, link, true).record;
  double worst = 0.0;
  for (std::size_t s = link.spans_per_loop - 1; s < rec.snapshots.size(); s += link.spans_per_loop) {
    auto r = rec.snapshots[s];
    for (auto& v : r.samples()) v /= amp;
    worst = std::max(worst, eigenvalue_deviation(detect_refined(r, 256), nominal));
  }
  return worst;
}

Outcome bandwidth_vs_deviation() {
  const auto g = default_grid();
  std::vector<Eigenvalue> sub;
  for (const auto& l : g)
    if (l.omega() != 0.0) sub.push_back(l);  // omega in {-2,-1,1,2}, sigma in {1,2}
  DesignRules rules;
  rules.grid = TimeGrid::centered(16, 1024);
  rules.z_sampling = uniform_sampling(rules.z_link, 9);
  SearchOptions lo, hi;
  lo.strategy = hi.strategy = SearchStrategy::coordinate;
  hi.maximize = true;
  const auto best = phase_search(sub, rules, lo);
  const auto worst = phase_search(sub, rules, hi);

  LinkProfile link;
  link.amplifier = AmplifierModel::compensating(link.span, -INFINITY);
  const auto dev_best = in_link_deviation(to_transmit_spectrum(midlink_reference(sub, best.phases), rules.z_link), sub, link);
  const auto dev_worst =
      in_link_deviation(to_transmit_spectrum(midlink_reference(sub, worst.phases), rules.z_link), sub, link);
  const double ratio = dev_worst / dev_best;
  return {dev_best < dev_worst && ratio >= kDeviationRatio,
          fmt("8 eigenvalues; min-BW %.3f -> deviation %.4f, max-BW %.3f -> deviation %.4f, ratio %.2f (need >= %.1f)",
              best.max_bw, dev_best, worst.max_bw, dev_worst, ratio, kDeviationRatio)};
}

Outcome midlink_contraction() {
  const auto& book = shared_codebook();
  const double zl = book.rules.z_link;
  const auto zs = uniform_sampling(zl, 21);  // index 10 is z_L / 2
  const auto grid = default_synthesis_grid();
  std::size_t checked = 0, not_minimal = 0, end_ok = 0;
  double worst_end = 0.0, all_on_end = NAN;
  bool all_on_minimal = false;
  for (const auto& e : book.entries) {
    if (e.transmit.empty()) continue;
    std::vector<double> d;
    for (double z : zs) d.push_back(pulse_duration(synthesize(propagate_spectrum(e.transmit, z), grid)).width());
    const double mid = d[10];
    const bool minimal = *std::min_element(d.begin(), d.end()) >= mid;
    const double end = std::abs(d.back() / d.front() - 1.0);
    if (!minimal) ++not_minimal;
    if (end <= kEndDurationRelTolerance) ++end_ok;
    worst_end = std::max(worst_end, end);
    if (std::count(e.pattern.begin(), e.pattern.end(), true) == static_cast<long>(e.pattern.size())) {
      all_on_end = end;
      all_on_minimal = minimal;
    }
    ++checked;
  }
  // Zero-phase all-on design: the symmetric reference.
  const auto full = default_grid();
  const std::vector<double> zero(full.size(), 0.0);
  const auto ref_tx = to_transmit_spectrum(midlink_reference(full, zero), zl);
  std::vector<double> ref;
  for (double z : zs) ref.push_back(pulse_duration(synthesize(propagate_spectrum(ref_tx, z), grid)).width());
  const bool ref_minimal = *std::min_element(ref.begin(), ref.end()) >= ref[10];
  const double ref_end = std::abs(ref.back() / ref.front() - 1.0);
  // Only subsets closed under lambda -> -conj(lambda) give a mid-link field
  // with the conjugate time-reversal symmetry that makes the profile even
  // about z_L/2; the all-on entry is the reference case.
  return {not_minimal == 0 && worst_end <= kEndDurationRelTolerance,
          fmt("%zu entries x 21 z: %zu not minimal at z_L/2; max |T(z_L)/T(0) - 1| %.2e (tol %.0e), %zu within tol; "
              "all-on entry: minimal %s, end %.1e; zero-phase all-on: minimal %s, end %.1e",
              checked, not_minimal, worst_end, kEndDurationRelTolerance, end_ok, all_on_minimal ? "yes" : "no",
              all_on_end, ref_minimal ? "yes" : "no", ref_end)};
}

Outcome search_validation() {
  const auto g = default_grid();
  const auto rules = reduced_rules();
  std::mt19937_64 rng(3);
  double worst = 0.0;
  std::size_t cases = 0;
  for (std::size_t k : {2, 3, 4}) {
    for (int c = 0; c < 5; ++c) {
      std::vector<std::size_t> idx(10);
      std::iota(idx.begin(), idx.end(), 0);
      for (std::size_t i = 0; i < k; ++i) std::swap(idx[i], idx[i + rng() % (10 - i)]);
      std::vector<Eigenvalue> sub;
      for (std::size_t i = 0; i < k; ++i) sub.push_back(g[idx[i]]);
      std::sort(sub.begin(), sub.end());
      SearchOptions ex, co;
      ex.strategy = SearchStrategy::exhaustive;
      co.strategy = SearchStrategy::coordinate;
      worst = std::max(worst, std::abs(phase_search(sub, rules, co).max_bw - phase_search(sub, rules, ex).max_bw));
      ++cases;
    }
  }
  return {worst <= kSearchTolerance,
          fmt("%zu subsets (k=2,3,4): max |coordinate - exhaustive| %.2e (tol %.0e)", cases, worst, kSearchTolerance)};
}

ExperimentConfig ber_config(double nf_db, std::size_t symbols) {
  nlohmann::json j = {{"grid", nlohmann::json::object()},
                      {"rules", nlohmann::json::object()},
                      {"link", {{"nf_db", nf_db}, {"filter_bandwidth_ghz", 50}, {"loops", 28}}},
                      {"frame", {{"symbols", symbols}}},
                      {"seeds", {{"patterns", 1}, {"noise", 2026}, {"sequence", 9}}}};
  return config_from_json(j);
}

Outcome end_to_end_ber() {
  const auto& book = shared_codebook();
  std::vector<std::pair<double, RunReport>> points;
  for (double nf : {5.0, 4.0, 3.0}) points.emplace_back(nf, run_experiment(ber_config(nf, kBerSymbols), book));
  auto again_cfg = ber_config(5.0, kBerSymbols);
  again_cfg.threads = 2;
  const auto again = run_experiment(again_cfg, book);
  const bool deterministic = to_json(again, again_cfg) == to_json(points[0].second, again_cfg);
  bool monotone = true;
  for (std::size_t i = 1; i < points.size(); ++i) monotone &= points[i].second.ber <= points[i - 1].second.ber;
  const auto& r5 = points[0].second;
  const bool in_range = r5.ber >= kBerLow && r5.ber <= kBerHigh;

  // Diagnostic: how much ASE it takes to reach the target decade.
  const auto probe = run_experiment(ber_config(18.0, 500), book);
  std::string d = fmt("NF 5/4/3 dB: BER %.2e/%.2e/%.2e over %zu bits (need [%.0e, %.0e] at 5 dB), OSNR@5dB %.1f dB, "
                      "launch %.2f dBm, monotone %s, deterministic %s; NF 18 dB probe: BER %.2e at OSNR %.1f dB",
                      r5.ber, points[1].second.ber, points[2].second.ber, r5.bits, kBerLow, kBerHigh,
                      r5.osnr_db_analytic, r5.mean_launch_power_dbm, monotone ? "yes" : "no",
                      deterministic ? "yes" : "no", probe.ber, probe.osnr_db_analytic);
  return {in_range && monotone && deterministic, d};
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"End-to-end acceptance criteria"};
  std::vector<int> only, expect_fail;
  app.add_option("--only", only, "Run only these criteria")->delimiter(',');
  app.add_option("--expect-fail", expect_fail, "Criteria known to fail; exit 0 iff exactly these fail")->delimiter(',');
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> all{
      {1, "satsuma-yajima spectra", kSyBudgetS, satsuma_yajima},
      {2, "inverse/forward round trip", kRoundTripBudgetS, round_trip},
      {3, "all-on pulse duration", kDurationBudgetS, all_on_duration},
      {4, "codebook energy identity", kEnergyBudgetS, energy_identity},
      {5, "ideal-channel invariance", kInvarianceBudgetS, ideal_channel},
      {6, "bandwidth vs eigenvalue deviation", kDeviationBudgetS, bandwidth_vs_deviation},
      {7, "mid-link contraction", kContractionBudgetS, midlink_contraction},
      {8, "coordinate vs exhaustive search", kSearchBudgetS, search_validation},
      {9, "end-to-end BER", kBerBudgetS, end_to_end_ber},
  };

  // The codebook shared by criteria 4, 7 and 9 is designed once, untimed.
  const auto wants = [&](int id) { return only.empty() || std::find(only.begin(), only.end(), id) != only.end(); };
  if (wants(4) || wants(7) || wants(9)) shared_codebook();

  std::set<int> failed;
  for (const auto& c : all) {
    if (!wants(c.id)) continue;
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double t = seconds_since(t0);
    const bool in_time = t <= c.budget_s;
    const bool pass = o.pass && in_time;
    if (!pass) failed.insert(c.id);
    std::cout << (pass ? "PASS" : "FAIL") << "  [" << c.id << "] " << c.name << ": " << o.detail
              << fmt(" (%.1f s, budget %.0f s%s)", t, c.budget_s, in_time ? "" : ", OVER BUDGET") << std::endl;
  }

  if (expect_fail.empty()) return failed.empty() ? 0 : 1;
  std::set<int> expected;
  for (int id : expect_fail)
    if (wants(id)) expected.insert(id);
  if (failed == expected) {
    std::cout << "failures match the documented set" << std::endl;
    return 0;
  }
  std::cout << "failures differ from the documented set" << std::endl;
  return 1;
}
