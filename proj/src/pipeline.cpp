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

#include "nfdm/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <nlohmann/json.hpp>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "nfdm/calibration.hpp"
#include "nfdm/darboux.hpp"
#include "nfdm/errors.hpp"
#include "nfdm/fft.hpp"
#include "nfdm/metrics.hpp"

namespace nfdm {

void FrameSpec::validate() const {
  if (!(symbol_interval > 0.0)) throw DomainError("FrameSpec: symbol_interval must be positive");
  if (samples_per_symbol < 16) throw DomainError("FrameSpec: samples_per_symbol must be >= 16");
  if (symbols_per_frame < 1) throw DomainError("FrameSpec: symbols_per_frame must be >= 1");
}

TimeGrid FrameSpec::grid() const {
  const std::size_t count = samples_per_symbol * symbols_per_frame;
  return {-0.5 * symbol_interval, symbol_interval / static_cast<double>(samples_per_symbol), count};
}

Frame build_frame(const Codebook& codebook, const FrameSpec& spec) {
  spec.validate();
  if (spec.pattern_sequence.size() != spec.symbols_per_frame)
    throw FrameError("build_frame: pattern_sequence must hold symbols_per_frame patterns");
  const std::size_t ns = spec.samples_per_symbol;
  const auto grid = spec.grid();
  std::vector<Complex> field(grid.count, Complex(0.0));
  // Three slots centred on the symbol, same spacing as the frame.
  const TimeGrid local{-1.5 * spec.symbol_interval, grid.dt, 3 * ns};

  Frame frame;
  for (std::size_t s = 0; s < spec.symbols_per_frame; ++s) {
    const auto& pattern = spec.pattern_sequence[s];
    const auto* entry = codebook.find(pattern);
    if (entry == nullptr)
      throw FrameError("build_frame: pattern " + to_string(pattern) + " is not in the codebook");
    if (entry->duration > spec.symbol_interval) {
      std::ostringstream os;
      os << "build_frame: pattern " << to_string(pattern) << " lasts " << entry->duration
         << ", longer than the symbol interval " << spec.symbol_interval;
      throw FrameError(os.str());
    }
    frame.slot_start.push_back(s * ns);
    frame.patterns.push_back(pattern);
    if (entry->transmit.size() == 0) continue;
    const auto pulse = synthesize(entry->transmit, local);
    for (std::size_t i = 0; i < pulse.size(); ++i) {
      // local index i sits at frame index (s - 1) * ns + i, wrapped.
      const std::size_t at = (s * ns + grid.count + i - ns) % grid.count;
      field[at] += pulse[i];
    }
  }
  frame.field = SampledPulse(std::move(field), grid.t_start, grid.dt);
  return frame;
}

std::vector<SymbolResult> receive_frame(const SampledPulse& frame, const FrameSpec& spec,
                                        std::span<const BitPattern> reference,
                                        std::span<const Eigenvalue> nominal,
                                        const ReceiverOptions& options, std::size_t first_index) {
  const std::size_t ns = spec.samples_per_symbol;
  const std::size_t slots = frame.size() / ns;
  if (slots * ns != frame.size() || slots != reference.size())
    throw DomainError("receive_frame: frame length does not match the slot layout");
  std::vector<SymbolResult> out;
  for (std::size_t s = 0; s < slots; ++s) {
    SymbolResult r;
    r.index = first_index + s;
    r.reference = reference[s];
    const auto slot = frame.slice(s * ns, ns);
    try {
      r.detected = detect_eigenvalues(slot, options.detect);
      auto decision = ook_decide(r.detected, nominal, options.radius);
      r.decided = std::move(decision.bits);
      r.unmatched = decision.unmatched_detections;
    } catch (const Error&) {
      r.detected.clear();
      r.decided.assign(nominal.size(), false);
      r.detection_failed = true;
    }
    out.push_back(std::move(r));
  }
  return out;
}

double launch_amplitude(const LinkProfile& link, const LaunchOptions& launch) {
  const double k = launch.path_average ? path_average_factor(link.span) : 1.0;
  return std::sqrt(k) * launch.launch_scale;
}

void tally(RunReport& report, std::size_t grid_size) {
  report.bits = 0;
  report.bit_errors = 0;
  report.unmatched_detections = 0;
  report.detection_failures = 0;
  report.per_eigenvalue_errors.assign(grid_size, 0);
  for (const auto& s : report.symbols) {
    for (std::size_t i = 0; i < grid_size; ++i) {
      ++report.bits;
      if (s.decided[i] != s.reference[i]) {
        ++report.bit_errors;
        ++report.per_eigenvalue_errors[i];
      }
    }
    report.unmatched_detections += s.unmatched;
    report.detection_failures += s.detection_failed ? 1 : 0;
  }
  report.ber = report.bits == 0 ? 0.0
                                : static_cast<double>(report.bit_errors) /
                                      static_cast<double>(report.bits);
}

namespace {

constexpr double kReferenceBandwidthHz = 12.5e9;  // 0.1 nm at 1550 nm

double to_dbm(double watts) { return 10.0 * std::log10(watts / 1e-3); }

}  // namespace

double analytic_osnr_db(const LinkProfile& link, double mean_power_w) {
  const double ase = static_cast<double>(link.span_count()) * link.amplifier.noise_psd() *
                     kReferenceBandwidthHz;
  if (ase <= 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(mean_power_w / ase);
}

std::vector<Eigenvalue> ExperimentConfig::grid() const {
  return make_grid(omegas, sigmas);
}

Codebook obtain_codebook(const ExperimentConfig& config) {
  if (config.codebook_path && std::filesystem::exists(*config.codebook_path))
    return read_codebook(*config.codebook_path);
  const auto grid = config.grid();
  const auto patterns = balanced_patterns(grid.size(), config.codebook_patterns, config.pattern_seed);
  auto book = build_codebook(grid, patterns, config.rules, config.search, config.pattern_seed);
  if (config.codebook_path) write_codebook(book, *config.codebook_path);
  return book;
}

std::vector<BitPattern> symbol_sequence(const Codebook& codebook, std::size_t symbols,
                                        std::uint64_t seed) {
  if (codebook.entries.empty()) throw DomainError("symbol_sequence: empty codebook");
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(codebook.entries.size());
  std::vector<BitPattern> out;
  while (out.size() < symbols) {
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    for (std::size_t i = order.size(); i-- > 1;) std::swap(order[i], order[rng() % (i + 1)]);
    for (std::size_t i = 0; i < order.size() && out.size() < symbols; ++i)
      out.push_back(codebook.entries[order[i]].pattern);
  }
  return out;
}

TransmitResult transmit(const ExperimentConfig& config, const Codebook& codebook) {
  config.frame.validate();
  LinkProfile link = config.link;
  link.amplifier.noise_seed = config.noise_seed;
  link.validate();
  const auto sequence = symbol_sequence(codebook, config.symbols, config.sequence_seed);
  const std::size_t per = config.frame.symbols_per_frame;
  const std::size_t frames = (sequence.size() + per - 1) / per;
  const double amp = launch_amplitude(link, config.launch);

  TransmitResult tx;
  tx.frames.resize(frames);
  tx.received.resize(frames);
  std::vector<double> energy(frames, 0.0), duration(frames, 0.0);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_lock;

  const auto work = [&] {
    for (std::size_t f = next++; f < frames; f = next++) {
      try {
        FrameSpec spec = config.frame;
        const std::size_t first = f * per;
        const std::size_t count = std::min(per, sequence.size() - first);
        spec.symbols_per_frame = count;
        spec.pattern_sequence.assign(sequence.begin() + static_cast<std::ptrdiff_t>(first),
                                     sequence.begin() + static_cast<std::ptrdiff_t>(first + count));
        tx.frames[f] = build_frame(codebook, spec);
        SampledPulse launched = tx.frames[f].field;
        for (auto& v : launched.samples()) v *= amp;
        auto out = run_link(launched, link, config.snapshots && f == 0, true, f);
        for (auto& v : out.output.samples()) v /= amp;
        tx.received[f] = std::move(out.output);
        if (config.snapshots && f == 0) tx.record = std::move(out.record);
        energy[f] = tx.frames[f].field.energy();
        duration[f] = tx.frames[f].field.dt() * static_cast<double>(tx.frames[f].field.size());
      } catch (...) {
        std::lock_guard lock(failure_lock);
        if (!failure) failure = std::current_exception();
        next = frames;
      }
    }
  };
  const std::size_t workers = std::max<std::size_t>(1, std::min(config.threads, frames));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  double e = 0.0, t = 0.0;
  for (std::size_t f = 0; f < frames; ++f) {
    e += energy[f];
    t += duration[f];
  }
  tx.mean_launch_power_w = t > 0.0 ? e / t * link.normalization.p0() * amp * amp : 0.0;
  return tx;
}

RunReport detect(const ExperimentConfig& config, const Codebook& codebook,
                 const TransmitResult& tx) {
  const auto nominal = codebook.grid;
  const std::size_t frames = tx.received.size();
  std::vector<std::vector<SymbolResult>> rows(frames);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_lock;
  std::vector<std::size_t> first(frames, 0);
  for (std::size_t f = 1; f < frames; ++f) first[f] = first[f - 1] + tx.frames[f - 1].patterns.size();

  const auto work = [&] {
    for (std::size_t f = next++; f < frames; f = next++) {
      try {
        rows[f] = receive_frame(tx.received[f], config.frame, tx.frames[f].patterns, nominal,
                                config.receiver, first[f]);
      } catch (...) {
        std::lock_guard lock(failure_lock);
        if (!failure) failure = std::current_exception();
        next = frames;
      }
    }
  };
  const std::size_t workers = std::max<std::size_t>(1, std::min(config.threads, frames));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  RunReport report;
  for (auto& r : rows)
    for (auto& s : r) report.symbols.push_back(std::move(s));
  tally(report, nominal.size());

  LinkProfile link = config.link;
  const double amp = launch_amplitude(link, config.launch);
  report.path_average_factor = config.launch.path_average ? path_average_factor(link.span) : 1.0;
  report.mean_launch_power_dbm = to_dbm(tx.mean_launch_power_w);
  report.osnr_db_analytic = analytic_osnr_db(link, tx.mean_launch_power_w);

  // Empirical OSNR from the noise left in empty slots.
  double noise_sum = 0.0;
  std::size_t noise_samples = 0;
  for (std::size_t f = 0; f < frames; ++f) {
    const std::size_t ns = config.frame.samples_per_symbol;
    for (std::size_t s = 0; s < tx.frames[f].patterns.size(); ++s) {
      const auto& p = tx.frames[f].patterns[s];
      if (std::any_of(p.begin(), p.end(), [](bool b) { return b; })) continue;
      for (std::size_t i = 0; i < ns; ++i) noise_sum += std::norm(tx.received[f][s * ns + i]);
      noise_samples += ns;
    }
  }
  if (noise_samples > 0 && link.amplifier.adds_noise() && frames > 0) {
    const double per_sample = noise_sum / static_cast<double>(noise_samples);
    const auto grid = tx.received[0].grid();
    // Bandwidth the in-band noise occupies on this grid.
    const double b_eff = noise_variance_per_sample(link.amplifier, link.normalization, grid) *
                         link.normalization.p0() / link.amplifier.noise_psd();
    const double rho = per_sample * link.normalization.p0() * amp * amp / b_eff;
    report.osnr_db_empirical =
        10.0 * std::log10(tx.mean_launch_power_w / (rho * kReferenceBandwidthHz));
  }
  return report;
}

nlohmann::json to_json(const RunReport& report, const ExperimentConfig& config) {
  nlohmann::json symbols = nlohmann::json::array();
  for (const auto& s : report.symbols) {
    nlohmann::json det = nlohmann::json::array();
    for (const auto& l : s.detected) det.push_back({l.omega(), l.sigma()});
    symbols.push_back({{"index", s.index},
                       {"reference", to_string(s.reference)},
                       {"decided", to_string(s.decided)},
                       {"detected", det},
                       {"unmatched", s.unmatched},
                       {"detection_failed", s.detection_failed}});
  }
  const auto& link = config.link;
  nlohmann::json osnr_emp = nullptr;
  if (report.osnr_db_empirical) osnr_emp = *report.osnr_db_empirical;
  nlohmann::json osnr_an = nullptr;
  if (std::isfinite(report.osnr_db_analytic)) osnr_an = report.osnr_db_analytic;
  return {{"ber", report.ber},
          {"bits", report.bits},
          {"bit_errors", report.bit_errors},
          {"per_eigenvalue_errors", report.per_eigenvalue_errors},
          {"unmatched_detections", report.unmatched_detections},
          {"detection_failures", report.detection_failures},
          {"osnr_db_analytic_12p5ghz", osnr_an},
          {"osnr_db_empirical_12p5ghz", osnr_emp},
          {"mean_launch_power_dbm", report.mean_launch_power_dbm},
          {"path_average_factor", report.path_average_factor},
          {"evolution_constant", kEvolutionConstant},
          {"link",
           {{"total_length_km", link.total_length_km()},
            {"spans", link.span_count()},
            {"loops", link.loops},
            {"span_length_km", link.span.length_km},
            {"alpha_db_per_km", link.span.alpha_db_per_km},
            {"gain_db", link.amplifier.gain_db},
            {"nf_db", std::isfinite(link.amplifier.nf_db) ? nlohmann::json(link.amplifier.nf_db)
                                                          : nlohmann::json(nullptr)},
            {"filter_bandwidth_ghz", link.amplifier.filter_bandwidth_hz * 1e-9},
            {"dz_km", link.dz_km},
            {"t0_ps", link.normalization.t0() * 1e12},
            {"p0_mw", link.normalization.p0() * 1e3},
            {"z0_km", link.normalization.z0() * 1e-3}}},
          {"symbols", symbols}};
}

void write_scatter_csv(const RunReport& report, const std::filesystem::path& path) {
  std::ofstream f(path);
  if (!f) throw IoError("write_scatter_csv: cannot open " + path.string());
  f << "symbol_index,re_lambda,im_lambda\n" << std::setprecision(17);
  for (const auto& s : report.symbols)
    for (const auto& l : s.detected) f << s.index << ',' << l.omega() << ',' << l.sigma() << '\n';
}

void write_report(const RunReport& report, const ExperimentConfig& config,
                  const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("write_report: cannot create " + dir.string());
  std::ofstream f(dir / "report.json");
  if (!f) throw IoError("write_report: cannot open report.json");
  f << to_json(report, config).dump(1) << '\n';
  write_scatter_csv(report, dir / "scatter.csv");
}

RunReport run_experiment(const ExperimentConfig& config, const Codebook& codebook) {
  const auto tx = transmit(config, codebook);
  auto report = detect(config, codebook, tx);
  if (config.output_dir) {
    write_report(report, config, *config.output_dir);
    if (tx.record) {
      export_snapshots(*tx.record, *config.output_dir / "snapshots");
      BandwidthProfile profile;
      profile.distances.push_back(0.0);
      profile.bw.push_back(bandwidth99(tx.frames[0].field));
      for (std::size_t i = 0; i < tx.record->snapshots.size(); ++i) {
        profile.distances.push_back(
            config.link.normalization.to_normalized_distance(tx.record->distance_km[i] * 1e3));
        profile.bw.push_back(bandwidth99(tx.record->snapshots[i]));
      }
      write_bandwidth_csv(profile, *config.output_dir / "bandwidth_profile.csv");
    }
  }
  return report;
}

void write_frames(const TransmitResult& tx, const ExperimentConfig& config,
                  const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("write_frames: cannot create " + dir.string());
  nlohmann::json frames = nlohmann::json::array();
  for (std::size_t f = 0; f < tx.received.size(); ++f) {
    std::ostringstream name;
    name << "frame_" << std::setw(4) << std::setfill('0') << f;
    write_pulse(tx.received[f], dir / name.str());
    std::vector<std::string> patterns;
    for (const auto& p : tx.frames[f].patterns) patterns.push_back(to_string(p));
    frames.push_back({{"file", name.str()}, {"patterns", patterns}});
  }
  const nlohmann::json index = {{"symbol_interval", config.frame.symbol_interval},
                                {"samples_per_symbol", config.frame.samples_per_symbol},
                                {"mean_launch_power_w", tx.mean_launch_power_w},
                                {"frames", frames}};
  std::ofstream out(dir / "frames.json");
  if (!out) throw IoError("write_frames: cannot write frames.json");
  out << index.dump(1) << '\n';
}

TransmitResult read_frames(const std::filesystem::path& dir, ExperimentConfig& config) {
  std::ifstream in(dir / "frames.json");
  if (!in) throw IoError("read_frames: cannot open " + (dir / "frames.json").string());
  nlohmann::json index;
  try {
    in >> index;
    config.frame.symbol_interval = index.at("symbol_interval").get<double>();
    config.frame.samples_per_symbol = index.at("samples_per_symbol").get<std::size_t>();
    TransmitResult tx;
    tx.mean_launch_power_w = index.at("mean_launch_power_w").get<double>();
    for (const auto& jf : index.at("frames")) {
      Frame frame;
      for (const auto& p : jf.at("patterns")) frame.patterns.push_back(pattern_from_string(p.get<std::string>()));
      for (std::size_t s = 0; s < frame.patterns.size(); ++s)
        frame.slot_start.push_back(s * config.frame.samples_per_symbol);
      tx.received.push_back(read_pulse(dir / jf.at("file").get<std::string>()));
      tx.frames.push_back(std::move(frame));
    }
    return tx;
  } catch (const nlohmann::json::exception& ex) {
    throw IoError("read_frames: malformed frames.json: " + std::string(ex.what()));
  }
}

}  // namespace nfdm
