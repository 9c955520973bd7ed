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

#include <cmath>
#include <fstream>
#include <limits>
#include <nlohmann/json.hpp>
#include <numbers>
#include <set>

#include "nfdm/errors.hpp"
#include "nfdm/pipeline.hpp"

namespace nfdm {
namespace {

using nlohmann::json;

// Typed access to one JSON object; every failure names the field path and
// keys nobody asked for are rejected when the section is closed.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "/" : path_, "expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key) && !j_.at(key).is_null(); }
  std::string at(const std::string& key) const { return path_ + "/" + key; }

  double number(const std::string& key, std::optional<double> fallback = {}) {
    seen_.insert(key);
    if (!j_.contains(key)) {
      if (fallback) return *fallback;
      throw ConfigError(at(key), "required field missing");
    }
    if (!j_.at(key).is_number()) throw ConfigError(at(key), "expected a number");
    const double v = j_.at(key).get<double>();
    if (!std::isfinite(v)) throw ConfigError(at(key), "must be finite");
    return v;
  }

  double positive(const std::string& key, std::optional<double> fallback = {}) {
    const double v = number(key, fallback);
    if (!(v > 0.0)) throw ConfigError(at(key), "must be positive");
    return v;
  }

  std::uint64_t count(const std::string& key, std::optional<std::uint64_t> fallback = {}) {
    seen_.insert(key);
    if (!j_.contains(key)) {
      if (fallback) return *fallback;
      throw ConfigError(at(key), "required field missing");
    }
    const auto& v = j_.at(key);
    if (!v.is_number_integer() || (v.is_number_integer() && v.get<long long>() < 0))
      throw ConfigError(at(key), "expected a non-negative integer");
    return v.get<std::uint64_t>();
  }

  bool flag(const std::string& key, bool fallback) {
    seen_.insert(key);
    if (!j_.contains(key)) return fallback;
    if (!j_.at(key).is_boolean()) throw ConfigError(at(key), "expected true or false");
    return j_.at(key).get<bool>();
  }

  std::string text(const std::string& key, std::optional<std::string> fallback = {}) {
    seen_.insert(key);
    if (!j_.contains(key)) {
      if (fallback) return *fallback;
      throw ConfigError(at(key), "required field missing");
    }
    if (!j_.at(key).is_string()) throw ConfigError(at(key), "expected a string");
    return j_.at(key).get<std::string>();
  }

  std::vector<double> numbers(const std::string& key, std::optional<std::vector<double>> fallback = {}) {
    seen_.insert(key);
    if (!j_.contains(key)) {
      if (fallback) return *fallback;
      throw ConfigError(at(key), "required field missing");
    }
    const auto& v = j_.at(key);
    if (!v.is_array() || v.empty()) throw ConfigError(at(key), "expected a non-empty array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) throw ConfigError(at(key) + "/" + std::to_string(i), "expected a number");
      out.push_back(v[i].get<double>());
    }
    return out;
  }

  /// Null or absent means "not given".
  bool is_null(const std::string& key) {
    seen_.insert(key);
    return !j_.contains(key) || j_.at(key).is_null();
  }

  Section child(const std::string& key) {
    seen_.insert(key);
    if (!j_.contains(key)) throw ConfigError(at(key), "required section missing");
    return Section(j_.at(key), at(key));
  }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  void close() const {
    for (const auto& [key, _] : j_.items())
      if (!seen_.count(key)) throw ConfigError(at(key), "unknown field");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

}  // namespace

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  Section root(j, "");

  {
    auto s = root.child("grid");
    c.omegas = s.numbers("omegas", c.omegas);
    c.sigmas = s.numbers("sigmas", c.sigmas);
    for (std::size_t i = 0; i < c.sigmas.size(); ++i)
      if (!(c.sigmas[i] > 0.0))
        throw ConfigError(s.at("sigmas") + "/" + std::to_string(i), "sigma must be positive");
    s.close();
  }

  {
    auto s = root.child("link");
    const double t0_ps = s.positive("t0_ps", 2000.0 / 12.0);
    FiberSpan& span = c.link.span;
    span.length_km = s.positive("span_length_km", span.length_km);
    span.beta2_ps2_per_km = s.number("beta2_ps2_per_km", span.beta2_ps2_per_km);
    if (!(span.beta2_ps2_per_km < 0.0))
      throw ConfigError(s.at("beta2_ps2_per_km"), "must be negative (anomalous dispersion)");
    span.gamma_per_w_km = s.positive("gamma_per_w_km", span.gamma_per_w_km);
    span.alpha_db_per_km = s.number("alpha_db_per_km", span.alpha_db_per_km);
    if (span.alpha_db_per_km < 0.0) throw ConfigError(s.at("alpha_db_per_km"), "must be >= 0");
    c.link.spans_per_loop = static_cast<int>(s.count("spans_per_loop", 3));
    if (c.link.spans_per_loop < 1) throw ConfigError(s.at("spans_per_loop"), "must be >= 1");
    c.link.loops = static_cast<int>(s.count("loops", 28));
    c.link.dz_km = s.positive("dz_km", 0.1);
    if (c.link.dz_km > span.length_km)
      throw ConfigError(s.at("dz_km"), "must not exceed span_length_km");
    c.link.normalization =
        NormalizationMap::from_fiber_units(t0_ps, span.beta2_ps2_per_km, span.gamma_per_w_km);

    auto& amp = c.link.amplifier;
    amp.gain_db = s.is_null("gain_db") ? span.loss_db() : s.number("gain_db");
    if (amp.gain_db < 0.0) throw ConfigError(s.at("gain_db"), "must be >= 0");
    amp.nf_db = s.is_null("nf_db") ? -std::numeric_limits<double>::infinity() : s.number("nf_db");
    amp.center_frequency_hz = s.positive("center_frequency_thz", 193.4) * 1e12;
    amp.filter_bandwidth_hz = s.positive("filter_bandwidth_ghz", 50.0) * 1e9;
    c.launch.path_average = s.flag("path_average", true);
    c.launch.launch_scale = s.positive("launch_scale", 1.0);
    c.link_km = s.positive("design_length_km", 2000.0);
    s.close();
  }

  {
    auto s = root.child("rules");
    c.rules.z_link = c.link.normalization.to_normalized_distance(c.link_km * 1e3);
    c.rules.phase_step = s.positive("phase_step_rad", std::numbers::pi / 4.0);
    const double levels = 2.0 * std::numbers::pi / c.rules.phase_step;
    if (std::abs(levels - std::round(levels)) > 1e-9)
      throw ConfigError(s.at("phase_step_rad"), "must divide 2*pi");
    c.rules.epsilon_duration = s.positive("epsilon_duration", 0.01);
    c.rules.energy_fraction = s.positive("energy_fraction", 0.99);
    if (c.rules.energy_fraction >= 1.0) throw ConfigError(s.at("energy_fraction"), "must be < 1");
    const std::string mode = s.text("z_sampling", "spans");
    if (mode == "spans") {
      c.rules.z_sampling = span_sampling(
          c.rules.z_link, c.link.normalization.to_normalized_distance(c.link.span.length_km * 1e3));
    } else if (mode == "uniform") {
      const auto n = s.count("z_samples", 9);
      if (n < 2) throw ConfigError(s.at("z_samples"), "must be >= 2");
      c.rules.z_sampling = uniform_sampling(c.rules.z_link, n);
    } else {
      throw ConfigError(s.at("z_sampling"), "expected \"spans\" or \"uniform\"");
    }
    const double hw = s.positive("grid_half_width", 16.0);
    const auto samples = s.count("grid_samples", 1024);
    if (samples < 64) throw ConfigError(s.at("grid_samples"), "must be >= 64");
    c.rules.grid = TimeGrid::centered(hw, samples);
    try {
      c.search.strategy = strategy_from_string(s.text("strategy", "auto"));
    } catch (const DomainError& e) {
      throw ConfigError(s.at("strategy"), e.what());
    }
    c.search.passes = static_cast<int>(s.count("passes", 3));
    c.search.starts = static_cast<int>(s.count("starts", 4));
    if (c.search.passes < 1) throw ConfigError(s.at("passes"), "must be >= 1");
    if (c.search.starts < 1) throw ConfigError(s.at("starts"), "must be >= 1");
    c.search.pair_moves = s.flag("pair_moves", true);
    c.codebook_patterns = s.count("codebook_patterns", 256);
    if (c.codebook_patterns < 2 || c.codebook_patterns % 2 != 0 ||
        c.codebook_patterns > (std::uint64_t{1} << (c.omegas.size() * c.sigmas.size())))
      throw ConfigError(s.at("codebook_patterns"), "must be even, >= 2 and at most 2^grid_size");
    if (!s.is_null("codebook_path")) c.codebook_path = s.text("codebook_path");
    s.close();
  }

  {
    auto s = root.child("frame");
    c.frame.symbol_interval = s.positive("symbol_interval", 12.0);
    c.frame.samples_per_symbol = s.count("samples_per_symbol", 256);
    if (c.frame.samples_per_symbol < 16) throw ConfigError(s.at("samples_per_symbol"), "must be >= 16");
    c.frame.symbols_per_frame = s.count("symbols_per_frame", 16);
    if (c.frame.symbols_per_frame < 1) throw ConfigError(s.at("symbols_per_frame"), "must be >= 1");
    c.symbols = s.count("symbols", 2000);
    if (c.symbols < 1) throw ConfigError(s.at("symbols"), "must be >= 1");
    c.receiver.radius = s.positive("radius", 0.5);
    c.receiver.detect.harmonics = static_cast<int>(s.count("harmonics", 48));
    if (c.receiver.detect.harmonics < 16) throw ConfigError(s.at("harmonics"), "must be >= 16");
    if (2 * static_cast<std::size_t>(c.receiver.detect.harmonics) >= c.frame.samples_per_symbol)
      throw ConfigError(s.at("harmonics"), "must be below samples_per_symbol / 2");
    c.receiver.detect.im_threshold = s.number("im_threshold", 0.15);
    c.receiver.detect.refine = s.flag("refine", false);
    c.receiver.detect.check_window = false;
    s.close();
  }

  {
    auto s = root.child("seeds");
    c.pattern_seed = s.count("patterns", 1);
    c.noise_seed = s.count("noise", 1);
    c.sequence_seed = s.count("sequence", 1);
    c.frame.seed = c.sequence_seed;
    s.close();
  }

  if (root.has("run")) {
    auto s = root.child("run");
    c.threads = s.count("threads", 1);
    if (c.threads < 1) throw ConfigError(s.at("threads"), "must be >= 1");
    if (!s.is_null("output_dir")) c.output_dir = s.text("output_dir");
    c.snapshots = s.flag("snapshots", false);
    s.close();
  } else {
    root.is_null("run");
  }
  root.close();

  try {
    c.link.validate();
    c.rules.validate();
  } catch (const DomainError& e) {
    throw ConfigError("/", e.what());
  }
  return c;
}

ExperimentConfig read_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open config " + path.string());
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw ConfigError("/", std::string("not valid JSON: ") + e.what());
  }
  return config_from_json(j);
}

json to_json(const ExperimentConfig& c) {
  const auto& span = c.link.span;
  const auto& amp = c.link.amplifier;
  json run = {{"threads", c.threads}, {"snapshots", c.snapshots}};
  if (c.output_dir) run["output_dir"] = c.output_dir->string();
  json rules = {{"phase_step_rad", c.rules.phase_step},
                {"epsilon_duration", c.rules.epsilon_duration},
                {"energy_fraction", c.rules.energy_fraction},
                {"z_sampling", "uniform"},
                {"z_samples", c.rules.z_sampling.size()},
                {"grid_half_width", -c.rules.grid.t_start},
                {"grid_samples", c.rules.grid.count},
                {"strategy", to_string(c.search.strategy)},
                {"passes", c.search.passes},
                {"starts", c.search.starts},
                {"pair_moves", c.search.pair_moves},
                {"codebook_patterns", c.codebook_patterns}};
  if (c.codebook_path) rules["codebook_path"] = c.codebook_path->string();
  return {{"grid", {{"omegas", c.omegas}, {"sigmas", c.sigmas}}},
          {"rules", rules},
          {"link",
           {{"t0_ps", c.link.normalization.t0() * 1e12},
            {"span_length_km", span.length_km},
            {"beta2_ps2_per_km", span.beta2_ps2_per_km},
            {"gamma_per_w_km", span.gamma_per_w_km},
            {"alpha_db_per_km", span.alpha_db_per_km},
            {"spans_per_loop", c.link.spans_per_loop},
            {"loops", c.link.loops},
            {"dz_km", c.link.dz_km},
            {"gain_db", amp.gain_db},
            {"nf_db", std::isfinite(amp.nf_db) ? json(amp.nf_db) : json(nullptr)},
            {"center_frequency_thz", amp.center_frequency_hz * 1e-12},
            {"filter_bandwidth_ghz", amp.filter_bandwidth_hz * 1e-9},
            {"path_average", c.launch.path_average},
            {"launch_scale", c.launch.launch_scale},
            {"design_length_km", c.link_km}}},
          {"frame",
           {{"symbol_interval", c.frame.symbol_interval},
            {"samples_per_symbol", c.frame.samples_per_symbol},
            {"symbols_per_frame", c.frame.symbols_per_frame},
            {"symbols", c.symbols},
            {"radius", c.receiver.radius},
            {"harmonics", c.receiver.detect.harmonics},
            {"im_threshold", c.receiver.detect.im_threshold},
            {"refine", c.receiver.detect.refine}}},
          {"seeds", {{"patterns", c.pattern_seed}, {"noise", c.noise_seed}, {"sequence", c.sequence_seed}}},
          {"run", run}};
}

}  // namespace nfdm
