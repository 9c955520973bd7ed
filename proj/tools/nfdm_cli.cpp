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

// nfdm: command-line driver for design, link simulation and detection.
//
// Every subcommand prints a JSON summary on stdout. Failures print
// {"error": kind, "message": ..., "path": ...} on stderr and exit nonzero.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "nfdm/calibration.hpp"
#include "nfdm/errors.hpp"
#include "nfdm/kernels.hpp"
#include "nfdm/pipeline.hpp"

namespace {

using nlohmann::json;

enum ExitCode { kOk = 0, kUsage = 2, kLibrary = 3, kInternal = 4 };

int fail(const std::string& kind, const std::string& message, int code,
         const std::string& path = {}) {
  json e = {{"error", kind}, {"message", message}};
  if (!path.empty()) e["path"] = path;
  std::cerr << e.dump() << '\n';
  return code;
}

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

json summary(const nfdm::RunReport& r) {
  json j = {{"ber", r.ber},
            {"bits", r.bits},
            {"bit_errors", r.bit_errors},
            {"unmatched_detections", r.unmatched_detections},
            {"detection_failures", r.detection_failures},
            {"osnr_db_analytic_12p5ghz", std::isfinite(r.osnr_db_analytic) ? json(r.osnr_db_analytic) : json()},
            {"mean_launch_power_dbm", r.mean_launch_power_dbm}};
  if (r.osnr_db_empirical) j["osnr_db_empirical_12p5ghz"] = *r.osnr_db_empirical;
  return j;
}

// Command-line overrides shared by the config-driven subcommands.
struct Common {
  std::string config;
  std::string codebook;
  std::size_t threads = 0;
};

nfdm::ExperimentConfig load(const Common& c) {
  auto cfg = nfdm::read_config(c.config);
  if (!c.codebook.empty()) cfg.codebook_path = c.codebook;
  if (c.threads > 0) cfg.threads = c.threads;
  return cfg;
}

nfdm::Codebook codebook_for(const nfdm::ExperimentConfig& cfg, bool must_exist) {
  if (must_exist && (!cfg.codebook_path || !std::filesystem::exists(*cfg.codebook_path)))
    throw nfdm::ConfigError("/rules/codebook_path", "codebook file required (run `nfdm design` first)");
  return nfdm::obtain_codebook(cfg);
}

void apply(nfdm::ExperimentConfig& cfg, const std::string& param, double v) {
  if (param == "nf_db") {
    cfg.link.amplifier.nf_db = v;
  } else if (param == "loops") {
    if (v < 0 || v != std::floor(v)) throw nfdm::ConfigError("/link/loops", "sweep value must be a non-negative integer");
    cfg.link.loops = static_cast<int>(v);
  } else if (param == "launch_scale") {
    if (!(v > 0)) throw nfdm::ConfigError("/link/launch_scale", "sweep value must be positive");
    cfg.launch.launch_scale = v;
  } else {
    throw nfdm::ConfigError("--param", "expected nf_db, loops or launch_scale");
  }
}

std::string label(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonlinear frequency-division multiplexing (discrete spectrum OOK) toolkit"};
  app.require_subcommand(1);
  std::string kernels;
  app.add_option("--kernels", kernels, "Kernel set: auto (best for this CPU) or scalar")->check(CLI::IsMember({"auto", "scalar"}));

  Common common;
  const auto add_common = [&](CLI::App* sub, bool codebook) {
    sub->add_option("-c,--config", common.config, "Experiment config JSON")->required()->check(CLI::ExistingFile);
    if (codebook) sub->add_option("--codebook", common.codebook, "Codebook JSON (overrides rules.codebook_path)");
    sub->add_option("--threads", common.threads, "Worker threads (overrides run.threads)");
  };

  auto* cal = app.add_subcommand("calibrate", "Fit the discrete-spectrum evolution constant with the split-step solver");
  double cal_z = 0.2;
  std::size_t cal_samples = 4096;
  cal->add_option("--z", cal_z, "Normalized propagation distance")->check(CLI::PositiveNumber);
  cal->add_option("--samples", cal_samples, "Grid samples")->check(CLI::Range(256, 1 << 16));

  auto* design = app.add_subcommand("design", "Design a balanced codebook from grid + rules");
  add_common(design, false);
  std::string design_out;
  std::size_t design_patterns = 0;
  design->add_option("-o,--out", design_out, "Codebook output path")->required();
  design->add_option("--patterns", design_patterns, "Number of patterns (overrides rules.codebook_patterns)");

  auto* tx = app.add_subcommand("transmit", "Build frames and send them through the link");
  add_common(tx, true);
  std::string tx_out;
  tx->add_option("-o,--out", tx_out, "Directory for received frames")->required();

  auto* det = app.add_subcommand("detect", "Detect eigenvalues in received frames and write a RunReport");
  add_common(det, true);
  std::string det_in, det_out;
  det->add_option("-i,--frames", det_in, "Directory written by `transmit`")->required()->check(CLI::ExistingDirectory);
  det->add_option("-o,--out", det_out, "Report directory")->required();

  auto* run = app.add_subcommand("run", "Design (or load) the codebook, transmit and detect");
  add_common(run, true);
  std::string run_out;
  bool run_snapshots = false;
  run->add_option("-o,--out", run_out, "Report directory (overrides run.output_dir)");
  run->add_flag("--snapshots", run_snapshots, "Export per-span fields of frame 0 and its bandwidth profile");

  auto* sweep = app.add_subcommand("sweep", "Repeat `run` over values of one link parameter");
  add_common(sweep, true);
  std::string sweep_param, sweep_out;
  std::vector<double> sweep_values;
  sweep->add_option("-p,--param", sweep_param, "Parameter")->required()->check(CLI::IsMember({"nf_db", "loops", "launch_scale"}));
  sweep->add_option("-v,--values", sweep_values, "Values")->required()->delimiter(',');
  sweep->add_option("-o,--out", sweep_out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), kUsage);
  }

  try {
    if (kernels == "scalar") setenv("NFDM_KERNELS", kernels.c_str(), 1);

    if (*cal) {
      nfdm::CalibrationOptions opt;
      opt.z = cal_z;
      opt.samples = cal_samples;
      const auto r = nfdm::calibrate_evolution_constant(opt);
      emit({{"estimates", r.estimates},
            {"selected", r.selected},
            {"residual", r.residual},
            {"eigenvalue_drift", r.eigenvalue_drift},
            {"frozen_constant", nfdm::kEvolutionConstant},
            {"consistent", r.selected == nfdm::kEvolutionConstant}});
      return r.selected == nfdm::kEvolutionConstant ? kOk : fail("numeric", "calibrated constant differs from the frozen one", kLibrary);
    }

    if (*design) {
      auto cfg = load(common);
      if (design_patterns > 0) cfg.codebook_patterns = design_patterns;
      cfg.codebook_path.reset();
      const auto book = nfdm::obtain_codebook(cfg);
      nfdm::write_codebook(book, design_out);
      double widest = 0.0, max_bw = 0.0;
      for (const auto& e : book.entries) {
        widest = std::max(widest, e.duration);
        max_bw = std::max(max_bw, e.max_bandwidth);
      }
      emit({{"codebook", design_out}, {"entries", book.entries.size()},
            {"max_duration", widest}, {"max_bandwidth", max_bw}});
      return kOk;
    }

    if (*tx) {
      const auto cfg = load(common);
      const auto book = codebook_for(cfg, true);
      const auto result = nfdm::transmit(cfg, book);
      nfdm::write_frames(result, cfg, tx_out);
      emit({{"frames", result.received.size()},
            {"directory", tx_out},
            {"mean_launch_power_w", result.mean_launch_power_w}});
      return kOk;
    }

    if (*det) {
      auto cfg = load(common);
      const auto book = codebook_for(cfg, true);
      const auto frames = nfdm::read_frames(det_in, cfg);
      const auto report = nfdm::detect(cfg, book, frames);
      nfdm::write_report(report, cfg, det_out);
      emit(summary(report));
      return kOk;
    }

    if (*run) {
      auto cfg = load(common);
      if (!run_out.empty()) cfg.output_dir = run_out;
      if (run_snapshots) cfg.snapshots = true;
      const auto book = codebook_for(cfg, false);
      const auto report = nfdm::run_experiment(cfg, book);
      emit(summary(report));
      return kOk;
    }

    if (*sweep) {
      const auto base = load(common);
      const auto book = codebook_for(base, false);
      std::filesystem::create_directories(sweep_out);
      std::ofstream csv(std::filesystem::path(sweep_out) / "sweep.csv");
      if (!csv) throw nfdm::IoError("cannot write sweep.csv");
      csv << sweep_param << ",ber,bit_errors,bits,osnr_db_analytic,mean_launch_power_dbm\n" << std::setprecision(10);
      json points = json::array();
      for (double v : sweep_values) {
        auto cfg = base;
        apply(cfg, sweep_param, v);
        cfg.output_dir = std::filesystem::path(sweep_out) / (sweep_param + "_" + label(v));
        const auto r = nfdm::run_experiment(cfg, book);
        csv << v << ',' << r.ber << ',' << r.bit_errors << ',' << r.bits << ',' << r.osnr_db_analytic << ','
            << r.mean_launch_power_dbm << '\n';
        auto p = summary(r);
        p[sweep_param] = v;
        points.push_back(p);
      }
      emit({{"param", sweep_param}, {"points", points}});
      return kOk;
    }
  } catch (const nfdm::ConfigError& e) {
    return fail(e.kind(), e.what(), kUsage, e.path());
  } catch (const nfdm::Error& e) {
    return fail(e.kind(), e.what(), kLibrary);
  } catch (const std::filesystem::filesystem_error& e) {
    return fail("io", e.what(), kLibrary);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), kInternal);
  }
  return kOk;
}
