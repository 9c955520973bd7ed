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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "nfdm/designer.hpp"
#include "nfdm/fc_nft.hpp"
#include "nfdm/ssfm.hpp"

namespace nfdm {

struct FrameSpec {
  double symbol_interval = 12.0;  ///< normalized time per slot (2 ns at T0 = 2/12 ns)
  std::size_t samples_per_symbol = 256;
  std::size_t symbols_per_frame = 16;
  std::vector<BitPattern> pattern_sequence;
  std::uint64_t seed = 0;

  void validate() const;
  TimeGrid grid() const;
};

/// Frame field plus the first sample of every slot.
struct Frame {
  SampledPulse field;
  std::vector<std::size_t> slot_start;
  std::vector<BitPattern> patterns;
};

/// Sums the per-symbol syntheses, each centred in its slot and evaluated over
/// three slots so the tails land in the neighbours; the frame is periodic and
/// tails leaving one end re-enter at the other.
/// Throws FrameError when a pattern is missing from the codebook or its
/// designed duration exceeds the symbol interval.
Frame build_frame(const Codebook& codebook, const FrameSpec& spec);

struct SymbolResult {
  std::size_t index = 0;
  BitPattern reference;
  BitPattern decided;
  std::vector<Eigenvalue> detected;
  std::size_t unmatched = 0;
  bool detection_failed = false;
};

struct ReceiverOptions {
  DetectOptions detect{.harmonics = 48, .check_window = false};
  double radius = 0.5;
};

/// Cuts the frame into slots and runs FC detection and ook_decide on each.
/// A slot whose detection throws decides all zeros and is flagged.
std::vector<SymbolResult> receive_frame(const SampledPulse& frame, const FrameSpec& spec,
                                        std::span<const BitPattern> reference,
                                        std::span<const Eigenvalue> nominal,
                                        const ReceiverOptions& options,
                                        std::size_t first_index = 0);

struct LaunchOptions {
  bool path_average = true;
  /// Extra amplitude factor on top of the path-average one.
  double launch_scale = 1.0;
};

/// Amplitude factor applied at the transmitter and removed at the receiver.
double launch_amplitude(const LinkProfile& link, const LaunchOptions& launch);

struct RunReport {
  std::vector<SymbolResult> symbols;
  std::size_t bits = 0;
  std::size_t bit_errors = 0;
  std::vector<std::size_t> per_eigenvalue_errors;
  std::size_t unmatched_detections = 0;
  std::size_t detection_failures = 0;
  double ber = 0.0;
  double osnr_db_analytic = 0.0;
  std::optional<double> osnr_db_empirical;
  double mean_launch_power_dbm = 0.0;
  double path_average_factor = 1.0;
};

/// Fills the aggregate fields of `report` from `report.symbols`.
void tally(RunReport& report, std::size_t grid_size);

/// Analytic OSNR in a 12.5 GHz reference bandwidth for a mean signal power.
double analytic_osnr_db(const LinkProfile& link, double mean_power_w);

struct ExperimentConfig {
  std::vector<double> omegas{-2, -1, 0, 1, 2};
  std::vector<double> sigmas{1, 2};
  double link_km = 2000.0;
  DesignRules rules;
  SearchOptions search;
  std::size_t codebook_patterns = 256;
  std::optional<std::filesystem::path> codebook_path;
  LinkProfile link;
  LaunchOptions launch;
  FrameSpec frame;
  std::size_t symbols = 2000;
  ReceiverOptions receiver;
  std::uint64_t pattern_seed = 1;
  std::uint64_t noise_seed = 1;
  std::uint64_t sequence_seed = 1;
  std::size_t threads = 1;
  std::optional<std::filesystem::path> output_dir;
  bool snapshots = false;

  std::vector<Eigenvalue> grid() const;
};

/// Parses and validates the JSON configuration. Errors are ConfigError with
/// the offending field path, e.g. "/link/beta2_ps2_per_km".
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig read_config(const std::filesystem::path& path);
nlohmann::json to_json(const ExperimentConfig& config);

/// Designs the balanced codebook the config asks for (or reads it).
Codebook obtain_codebook(const ExperimentConfig& config);

/// Symbol sequence: shuffled passes over the codebook entries.
std::vector<BitPattern> symbol_sequence(const Codebook& codebook, std::size_t symbols,
                                        std::uint64_t seed);

struct TransmitResult {
  std::vector<Frame> frames;              ///< transmitted (before launch scaling)
  std::vector<SampledPulse> received;     ///< after the link, launch scaling removed
  std::optional<PropagationRecord> record;  ///< frame 0 snapshots when asked
  double mean_launch_power_w = 0.0;
};

/// Builds every frame, sends it through the link and undoes the launch factor.
/// Frames run on `config.threads` workers; each frame has its own noise
/// stream so the result does not depend on the worker count.
TransmitResult transmit(const ExperimentConfig& config, const Codebook& codebook);

RunReport detect(const ExperimentConfig& config, const Codebook& codebook,
                 const TransmitResult& tx);

/// transmit + detect, writing outputs when config.output_dir is set.
RunReport run_experiment(const ExperimentConfig& config, const Codebook& codebook);

nlohmann::json to_json(const RunReport& report, const ExperimentConfig& config);
void write_scatter_csv(const RunReport& report, const std::filesystem::path& path);
void write_report(const RunReport& report, const ExperimentConfig& config,
                  const std::filesystem::path& dir);

/// Received frames on disk: frame_NNNN.{bin,json} plus frames.json with the
/// slot layout and reference patterns.
void write_frames(const TransmitResult& tx, const ExperimentConfig& config,
                  const std::filesystem::path& dir);
TransmitResult read_frames(const std::filesystem::path& dir, ExperimentConfig& config);

}  // namespace nfdm
