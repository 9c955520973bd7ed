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
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "nfdm/pulse.hpp"
#include "nfdm/spectrum.hpp"

namespace nfdm {

struct DesignRules {
  double z_link = 0.414;
  double phase_step = 0.25 * 3.14159265358979323846;
  double epsilon_duration = 0.01;
  double energy_fraction = 0.99;
  /// Absolute z (from the transmitter) at which the bandwidth is evaluated.
  std::vector<double> z_sampling;
  /// Synthesis grid for every designer evaluation.
  TimeGrid grid = TimeGrid::centered(16.0, 1024);

  /// Throws DomainError unless phase_step divides 2 pi and z_link > 0.
  void validate() const;
  int phase_levels() const;
};

/// Span boundaries and midpoints on [0, z_link] for spans of length span_z.
std::vector<double> span_sampling(double z_link, double span_z);
/// `count` equally spaced points on [0, z_link], both ends included.
std::vector<double> uniform_sampling(double z_link, std::size_t count);

/// Mid-link spectrum with unit Darboux constants and the phase of q_d set to
/// `phases`: q_d = |A_d| e^{j phase}.
DiscreteSpectrum midlink_reference(std::span<const Eigenvalue> subset,
                                   std::span<const double> phases);

/// propagate_spectrum(midlink, -z_link / 2).
DiscreteSpectrum to_transmit_spectrum(const DiscreteSpectrum& midlink, double z_link);

enum class SearchStrategy { exhaustive, coordinate, automatic };
std::string to_string(SearchStrategy s);
SearchStrategy strategy_from_string(const std::string& s);

inline constexpr std::size_t kMaxExhaustive = 6;

struct PhaseSearchResult {
  std::vector<int> levels;  ///< phase = level * phase_step, levels[0] = 0
  std::vector<double> phases;
  double max_bw = 0.0;
  std::size_t evaluations = 0;
};

/// Max over rules.z_sampling of the lossless bandwidth of the transmit pulse
/// designed from `levels`.
double design_objective(std::span<const Eigenvalue> subset, std::span<const int> levels,
                        const DesignRules& rules);

struct SearchOptions {
  SearchStrategy strategy = SearchStrategy::automatic;
  /// Worst-case search instead of the best.
  bool maximize = false;
  /// Coordinate strategy: sweep budget per start.
  int passes = 3;
  /// Coordinate strategy: start 0 is the zero vector, the rest are seeded draws.
  int starts = 4;
  /// Coordinate strategy: when a sweep of single-phase moves changes nothing,
  /// try every two-phase move before giving up.
  bool pair_moves = true;
};

/// Minimizes design_objective over quantized phases with the first phase held
/// at 0. Among equal objectives the lexicographically smallest vector wins.
/// `automatic` is exhaustive up to kMaxExhaustive eigenvalues, coordinate
/// beyond. Exhaustive on a larger subset throws PreconditionError quoting the
/// evaluation count.
PhaseSearchResult phase_search(std::span<const Eigenvalue> subset, const DesignRules& rules,
                               const SearchOptions& options = {});

using BitPattern = std::vector<bool>;
std::string to_string(const BitPattern& bits);
BitPattern pattern_from_string(const std::string& s);

struct CodebookEntry {
  BitPattern pattern;
  std::vector<int> levels;
  DiscreteSpectrum transmit;
  double max_bandwidth = 0.0;
  double duration = 0.0;  ///< transmit (z = 0) duration at epsilon_duration
};

struct Codebook {
  static constexpr int kSchemaVersion = 1;
  std::vector<Eigenvalue> grid;
  DesignRules rules;
  SearchOptions search;
  std::uint64_t seed = 0;
  double evolution_constant = 0.0;
  std::vector<CodebookEntry> entries;

  const CodebookEntry* find(const BitPattern& pattern) const;
  std::vector<Eigenvalue> subset(const BitPattern& pattern) const;
};

/// Designs one entry per pattern. Throws DomainError on duplicate patterns or
/// a pattern length different from the grid size.
Codebook build_codebook(std::span<const Eigenvalue> grid, std::span<const BitPattern> patterns,
                        const DesignRules& rules, const SearchOptions& search,
                        std::uint64_t seed = 0);

/// `count` distinct patterns of `bits` bits (count even, at most 2^bits) in
/// which every bit is on in exactly half of them: complementary pairs drawn
/// at random from `seed`.
std::vector<BitPattern> balanced_patterns(std::size_t bits, std::size_t count,
                                          std::uint64_t seed);

nlohmann::json to_json(const DesignRules& rules);
DesignRules rules_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Codebook& book);
Codebook codebook_from_json(const nlohmann::json& j);
void write_codebook(const Codebook& book, const std::filesystem::path& path);
Codebook read_codebook(const std::filesystem::path& path);

}  // namespace nfdm
