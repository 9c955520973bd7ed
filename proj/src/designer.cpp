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

#include "nfdm/designer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "nfdm/calibration.hpp"
#include "nfdm/darboux.hpp"
#include "nfdm/errors.hpp"
#include "nfdm/metrics.hpp"

namespace nfdm {

void DesignRules::validate() const {
  if (!(z_link > 0.0)) throw DomainError("DesignRules: z_link must be positive");
  if (!(phase_step > 0.0)) throw DomainError("DesignRules: phase_step must be positive");
  const double levels = 2.0 * std::numbers::pi / phase_step;
  if (std::abs(levels - std::round(levels)) > 1e-9)
    throw DomainError("DesignRules: phase_step must divide 2*pi");
  if (!(epsilon_duration > 0.0)) throw DomainError("DesignRules: epsilon_duration must be positive");
  if (!(energy_fraction > 0.0 && energy_fraction < 1.0))
    throw DomainError("DesignRules: energy_fraction must lie in (0, 1)");
  if (z_sampling.empty()) throw DomainError("DesignRules: z_sampling is empty");
  grid.validate();
}

int DesignRules::phase_levels() const {
  return static_cast<int>(std::lround(2.0 * std::numbers::pi / phase_step));
}

std::vector<double> span_sampling(double z_link, double span_z) {
  if (!(z_link > 0.0) || !(span_z > 0.0)) throw DomainError("span_sampling: lengths must be positive");
  std::vector<double> z;
  for (double s = 0.0; s < z_link - 1e-12; s += span_z) {
    z.push_back(s);
    z.push_back(std::min(s + 0.5 * span_z, z_link));
  }
  z.push_back(z_link);
  z.erase(std::unique(z.begin(), z.end()), z.end());
  return z;
}

std::vector<double> uniform_sampling(double z_link, std::size_t count) {
  if (count < 2) throw DomainError("uniform_sampling: at least two points");
  std::vector<double> z(count);
  for (std::size_t i = 0; i < count; ++i)
    z[i] = z_link * static_cast<double>(i) / static_cast<double>(count - 1);
  return z;
}

DiscreteSpectrum midlink_reference(std::span<const Eigenvalue> subset,
                                   std::span<const double> phases) {
  if (subset.size() != phases.size())
    throw DomainError("midlink_reference: one phase per eigenvalue required");
  const auto kappa = reference_amplitudes(subset);
  std::vector<SpectrumEntry> entries;
  for (std::size_t i = 0; i < subset.size(); ++i)
    entries.push_back({subset[i], std::polar(std::abs(kappa[i]), phases[i])});
  return DiscreteSpectrum(std::move(entries));
}

DiscreteSpectrum to_transmit_spectrum(const DiscreteSpectrum& midlink, double z_link) {
  return propagate_spectrum(midlink, -0.5 * z_link);
}

std::string to_string(SearchStrategy s) {
  switch (s) {
    case SearchStrategy::exhaustive: return "exhaustive";
    case SearchStrategy::coordinate: return "coordinate";
    case SearchStrategy::automatic: return "auto";
  }
  return "auto";
}

SearchStrategy strategy_from_string(const std::string& s) {
  if (s == "exhaustive") return SearchStrategy::exhaustive;
  if (s == "coordinate") return SearchStrategy::coordinate;
  if (s == "auto") return SearchStrategy::automatic;
  throw DomainError("unknown search strategy '" + s + "' (exhaustive|coordinate|auto)");
}

namespace {

std::vector<double> to_phases(std::span<const int> levels, double step) {
  std::vector<double> p(levels.size());
  for (std::size_t i = 0; i < levels.size(); ++i) p[i] = step * levels[i];
  return p;
}

}  // namespace

double design_objective(std::span<const Eigenvalue> subset, std::span<const int> levels,
                        const DesignRules& rules) {
  if (subset.empty()) return 0.0;
  const auto phases = to_phases(levels, rules.phase_step);
  const auto tx = to_transmit_spectrum(midlink_reference(subset, phases), rules.z_link);
  const auto profile = bandwidth_profile(tx, rules.z_sampling, rules.grid);
  return *std::max_element(profile.bw.begin(), profile.bw.end());
}

PhaseSearchResult phase_search(std::span<const Eigenvalue> subset, const DesignRules& rules,
                               const SearchOptions& options) {
  rules.validate();
  if (subset.empty()) throw DomainError("phase_search: empty subset");
  if (options.passes < 1 || options.starts < 1)
    throw DomainError("phase_search: passes and starts must be >= 1");
  const std::size_t k = subset.size();
  const int levels_per_phase = rules.phase_levels();
  SearchStrategy strategy = options.strategy;
  if (strategy == SearchStrategy::automatic)
    strategy = k <= kMaxExhaustive ? SearchStrategy::exhaustive : SearchStrategy::coordinate;

  PhaseSearchResult res;
  res.levels.assign(k, 0);
  const double sign = options.maximize ? -1.0 : 1.0;
  std::map<std::vector<int>, double> memo;
  const auto eval = [&](const std::vector<int>& lv) {
    if (auto it = memo.find(lv); it != memo.end()) return it->second;
    ++res.evaluations;
    const double v = sign * design_objective(subset, lv, rules);
    memo.emplace(lv, v);
    return v;
  };
  // Equal within rounding counts as a tie; ties go to the lexicographically
  // smaller vector.
  const auto better = [](double a, double b) { return a < b - 1e-12 * std::abs(b); };
  const auto prefer = [&](double a, const std::vector<int>& va, double b,
                          const std::vector<int>& vb) {
    return better(a, b) || (!better(b, a) && va < vb);
  };

  if (strategy == SearchStrategy::exhaustive) {
    if (k > kMaxExhaustive) {
      std::ostringstream os;
      os << "phase_search: exhaustive search over " << k << " phases needs "
         << std::pow(static_cast<double>(levels_per_phase), static_cast<double>(k - 1))
         << " objective evaluations; limit is k <= " << kMaxExhaustive << ", use coordinate";
      throw PreconditionError(os.str());
    }
    std::vector<int> lv(k, 0);
    double best = eval(lv);
    res.levels = lv;
    // Odometer over levels[1..k-1] in lexicographic order, so the first
    // optimum found is the smallest.
    while (true) {
      std::size_t i = k;
      while (i-- > 1) {
        if (++lv[i] < levels_per_phase) break;
        lv[i] = 0;
      }
      if (i == 0 || k == 1) break;
      const double v = eval(lv);
      if (better(v, best)) {
        best = v;
        res.levels = lv;
      }
    }
    res.max_bw = sign * best;
    res.phases = to_phases(res.levels, rules.phase_step);
    return res;
  }

  // Moves change one phase, or two once single moves stall.
  const auto sweep = [&](std::vector<int>& lv, double& best, bool pairs) {
    bool changed = false;
    if (!pairs) {
      for (std::size_t i = 1; i < k; ++i) {
        std::vector<int> pick = lv;
        double pick_value = best;
        for (int v = 0; v < levels_per_phase; ++v) {
          std::vector<int> trial = lv;
          trial[i] = v;
          const double value = eval(trial);
          if (prefer(value, trial, pick_value, pick)) {
            pick = trial;
            pick_value = value;
          }
        }
        changed = changed || pick != lv;
        lv = pick;
        best = pick_value;
      }
      return changed;
    }
    for (std::size_t i = 1; i < k; ++i)
      for (std::size_t m = i + 1; m < k; ++m) {
        std::vector<int> pick = lv;
        double pick_value = best;
        for (int v = 0; v < levels_per_phase; ++v)
          for (int w = 0; w < levels_per_phase; ++w) {
            std::vector<int> trial = lv;
            trial[i] = v;
            trial[m] = w;
            const double value = eval(trial);
            if (prefer(value, trial, pick_value, pick)) {
              pick = trial;
              pick_value = value;
            }
          }
        changed = changed || pick != lv;
        lv = pick;
        best = pick_value;
      }
    return changed;
  };

  double overall = 0.0;
  for (int start = 0; start < options.starts; ++start) {
    // Start 0 is the zero vector; later starts come from a fixed generator.
    std::vector<int> lv(k, 0);
    std::mt19937_64 gen(static_cast<std::uint64_t>(start));
    if (start > 0)
      for (std::size_t i = 1; i < k; ++i)
        lv[i] = static_cast<int>(gen() % static_cast<std::uint64_t>(levels_per_phase));
    double best = eval(lv);
    for (int pass = 0; pass < options.passes; ++pass) {
      if (sweep(lv, best, false)) continue;
      if (!options.pair_moves || k < 3 || !sweep(lv, best, true)) break;
    }
    if (start == 0 || prefer(best, lv, overall, res.levels)) {
      overall = best;
      res.levels = lv;
    }
  }
  res.max_bw = sign * overall;
  res.phases = to_phases(res.levels, rules.phase_step);
  return res;
}

std::string to_string(const BitPattern& bits) {
  std::string s;
  for (bool b : bits) s.push_back(b ? '1' : '0');
  return s;
}

BitPattern pattern_from_string(const std::string& s) {
  BitPattern bits;
  for (char c : s) {
    if (c != '0' && c != '1') throw DomainError("pattern '" + s + "' is not a 0/1 string");
    bits.push_back(c == '1');
  }
  return bits;
}

const CodebookEntry* Codebook::find(const BitPattern& pattern) const {
  for (const auto& e : entries)
    if (e.pattern == pattern) return &e;
  return nullptr;
}

std::vector<Eigenvalue> Codebook::subset(const BitPattern& pattern) const {
  std::vector<Eigenvalue> out;
  for (std::size_t i = 0; i < grid.size() && i < pattern.size(); ++i)
    if (pattern[i]) out.push_back(grid[i]);
  return out;
}

Codebook build_codebook(std::span<const Eigenvalue> grid, std::span<const BitPattern> patterns,
                        const DesignRules& rules, const SearchOptions& search,
                        std::uint64_t seed) {
  rules.validate();
  Codebook book;
  book.grid.assign(grid.begin(), grid.end());
  std::sort(book.grid.begin(), book.grid.end());
  if (std::adjacent_find(book.grid.begin(), book.grid.end()) != book.grid.end())
    throw DomainError("build_codebook: duplicate grid eigenvalue");
  book.rules = rules;
  book.search = search;
  book.search.maximize = false;
  book.seed = seed;
  book.evolution_constant = kEvolutionConstant;

  std::set<BitPattern> seen;
  for (const auto& p : patterns) {
    if (p.size() != book.grid.size())
      throw DomainError("build_codebook: pattern " + to_string(p) + " does not match the grid size");
    if (!seen.insert(p).second)
      throw DomainError("build_codebook: duplicate pattern " + to_string(p));
  }

  for (const auto& p : patterns) {
    CodebookEntry e;
    e.pattern = p;
    const auto sub = book.subset(p);
    if (sub.empty()) {
      book.entries.push_back(std::move(e));
      continue;
    }
    const auto found = phase_search(sub, rules, book.search);
    e.levels = found.levels;
    e.max_bandwidth = found.max_bw;
    e.transmit = to_transmit_spectrum(midlink_reference(sub, found.phases), rules.z_link);
    e.duration = pulse_duration(synthesize(e.transmit, rules.grid), rules.epsilon_duration).width();
    book.entries.push_back(std::move(e));
  }
  return book;
}

std::vector<BitPattern> balanced_patterns(std::size_t bits, std::size_t count,
                                          std::uint64_t seed) {
  if (bits == 0 || bits > 30) throw DomainError("balanced_patterns: bits must be in [1, 30]");
  const std::uint64_t total = std::uint64_t{1} << bits;
  if (count % 2 != 0 || count > total)
    throw DomainError("balanced_patterns: count must be even and at most 2^bits");
  // Pair p with its complement; pairs are indexed by patterns with the top bit clear.
  std::vector<std::uint64_t> pairs(total / 2);
  for (std::uint64_t i = 0; i < pairs.size(); ++i) pairs[i] = i;
  std::mt19937_64 rng(seed);
  // Partial Fisher-Yates; explicit so the draw does not depend on the library's shuffle.
  for (std::size_t i = 0; i < count / 2; ++i) {
    const std::uint64_t span = pairs.size() - i;
    const std::uint64_t j = i + rng() % span;
    std::swap(pairs[i], pairs[j]);
  }
  std::vector<std::uint64_t> chosen;
  for (std::size_t i = 0; i < count / 2; ++i) {
    chosen.push_back(pairs[i]);
    chosen.push_back((total - 1) ^ pairs[i]);
  }
  std::sort(chosen.begin(), chosen.end());
  std::vector<BitPattern> out;
  for (auto v : chosen) {
    BitPattern p(bits);
    for (std::size_t b = 0; b < bits; ++b) p[b] = (v >> b) & 1U;
    out.push_back(std::move(p));
  }
  return out;
}

nlohmann::json to_json(const DesignRules& rules) {
  return {{"z_link", rules.z_link},
          {"phase_step_rad", rules.phase_step},
          {"epsilon_duration", rules.epsilon_duration},
          {"energy_fraction", rules.energy_fraction},
          {"z_sampling", rules.z_sampling},
          {"grid", {{"t_start", rules.grid.t_start}, {"dt", rules.grid.dt}, {"count", rules.grid.count}}}};
}

DesignRules rules_from_json(const nlohmann::json& j) {
  DesignRules r;
  r.z_link = j.at("z_link").get<double>();
  r.phase_step = j.at("phase_step_rad").get<double>();
  r.epsilon_duration = j.at("epsilon_duration").get<double>();
  r.energy_fraction = j.at("energy_fraction").get<double>();
  r.z_sampling = j.at("z_sampling").get<std::vector<double>>();
  const auto& g = j.at("grid");
  r.grid = {g.at("t_start").get<double>(), g.at("dt").get<double>(), g.at("count").get<std::size_t>()};
  r.validate();
  return r;
}

nlohmann::json to_json(const Codebook& book) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : book.entries)
    entries.push_back({{"pattern", to_string(e.pattern)},
                       {"phase_levels", e.levels},
                       {"transmit", to_json(e.transmit)},
                       {"max_bandwidth", e.max_bandwidth},
                       {"duration", e.duration}});
  return {{"schema_version", Codebook::kSchemaVersion},
          {"header",
           {{"grid", to_json(std::span<const Eigenvalue>(book.grid))},
            {"rules", to_json(book.rules)},
            {"search",
             {{"strategy", to_string(book.search.strategy)},
              {"passes", book.search.passes},
              {"starts", book.search.starts},
              {"pair_moves", book.search.pair_moves}}},
            {"seed", book.seed},
            {"evolution_constant", book.evolution_constant}}},
          {"entries", entries}};
}

Codebook codebook_from_json(const nlohmann::json& j) {
  try {
    const int version = j.at("schema_version").get<int>();
    if (version != Codebook::kSchemaVersion)
      throw DomainError("codebook: unsupported schema_version " + std::to_string(version));
    Codebook book;
    const auto& h = j.at("header");
    book.grid = eigenvalues_from_json(h.at("grid"));
    book.rules = rules_from_json(h.at("rules"));
    const auto& js = h.at("search");
    book.search.strategy = strategy_from_string(js.at("strategy").get<std::string>());
    book.search.passes = js.at("passes").get<int>();
    book.search.starts = js.at("starts").get<int>();
    book.search.pair_moves = js.at("pair_moves").get<bool>();
    book.seed = h.at("seed").get<std::uint64_t>();
    book.evolution_constant = h.at("evolution_constant").get<double>();
    for (const auto& je : j.at("entries")) {
      CodebookEntry e;
      e.pattern = pattern_from_string(je.at("pattern").get<std::string>());
      e.levels = je.at("phase_levels").get<std::vector<int>>();
      e.transmit = spectrum_from_json(je.at("transmit"));
      e.max_bandwidth = je.at("max_bandwidth").get<double>();
      e.duration = je.at("duration").get<double>();
      book.entries.push_back(std::move(e));
    }
    return book;
  } catch (const nlohmann::json::exception& ex) {
    throw DomainError(std::string("codebook: malformed JSON: ") + ex.what());
  }
}

void write_codebook(const Codebook& book, const std::filesystem::path& path) {
  std::ofstream f(path);
  if (!f) throw IoError("write_codebook: cannot open " + path.string());
  f << to_json(book).dump(1) << '\n';
  if (!f) throw IoError("write_codebook: write failed for " + path.string());
}

Codebook read_codebook(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw IoError("read_codebook: cannot open " + path.string());
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::exception& ex) {
    throw IoError("read_codebook: " + path.string() + ": " + ex.what());
  }
  return codebook_from_json(j);
}

}  // namespace nfdm
