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

#include <gtest/gtest.h>

#include <cmath>
#include <nlohmann/json.hpp>
#include <set>

#include "nfdm/darboux.hpp"
#include "nfdm/designer.hpp"
#include "nfdm/errors.hpp"
#include "nfdm/metrics.hpp"

namespace nfdm {
namespace {

// Small grid and few z samples keep each objective evaluation ~1 ms.
DesignRules cheap_rules() {
  DesignRules r;
  r.grid = TimeGrid::centered(16, 512);
  r.z_sampling = uniform_sampling(r.z_link, 5);
  return r;
}

SearchOptions cheap_search() {
  SearchOptions o;
  o.strategy = SearchStrategy::coordinate;
  o.starts = 1;
  o.pair_moves = false;
  return o;
}

TEST(Rules, PhaseLevelsAndValidation) {
  DesignRules r = cheap_rules();
  EXPECT_EQ(r.phase_levels(), 8);
  r.phase_step = 1.0;
  EXPECT_THROW(r.validate(), DomainError);
  r = cheap_rules();
  r.z_link = 0;
  EXPECT_THROW(r.validate(), DomainError);
}

TEST(Sampling, EndpointsAndSpans) {
  const auto u = uniform_sampling(0.4, 5);
  ASSERT_EQ(u.size(), 5u);
  EXPECT_DOUBLE_EQ(u.front(), 0.0);
  EXPECT_DOUBLE_EQ(u.back(), 0.4);
  const auto s = span_sampling(0.4, 0.1);
  // 4 spans: 5 boundaries plus 4 midpoints.
  EXPECT_EQ(s.size(), 9u);
  EXPECT_TRUE(std::is_sorted(s.begin(), s.end()));
}

TEST(Midlink, TransmitSpectrumReturnsToReferenceHalfway) {
  const std::vector<Eigenvalue> sub{Eigenvalue(-1, 1), Eigenvalue(0, 2), Eigenvalue(2, 1)};
  const std::vector<double> ph{0.0, M_PI / 4, 3 * M_PI / 2};
  const auto mid = midlink_reference(sub, ph);
  const auto kappa = amplitude_kernel(sub);
  for (std::size_t i = 0; i < sub.size(); ++i) {
    EXPECT_NEAR(std::abs(mid[i].amplitude), std::abs(kappa[i]), 1e-12);
    EXPECT_NEAR(std::remainder(std::arg(mid[i].amplitude) - ph[i], 2 * M_PI), 0.0, 1e-12);
  }
  const auto tx = to_transmit_spectrum(mid, 0.414);
  const auto back = propagate_spectrum(tx, 0.207);
  for (std::size_t i = 0; i < sub.size(); ++i)
    EXPECT_NEAR(std::abs(back[i].amplitude / mid[i].amplitude - 1.0), 0.0, 1e-12);
}

TEST(PhaseSearch, SingleEigenvalueNeedsNoSearch) {
  const auto r = phase_search(std::vector{Eigenvalue(0, 1)}, cheap_rules());
  EXPECT_EQ(r.levels, std::vector<int>{0});
  EXPECT_EQ(r.evaluations, 1u);
}

TEST(PhaseSearch, ExhaustiveIsOptimalWithSmallestVectorOnTies) {
  const auto rules = cheap_rules();
  const std::vector<Eigenvalue> sub{Eigenvalue(-1, 1), Eigenvalue(1, 1), Eigenvalue(0, 2)};
  SearchOptions o;
  o.strategy = SearchStrategy::exhaustive;
  const auto r = phase_search(sub, rules, o);
  EXPECT_EQ(r.evaluations, 64u);
  EXPECT_EQ(r.levels[0], 0);
  // Brute force over the same lattice.
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) {
      const std::vector<int> lv{0, a, b};
      const double v = design_objective(sub, lv, rules);
      EXPECT_GE(v, r.max_bw * (1 - 1e-12));
      if (lv < r.levels) {
        EXPECT_GT(v, r.max_bw * (1 + 1e-12));
      }
    }
}

TEST(PhaseSearch, CoordinateMatchesExhaustiveOnSmallSubsets) {
  const auto rules = cheap_rules();
  const std::vector<std::vector<Eigenvalue>> cases{
      {Eigenvalue(0, 1), Eigenvalue(1, 2)},
      {Eigenvalue(-2, 1), Eigenvalue(0, 1), Eigenvalue(2, 2)},
  };
  for (const auto& sub : cases) {
    SearchOptions ex, co;
    ex.strategy = SearchStrategy::exhaustive;
    co.strategy = SearchStrategy::coordinate;
    EXPECT_NEAR(phase_search(sub, rules, co).max_bw, phase_search(sub, rules, ex).max_bw, 1e-6);
  }
}

TEST(PhaseSearch, MaximizeFindsWorstCase) {
  const auto rules = cheap_rules();
  const std::vector<Eigenvalue> sub{Eigenvalue(0, 1), Eigenvalue(1, 1)};
  SearchOptions lo, hi;
  hi.maximize = true;
  EXPECT_LT(phase_search(sub, rules, lo).max_bw, phase_search(sub, rules, hi).max_bw);
}

TEST(PhaseSearch, ExhaustiveRefusesLargeSubsets) {
  SearchOptions o;
  o.strategy = SearchStrategy::exhaustive;
  const auto g = default_grid();
  try {
    phase_search(std::span(g).first(7), cheap_rules(), o);
    FAIL() << "expected PreconditionError";
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("262144"), std::string::npos) << e.what();
  }
}

TEST(Patterns, StringRoundTripAndOrder) {
  const BitPattern p{true, false, false, true};
  EXPECT_EQ(to_string(p), "1001");
  EXPECT_EQ(pattern_from_string("1001"), p);
  EXPECT_THROW(pattern_from_string("10x1"), DomainError);
}

TEST(Patterns, BalancedSetHasEveryBitOnHalfTheTime) {
  const auto ps = balanced_patterns(10, 256, 7);
  ASSERT_EQ(ps.size(), 256u);
  std::set<BitPattern> uniq(ps.begin(), ps.end());
  EXPECT_EQ(uniq.size(), 256u);
  for (std::size_t b = 0; b < 10; ++b) {
    std::size_t on = 0;
    for (const auto& p : ps) on += p[b];
    EXPECT_EQ(on, 128u) << "bit " << b;
  }
  for (const auto& p : ps) {
    BitPattern c = p;
    c.flip();
    EXPECT_TRUE(uniq.count(c));
  }
  EXPECT_EQ(balanced_patterns(10, 256, 7), ps);
  EXPECT_NE(balanced_patterns(10, 256, 8), ps);
  EXPECT_THROW(balanced_patterns(3, 16, 1), DomainError);
  EXPECT_THROW(balanced_patterns(3, 3, 1), DomainError);
}

TEST(Codebook, EntriesCarryTraceIdentityEnergy) {
  const auto grid = default_grid();
  std::vector<BitPattern> pats;
  for (std::size_t b = 0; b < grid.size(); ++b) {
    BitPattern p(grid.size(), false);
    p[b] = true;
    pats.push_back(p);
  }
  pats.push_back(BitPattern(grid.size(), false));
  pats.push_back(pattern_from_string("1100000011"));
  const auto rules = cheap_rules();
  const auto book = build_codebook(grid, pats, rules, {}, 1);
  ASSERT_EQ(book.entries.size(), pats.size());
  for (const auto& e : book.entries) {
    double sigma = 0;
    for (std::size_t b = 0; b < grid.size(); ++b)
      if (e.pattern[b]) sigma += grid[b].sigma();
    const auto q = synthesize(e.transmit, default_synthesis_grid());
    EXPECT_NEAR(q.energy(), 4 * sigma, 4 * sigma * 5e-3 + 1e-12) << to_string(e.pattern);
  }
  EXPECT_TRUE(book.find(BitPattern(grid.size(), false))->transmit.empty());
  EXPECT_EQ(book.find(pattern_from_string("0000000000"))->duration, 0.0);
  EXPECT_EQ(book.find(pattern_from_string("1111111111")), nullptr);
}

TEST(Codebook, DeterministicAndJsonRoundTrip) {
  const auto grid = default_grid();
  const auto pats = balanced_patterns(10, 6, 3);
  const auto a = build_codebook(grid, pats, cheap_rules(), cheap_search(), 3);
  const auto b = build_codebook(grid, pats, cheap_rules(), cheap_search(), 3);
  EXPECT_EQ(to_json(a), to_json(b));
  const auto path = std::filesystem::temp_directory_path() / "nfdm_codebook.json";
  write_codebook(a, path);
  const auto c = read_codebook(path);
  EXPECT_EQ(to_json(c), to_json(a));
  EXPECT_EQ(to_json(a).at("schema_version"), Codebook::kSchemaVersion);
  EXPECT_EQ(c.evolution_constant, a.evolution_constant);
}

TEST(Codebook, RejectsDuplicatesAndWrongLengths) {
  const auto grid = default_grid();
  const auto p = pattern_from_string("1000000000");
  EXPECT_THROW(build_codebook(grid, std::vector<BitPattern>{p, p}, cheap_rules(), {}), DomainError);
  EXPECT_THROW(build_codebook(grid, std::vector<BitPattern>{pattern_from_string("10")}, cheap_rules(), {}), DomainError);
}

TEST(Codebook, RejectsUnknownSchema) {
  auto j = to_json(build_codebook(default_grid(), std::vector<BitPattern>{pattern_from_string("1000000000")}, cheap_rules(), {}));
  j["schema_version"] = 99;
  EXPECT_THROW(codebook_from_json(j), Error);
}

}  // namespace
}  // namespace nfdm
