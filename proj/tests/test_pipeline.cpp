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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <nlohmann/json.hpp>

#include "nfdm/darboux.hpp"
#include "nfdm/errors.hpp"
#include "nfdm/pipeline.hpp"

namespace nfdm {
namespace {

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

class Pipeline : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    std::vector<BitPattern> pats{pattern_from_string("0000000000"), pattern_from_string("1111111111"),
                                 pattern_from_string("1010010110"), pattern_from_string("0101101001"),
                                 pattern_from_string("1000000000"), pattern_from_string("0000110000")};
    book_ = new Codebook(build_codebook(default_grid(), pats, cheap_rules(), cheap_search(), 1));
  }
  static void TearDownTestSuite() { delete book_; }

  static FrameSpec spec(std::vector<std::string> patterns) {
    FrameSpec s;
    for (const auto& p : patterns) s.pattern_sequence.push_back(pattern_from_string(p));
    s.symbols_per_frame = patterns.size();
    return s;
  }

  static Codebook* book_;
};
Codebook* Pipeline::book_ = nullptr;

TEST_F(Pipeline, AllZeroSymbolGivesZeroFrame) {
  const auto f = build_frame(*book_, spec({"0000000000"}));
  EXPECT_EQ(f.field.peak(), 0.0);
  EXPECT_EQ(f.field.size(), 256u);
}

TEST_F(Pipeline, DesignedDurationsFitTheSlot) {
  for (const auto& e : book_->entries) EXPECT_LE(e.duration, 12.0) << to_string(e.pattern);
}

TEST_F(Pipeline, SingleSymbolFrameIsCentredSynthesis) {
  const auto f = build_frame(*book_, spec({"1010010110"}));
  const auto* e = book_->find(pattern_from_string("1010010110"));
  const auto ref = synthesize(e->transmit, f.field.grid());
  // Only the folded tails (below eps * sqrt(E) at the slot edge) differ.
  double err = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) err = std::max(err, std::abs(f.field[i] - ref[i]));
  EXPECT_LT(err, 0.01 * std::sqrt(ref.energy()));
  EXPECT_NEAR(f.field.energy(), ref.energy(), 1e-3 * ref.energy());
}

TEST_F(Pipeline, CrossSlotLeakageOfAllOnSymbol) {
  const auto* e = book_->find(pattern_from_string("1111111111"));
  const TimeGrid three{-18.0, 12.0 / 256.0, 768};
  const auto q = synthesize(e->transmit, three);
  double inside = 0.0, total = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    total += std::norm(q[i]);
    if (i >= 256 && i < 512) inside += std::norm(q[i]);
  }
  EXPECT_LT((total - inside) / total, 1e-4);
}

TEST_F(Pipeline, BackToBackIsErrorFree) {
  const auto s = spec({"1111111111", "0000000000", "1010010110", "0101101001", "1111111111", "1000000000"});
  const auto f = build_frame(*book_, s);
  const auto rows = receive_frame(f.field, s, f.patterns, book_->grid, ReceiverOptions{});
  RunReport r;
  r.symbols = rows;
  tally(r, 10);
  EXPECT_EQ(r.bit_errors, 0u);
  EXPECT_EQ(r.bits, 60u);
  EXPECT_EQ(r.unmatched_detections, 0u);
}

TEST_F(Pipeline, SlotDetectionMatchesIsolatedPulse) {
  const auto s = spec({"1111111111", "0101101001", "1111111111"});
  const auto f = build_frame(*book_, s);
  const auto one = build_frame(*book_, spec({"0101101001"}));
  ReceiverOptions o;
  const auto in_frame = detect_eigenvalues(f.field.slice(256, 256), o.detect);
  const auto alone = detect_eigenvalues(one.field, o.detect);
  ASSERT_EQ(in_frame.size(), alone.size());
  for (std::size_t i = 0; i < alone.size(); ++i) EXPECT_LT(distance(in_frame[i], alone[i]), 1e-3);
}

TEST_F(Pipeline, MovedEigenvalueCostsExactlyOneBit) {
  Codebook bent = *book_;
  for (auto& e : bent.entries) {
    if (to_string(e.pattern) != "0000110000") continue;
    // (0, 1) -> (0.5, 1.5): more than 0.5 from every grid point.
    std::vector<SpectrumEntry> moved;
    for (const auto& x : e.transmit)
      moved.push_back({x.lambda == Eigenvalue(0, 1) ? Eigenvalue(0.5, 1.5) : x.lambda, x.amplitude});
    e.transmit = DiscreteSpectrum(moved);
  }
  const auto s = spec({"0000110000", "1000000000"});
  const auto f = build_frame(bent, s);
  const auto rows = receive_frame(f.field, s, f.patterns, bent.grid, ReceiverOptions{});
  RunReport r;
  r.symbols = rows;
  tally(r, 10);
  EXPECT_EQ(r.bit_errors, 1u);
  EXPECT_EQ(r.per_eigenvalue_errors[4], 1u);  // bit 4 is (0, 1)
  EXPECT_EQ(rows[0].unmatched, 1u);
}

TEST_F(Pipeline, NoiseOnlySlotsDecideZero) {
  // Accumulated ASE of the 84-span link on empty slots.
  ExperimentConfig c;
  c.link.amplifier = AmplifierModel::compensating(c.link.span, 5.0);
  const auto grid = FrameSpec{}.grid();
  std::mt19937_64 rng(12);
  AmplifierModel unit_gain = c.link.amplifier;
  int violations = 0;
  const int slots = 100;
  for (int k = 0; k < slots; ++k) {
    auto q = SampledPulse::zeros(grid);
    for (int a = 0; a < c.link.span_count(); ++a) {
      // Span loss cancels the gain; only the noise accumulates.
      auto noisy = amplify(SampledPulse::zeros(grid), unit_gain, c.link.normalization, rng);
      for (std::size_t i = 0; i < q.size(); ++i) q[i] += noisy[i];
    }
    const double amp = launch_amplitude(c.link, c.launch);
    for (auto& v : q.samples()) v /= amp;
    const auto d = ook_decide(detect_eigenvalues(q, c.receiver.detect), default_grid());
    if (std::any_of(d.bits.begin(), d.bits.end(), [](bool b) { return b; })) ++violations;
  }
  RecordProperty("noise_slot_violation_rate", std::to_string(violations / double(slots)));
  EXPECT_EQ(violations, 0);
}

TEST_F(Pipeline, FrameGuards) {
  EXPECT_THROW(build_frame(*book_, spec({"1100000000"})), FrameError);
  auto s = spec({"1111111111"});
  s.symbol_interval = 6.0;
  EXPECT_THROW(build_frame(*book_, s), FrameError);
  s = spec({"1111111111"});
  s.symbols_per_frame = 2;
  EXPECT_THROW(build_frame(*book_, s), FrameError);
}

ExperimentConfig small_config(const Codebook&) {
  ExperimentConfig c;
  c.link.loops = 1;
  c.link.amplifier = AmplifierModel::compensating(c.link.span, 5.0);
  c.link.dz_km = 0.2;
  c.frame.symbols_per_frame = 4;
  c.symbols = 12;
  return c;
}

TEST_F(Pipeline, ZeroLoopsNoiselessRunIsErrorFree) {
  auto c = small_config(*book_);
  c.link.loops = 0;
  c.link.amplifier.nf_db = -INFINITY;
  const auto r = run_experiment(c, *book_);
  EXPECT_EQ(r.bits, 120u);
  EXPECT_EQ(r.bit_errors, 0u);
  EXPECT_FALSE(std::isfinite(r.osnr_db_analytic));
}

TEST_F(Pipeline, RunIsDeterministicAcrossThreadCounts) {
  auto c = small_config(*book_);
  c.threads = 1;
  const auto a = to_json(run_experiment(c, *book_), c);
  c.threads = 3;
  const auto b = to_json(run_experiment(c, *book_), c);
  c.threads = 1;
  EXPECT_EQ(a, b);
  std::size_t sum = 0;
  for (auto e : a.at("per_eigenvalue_errors")) sum += e.get<std::size_t>();
  EXPECT_EQ(sum, a.at("bit_errors").get<std::size_t>());
  EXPECT_GE(a.at("ber").get<double>(), 0.0);
  EXPECT_LE(a.at("ber").get<double>(), 1.0);
}

TEST_F(Pipeline, FramesOnDiskDetectLikeInMemory) {
  auto c = small_config(*book_);
  const auto tx = transmit(c, *book_);
  const auto direct = to_json(detect(c, *book_, tx), c);
  const auto dir = std::filesystem::temp_directory_path() / "nfdm_frames";
  std::filesystem::remove_all(dir);
  write_frames(tx, c, dir);
  auto c2 = small_config(*book_);
  const auto back = read_frames(dir, c2);
  auto reread = to_json(detect(c2, *book_, back), c2);
  // Frames from disk carry no transmitted field, so only the empirical OSNR may differ.
  EXPECT_EQ(reread.at("symbols"), direct.at("symbols"));
  EXPECT_EQ(reread.at("bit_errors"), direct.at("bit_errors"));
}

TEST_F(Pipeline, SymbolSequenceVisitsEveryEntryPerPass) {
  const auto seq = symbol_sequence(*book_, 12, 5);
  ASSERT_EQ(seq.size(), 12u);
  std::set<BitPattern> first(seq.begin(), seq.begin() + 6);
  EXPECT_EQ(first.size(), 6u);
  EXPECT_EQ(symbol_sequence(*book_, 12, 5), seq);
}

TEST_F(Pipeline, ReportFilesHaveDocumentedColumns) {
  auto c = small_config(*book_);
  c.output_dir = std::filesystem::temp_directory_path() / "nfdm_run";
  std::filesystem::remove_all(*c.output_dir);
  run_experiment(c, *book_);
  std::ifstream csv(*c.output_dir / "scatter.csv");
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header, "symbol_index,re_lambda,im_lambda");
  std::ifstream rep(*c.output_dir / "report.json");
  const auto j = nlohmann::json::parse(rep);
  EXPECT_EQ(j.at("symbols").size(), 12u);
  EXPECT_TRUE(j.contains("osnr_db_analytic_12p5ghz"));
}

// Config parsing.

nlohmann::json minimal_config() {
  return {{"grid", nlohmann::json::object()}, {"rules", nlohmann::json::object()},
          {"link", nlohmann::json::object()}, {"frame", nlohmann::json::object()},
          {"seeds", nlohmann::json::object()}};
}

std::string error_path(const nlohmann::json& j) {
  try {
    config_from_json(j);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "<no error>";
}

TEST(Config, DefaultsDescribeTheReferenceLink) {
  const auto c = config_from_json(minimal_config());
  EXPECT_EQ(c.grid().size(), 10u);
  EXPECT_EQ(c.link.span_count(), 84);
  EXPECT_NEAR(c.link.total_length_km(), 2032.8, 1e-9);
  EXPECT_NEAR(c.rules.z_link, 0.414, 1e-3);
  EXPECT_NEAR(c.link.amplifier.gain_db, 4.84, 1e-12);
  EXPECT_FALSE(c.link.amplifier.adds_noise());
  EXPECT_EQ(c.rules.z_sampling.size(), 2 * 83u + 1);
}

TEST(Config, ErrorsNameTheField) {
  auto j = minimal_config();
  j["link"]["beta2_ps2_per_km"] = 5.75;
  EXPECT_EQ(error_path(j), "/link/beta2_ps2_per_km");
  j = minimal_config();
  j["frame"]["symbols"] = -3;
  EXPECT_EQ(error_path(j), "/frame/symbols");
  j = minimal_config();
  j["rules"]["phase_step_rad"] = 1.0;
  EXPECT_EQ(error_path(j), "/rules/phase_step_rad");
  j = minimal_config();
  j["grid"]["sigmas"] = {1, -2};
  EXPECT_EQ(error_path(j), "/grid/sigmas/1");
  j = minimal_config();
  j.erase("seeds");
  EXPECT_EQ(error_path(j), "/seeds");
  j = minimal_config();
  j["link"]["span_km"] = 3;
  EXPECT_EQ(error_path(j), "/link/span_km");
  j = minimal_config();
  j["rules"]["strategy"] = "annealing";
  EXPECT_EQ(error_path(j), "/rules/strategy");
}

TEST(Config, JsonRoundTrip) {
  auto j = minimal_config();
  j["link"]["nf_db"] = 4.5;
  j["link"]["loops"] = 3;
  j["rules"]["z_sampling"] = "uniform";
  j["rules"]["z_samples"] = 7;
  j["frame"]["harmonics"] = 40;
  j["seeds"]["noise"] = 99;
  const auto c = config_from_json(j);
  const auto again = config_from_json(to_json(c));
  EXPECT_EQ(to_json(again), to_json(c));
  EXPECT_EQ(again.link.amplifier.nf_db, 4.5);
  EXPECT_EQ(again.receiver.detect.harmonics, 40);
  EXPECT_EQ(again.noise_seed, 99u);
}

}  // namespace
}  // namespace nfdm
