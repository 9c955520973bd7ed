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

// Re-runs the evolution-constant oracle: split-step propagation of a
// two-soliton, spectral amplitudes measured at both ends.

#include <gtest/gtest.h>

#include "nfdm/calibration.hpp"

namespace nfdm {
namespace {

TEST(Calibration, SplitStepConfirmsFrozenConstant) {
  CalibrationOptions o;
  o.dz_km = 0.5;
  const auto r = calibrate_evolution_constant(o);
  EXPECT_EQ(r.selected, kEvolutionConstant);
  ASSERT_EQ(r.estimates.size(), 2u);
  for (double c : r.estimates) EXPECT_NEAR(c, kEvolutionConstant, 0.02 * std::abs(kEvolutionConstant));
  EXPECT_LT(r.residual, 0.02);
  EXPECT_LT(r.eigenvalue_drift, 1e-3);
}

}  // namespace
}  // namespace nfdm
