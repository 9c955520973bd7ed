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

#include <vector>

#include "nfdm/spectrum.hpp"

namespace nfdm {

/// Constant c in the lossless discrete-spectrum evolution
/// q_d(z) = q_d(0) * exp(c * j * lambda^2 * z), with z measured in units of
/// Z0 = T0^2 / |beta2|. Frozen from `nfdm calibrate`, which fits c by running
/// the split-step solver on a two-soliton and measuring q_d with the forward
/// transform; tests/test_calibration.cpp re-runs that oracle.
inline constexpr double kEvolutionConstant = -2.0;

struct CalibrationOptions {
  std::vector<Eigenvalue> eigenvalues{Eigenvalue(-0.5, 0.8), Eigenvalue(0.5, 0.6)};
  double z = 0.2;
  double half_width = 16.0;
  std::size_t samples = 4096;
  double dz_km = 0.1;
};

struct CalibrationReport {
  /// c from the measured phase rotation, one value per eigenvalue:
  /// log(q_d(z)/q_d(0)) / (j lambda^2 z), real part.
  std::vector<double> estimates;
  /// Candidate in {+-2, +-4} with the smallest residual.
  double selected = 0.0;
  double residual = 0.0;
  /// Max |lambda_detected - lambda| after propagation.
  double eigenvalue_drift = 0.0;
};

/// Lossless SSFM of a two-soliton over `z`, forward NFT at both ends.
CalibrationReport calibrate_evolution_constant(const CalibrationOptions& options = {});

}  // namespace nfdm
