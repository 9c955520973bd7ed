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

#include "nfdm/calibration.hpp"

#include <cmath>
#include <limits>

#include "nfdm/darboux.hpp"
#include "nfdm/errors.hpp"
#include "nfdm/fc_nft.hpp"
#include "nfdm/ssfm.hpp"

namespace nfdm {

CalibrationReport calibrate_evolution_constant(const CalibrationOptions& options) {
  if (options.eigenvalues.empty()) throw DomainError("calibrate: no eigenvalues");
  if (!(options.z > 0.0)) throw DomainError("calibrate: z must be positive");

  const auto grid = TimeGrid::centered(options.half_width, options.samples);
  const auto start = synthesize(options.eigenvalues,
                                DarbouxConstants::unit(options.eigenvalues.size()), grid);

  // Lossless span exactly z long on the default fiber.
  LinkProfile link;
  FiberSpan span = link.span;
  span.alpha_db_per_km = 0.0;
  span.length_km = link.normalization.to_meters(options.z) * 1e-3;
  const auto end = propagate_span(start, span, link.normalization,
                                  std::min(options.dz_km, span.length_km));

  CalibrationReport report;
  std::vector<Complex> ratio;
  for (const auto& l : options.eigenvalues) {
    const Complex before = spectral_amplitude(start, l);
    const Complex moved = refine_eigenvalue(end, l.value());
    report.eigenvalue_drift = std::max(report.eigenvalue_drift, std::abs(moved - l.value()));
    const Complex after = spectral_amplitude(end, Eigenvalue::from_complex(moved));
    ratio.push_back(after / before);
    // |r| = exp(-c Im(lambda^2) z) fixes c without phase unwrapping.
    const double im_l2 = 2.0 * l.omega() * l.sigma();
    report.estimates.push_back(im_l2 != 0.0 ? -std::log(std::abs(ratio.back())) / (im_l2 * options.z)
                                            : std::numeric_limits<double>::quiet_NaN());
  }

  report.residual = std::numeric_limits<double>::infinity();
  for (double c : {-4.0, -2.0, 2.0, 4.0}) {
    double worst = 0.0;
    for (std::size_t i = 0; i < ratio.size(); ++i) {
      const Complex expect = evolution_factor(options.eigenvalues[i], options.z, c);
      worst = std::max(worst, std::abs(ratio[i] / expect - 1.0));
    }
    if (worst < report.residual) {
      report.residual = worst;
      report.selected = c;
    }
  }
  return report;
}

}  // namespace nfdm
