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

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace nfdm::kernels {

using Complex = std::complex<double>;

/// Structure-of-arrays view of one Zakharov-Shabat eigenvector
/// (phi1, phi2) sampled on a time grid.
struct EigenvectorView {
  double* re1;
  double* im1;
  double* re2;
  double* im2;
};

struct ConstEigenvectorView {
  const double* re1;
  const double* im1;
  const double* re2;
  const double* im2;
};

/// Eigenvector still waiting to be added, with its eigenvalue.
struct PendingEigenvector {
  EigenvectorView phi;
  double omega;
  double sigma;
};

/// Inner loops shared by the Darboux synthesis and the split-step solver.
/// Every entry has a scalar reference implementation; SIMD tables must agree
/// with it to rounding (see tests/test_kernels.cpp).
struct KernelTable {
  std::string_view name;

  /// x[i] *= h[i]
  void (*cmul)(Complex* x, const Complex* h, std::size_t n);

  /// x[i] *= gain * exp(-j * phase_per_power * |x[i]|^2)
  void (*kerr)(Complex* x, std::size_t n, double phase_per_power, double gain);

  /// sum |x[i]|^2
  double (*sum_norm)(const Complex* x, std::size_t n);

  /// out[i] = |x[i]|^2
  void (*norm_sq)(const Complex* x, double* out, std::size_t n);

  /// One Darboux step adding eigenvalue omega + j*sigma whose eigenvector is
  /// `phi`: q += 4 sigma phi1 conj(phi2) / (|phi1|^2 + |phi2|^2), then every
  /// pending eigenvector is mapped through (lambda_j - S) and rescaled to
  /// unit norm per sample.
  void (*darboux_step)(std::size_t n, double omega, double sigma,
                       ConstEigenvectorView phi, double* q_re, double* q_im,
                       const PendingEigenvector* pending, std::size_t n_pending);
};

const KernelTable& scalar_table() noexcept;

/// Null when the binary was built without AVX2 support or the CPU lacks it.
const KernelTable* avx2_table() noexcept;

/// Best table for this CPU. `NFDM_KERNELS=scalar` in the environment forces
/// the reference kernels.
const KernelTable& active() noexcept;

}  // namespace nfdm::kernels
