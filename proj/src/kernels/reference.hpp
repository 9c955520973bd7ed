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

#include "nfdm/kernels.hpp"

// Scalar reference kernels. SIMD tables call these for loop tails.
namespace nfdm::kernels::reference {

void cmul(Complex* x, const Complex* h, std::size_t n);
void kerr(Complex* x, std::size_t n, double phase_per_power, double gain);
double sum_norm(const Complex* x, std::size_t n);
void norm_sq(const Complex* x, double* out, std::size_t n);
void darboux_step(std::size_t n, double omega, double sigma, ConstEigenvectorView phi,
                  double* q_re, double* q_im, const PendingEigenvector* pending,
                  std::size_t n_pending);

}  // namespace nfdm::kernels::reference
