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

#include <cmath>

#include "kernels/reference.hpp"

namespace nfdm::kernels {
namespace reference {

void cmul(Complex* x, const Complex* h, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double a = x[i].real(), b = x[i].imag();
    const double c = h[i].real(), d = h[i].imag();
    x[i] = Complex(a * c - b * d, a * d + b * c);
  }
}

void kerr(Complex* x, std::size_t n, double phase_per_power, double gain) {
  for (std::size_t i = 0; i < n; ++i) {
    const double a = x[i].real(), b = x[i].imag();
    const double phi = -phase_per_power * (a * a + b * b);
    const double c = gain * std::cos(phi), s = gain * std::sin(phi);
    x[i] = Complex(a * c - b * s, a * s + b * c);
  }
}

double sum_norm(const Complex* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    acc += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return acc;
}

void norm_sq(const Complex* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    out[i] = x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
}

void darboux_step(std::size_t n, double omega, double sigma,
                         ConstEigenvectorView phi, double* q_re, double* q_im,
                         const PendingEigenvector* pending, std::size_t n_pending) {
  for (std::size_t i = 0; i < n; ++i) {
    const double a1 = phi.re1[i], b1 = phi.im1[i];
    const double a2 = phi.re2[i], b2 = phi.im2[i];
    const double m1 = a1 * a1 + b1 * b1;
    const double m2 = a2 * a2 + b2 * b2;
    const double inv = 1.0 / (m1 + m2);
    // p = phi1 conj(phi2) / n, d = (|phi1|^2 - |phi2|^2) / n
    const double pr = (a1 * a2 + b1 * b2) * inv;
    const double pi = (b1 * a2 - a1 * b2) * inv;
    const double d = (m1 - m2) * inv;
    q_re[i] += 4.0 * sigma * pr;
    q_im[i] += 4.0 * sigma * pi;

    // S11 = omega + j sigma d, S22 = omega - j sigma d,
    // S12 = 2j sigma p, S21 = 2j sigma conj(p)
    for (std::size_t k = 0; k < n_pending; ++k) {
      const EigenvectorView& v = pending[k].phi;
      const double x1r = v.re1[i], x1i = v.im1[i];
      const double x2r = v.re2[i], x2i = v.im2[i];
      const double dw = pending[k].omega - omega;
      const double ds = pending[k].sigma;
      // (lambda_j - S11) = dw + j(ds - sigma d)
      const double e1i = ds - sigma * d;
      // (lambda_j - S22) = dw + j(ds + sigma d)
      const double e2i = ds + sigma * d;
      // -S12 = -2j sigma p = 2 sigma (pi - j pr); -S21 = 2 sigma (-pi - j pr)
      const double s12r = 2.0 * sigma * pi, s12i = -2.0 * sigma * pr;
      const double s21r = -2.0 * sigma * pi, s21i = -2.0 * sigma * pr;

      double y1r = dw * x1r - e1i * x1i + s12r * x2r - s12i * x2i;
      double y1i = dw * x1i + e1i * x1r + s12r * x2i + s12i * x2r;
      double y2r = s21r * x1r - s21i * x1i + dw * x2r - e2i * x2i;
      double y2i = s21r * x1i + s21i * x1r + dw * x2i + e2i * x2r;
      const double scale =
          1.0 / std::sqrt(y1r * y1r + y1i * y1i + y2r * y2r + y2i * y2i);
      v.re1[i] = y1r * scale;
      v.im1[i] = y1i * scale;
      v.re2[i] = y2r * scale;
      v.im2[i] = y2i * scale;
    }
  }
}

}  // namespace reference

const KernelTable& scalar_table() noexcept {
  static const KernelTable table{"scalar",           reference::cmul,
                                 reference::kerr,     reference::sum_norm,
                                 reference::norm_sq,  reference::darboux_step};
  return table;
}

}  // namespace nfdm::kernels
