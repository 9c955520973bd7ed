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

// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include <cmath>
#include <vector>

#include "kernels/reference.hpp"

namespace nfdm::kernels {
namespace {

// Split complex pairs: v0 = [r0 i0 r1 i1], v1 = [r2 i2 r3 i3] ->
// re = [r0 r2 r1 r3], im = [i0 i2 i1 i3]. interleave() undoes it.
inline void deinterleave(__m256d v0, __m256d v1, __m256d& re, __m256d& im) {
  re = _mm256_unpacklo_pd(v0, v1);
  im = _mm256_unpackhi_pd(v0, v1);
}

inline void interleave(__m256d re, __m256d im, __m256d& v0, __m256d& v1) {
  v0 = _mm256_unpacklo_pd(re, im);
  v1 = _mm256_unpackhi_pd(re, im);
}

// sin and cos of 4 doubles. Reduction by nearest multiple of pi/2 with a
// three-part constant, then minimax polynomials on [-pi/4, pi/4]. Accurate
// to a few ulp for |x| < 2^20, which covers every Kerr phase we produce.
inline void sincos4(__m256d x, __m256d& s_out, __m256d& c_out) {
  const __m256d two_over_pi = _mm256_set1_pd(0.63661977236758134308);
  const __m256d pio2_1 = _mm256_set1_pd(1.57079632673412561417e+00);
  const __m256d pio2_2 = _mm256_set1_pd(6.07710050630396597660e-11);
  const __m256d pio2_2t = _mm256_set1_pd(2.02226624879595063154e-21);

  const __m256d k = _mm256_round_pd(_mm256_mul_pd(x, two_over_pi),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(k, pio2_1, x);
  r = _mm256_fnmadd_pd(k, pio2_2, r);
  r = _mm256_fnmadd_pd(k, pio2_2t, r);
  const __m256d z = _mm256_mul_pd(r, r);

  __m256d ps = _mm256_set1_pd(1.58969099521155010221e-10);
  ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(-2.50507602534068634195e-08));
  ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(2.75573137070700676789e-06));
  ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(-1.98412698298579493134e-04));
  ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(8.33333333332248946124e-03));
  ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(-1.66666666666666324348e-01));
  const __m256d sin_r = _mm256_fmadd_pd(_mm256_mul_pd(r, z), ps, r);

  __m256d pc = _mm256_set1_pd(-1.13596475577881948265e-11);
  pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(2.08757232129817482790e-09));
  pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(-2.75573143513906633035e-07));
  pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(2.48015872894767294178e-05));
  pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(-1.38888888888741095749e-03));
  pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(4.16666666666666019037e-02));
  const __m256d z2 = _mm256_mul_pd(z, z);
  const __m256d cos_r = _mm256_fmadd_pd(
      z2, pc, _mm256_fnmadd_pd(_mm256_set1_pd(0.5), z, _mm256_set1_pd(1.0)));

  // quadrant = k mod 4 in {0,1,2,3}
  const __m256d quarter = _mm256_set1_pd(0.25);
  const __m256d four = _mm256_set1_pd(4.0);
  const __m256d q = _mm256_fnmadd_pd(
      _mm256_floor_pd(_mm256_mul_pd(k, quarter)), four, k);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d two = _mm256_set1_pd(2.0);
  const __m256d three = _mm256_set1_pd(3.0);
  const __m256d odd = _mm256_or_pd(_mm256_cmp_pd(q, one, _CMP_EQ_OQ),
                                   _mm256_cmp_pd(q, three, _CMP_EQ_OQ));
  const __m256d sin_neg = _mm256_cmp_pd(q, two, _CMP_GE_OQ);
  const __m256d cos_neg = _mm256_or_pd(_mm256_cmp_pd(q, one, _CMP_EQ_OQ),
                                       _mm256_cmp_pd(q, two, _CMP_EQ_OQ));
  const __m256d sign_bit = _mm256_set1_pd(-0.0);
  __m256d s = _mm256_blendv_pd(sin_r, cos_r, odd);
  __m256d c = _mm256_blendv_pd(cos_r, sin_r, odd);
  s = _mm256_xor_pd(s, _mm256_and_pd(sin_neg, sign_bit));
  c = _mm256_xor_pd(c, _mm256_and_pd(cos_neg, sign_bit));
  s_out = s;
  c_out = c;
}

void cmul_avx2(Complex* x, const Complex* h, std::size_t n) {
  double* xd = reinterpret_cast<double*>(x);
  const double* hd = reinterpret_cast<const double*>(h);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d a = _mm256_loadu_pd(xd + 2 * i);
    const __m256d b = _mm256_loadu_pd(hd + 2 * i);
    const __m256d b_re = _mm256_movedup_pd(b);          // [c0 c0 c1 c1]
    const __m256d b_im = _mm256_permute_pd(b, 0b1111);  // [d0 d0 d1 d1]
    const __m256d a_sw = _mm256_permute_pd(a, 0b0101);  // [ai0 ar0 ai1 ar1]
    // (ar + j ai)(c + j d) = (ar c - ai d) + j(ai c + ar d)
    const __m256d res = _mm256_fmaddsub_pd(a, b_re, _mm256_mul_pd(a_sw, b_im));
    _mm256_storeu_pd(xd + 2 * i, res);
  }
  reference::cmul(x + i, h + i, n - i);
}

void kerr_avx2(Complex* x, std::size_t n, double phase_per_power, double gain) {
  double* xd = reinterpret_cast<double*>(x);
  const __m256d neg_k = _mm256_set1_pd(-phase_per_power);
  const __m256d g = _mm256_set1_pd(gain);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d re, im;
    deinterleave(_mm256_loadu_pd(xd + 2 * i), _mm256_loadu_pd(xd + 2 * i + 4), re, im);
    const __m256d p = _mm256_fmadd_pd(re, re, _mm256_mul_pd(im, im));
    __m256d s, c;
    sincos4(_mm256_mul_pd(neg_k, p), s, c);
    s = _mm256_mul_pd(s, g);
    c = _mm256_mul_pd(c, g);
    const __m256d out_re = _mm256_fmsub_pd(re, c, _mm256_mul_pd(im, s));
    const __m256d out_im = _mm256_fmadd_pd(re, s, _mm256_mul_pd(im, c));
    __m256d v0, v1;
    interleave(out_re, out_im, v0, v1);
    _mm256_storeu_pd(xd + 2 * i, v0);
    _mm256_storeu_pd(xd + 2 * i + 4, v1);
  }
  reference::kerr(x + i, n - i, phase_per_power, gain);
}

double sum_norm_avx2(const Complex* x, std::size_t n) {
  const double* xd = reinterpret_cast<const double*>(x);
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_loadu_pd(xd + 2 * i);
    const __m256d b = _mm256_loadu_pd(xd + 2 * i + 4);
    acc0 = _mm256_fmadd_pd(a, a, acc0);
    acc1 = _mm256_fmadd_pd(b, b, acc1);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, _mm256_add_pd(acc0, acc1));
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]) +
         reference::sum_norm(x + i, n - i);
}

void norm_sq_avx2(const Complex* x, double* out, std::size_t n) {
  const double* xd = reinterpret_cast<const double*>(x);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d re, im;
    deinterleave(_mm256_loadu_pd(xd + 2 * i), _mm256_loadu_pd(xd + 2 * i + 4), re, im);
    const __m256d p = _mm256_fmadd_pd(re, re, _mm256_mul_pd(im, im));
    // p lanes are ordered [0 2 1 3]
    _mm256_storeu_pd(out + i, _mm256_permute4x64_pd(p, 0b11011000));
  }
  reference::norm_sq(x + i, out + i, n - i);
}

void darboux_step_avx2(std::size_t n, double omega, double sigma,
                       ConstEigenvectorView phi, double* q_re, double* q_im,
                       const PendingEigenvector* pending, std::size_t n_pending) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d four_sigma = _mm256_set1_pd(4.0 * sigma);
  const __m256d two_sigma = _mm256_set1_pd(2.0 * sigma);
  const __m256d vsigma = _mm256_set1_pd(sigma);
  const __m256d sign_bit = _mm256_set1_pd(-0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a1 = _mm256_loadu_pd(phi.re1 + i), b1 = _mm256_loadu_pd(phi.im1 + i);
    const __m256d a2 = _mm256_loadu_pd(phi.re2 + i), b2 = _mm256_loadu_pd(phi.im2 + i);
    const __m256d m1 = _mm256_fmadd_pd(a1, a1, _mm256_mul_pd(b1, b1));
    const __m256d m2 = _mm256_fmadd_pd(a2, a2, _mm256_mul_pd(b2, b2));
    const __m256d inv = _mm256_div_pd(one, _mm256_add_pd(m1, m2));
    const __m256d pr = _mm256_mul_pd(_mm256_fmadd_pd(a1, a2, _mm256_mul_pd(b1, b2)), inv);
    const __m256d pi = _mm256_mul_pd(_mm256_fmsub_pd(b1, a2, _mm256_mul_pd(a1, b2)), inv);
    const __m256d d = _mm256_mul_pd(_mm256_sub_pd(m1, m2), inv);
    _mm256_storeu_pd(q_re + i, _mm256_fmadd_pd(four_sigma, pr, _mm256_loadu_pd(q_re + i)));
    _mm256_storeu_pd(q_im + i, _mm256_fmadd_pd(four_sigma, pi, _mm256_loadu_pd(q_im + i)));

    const __m256d sd = _mm256_mul_pd(vsigma, d);
    const __m256d s12r = _mm256_mul_pd(two_sigma, pi);
    const __m256d s12i = _mm256_xor_pd(_mm256_mul_pd(two_sigma, pr), sign_bit);
    const __m256d s21r = _mm256_xor_pd(s12r, sign_bit);
    const __m256d s21i = s12i;

    for (std::size_t k = 0; k < n_pending; ++k) {
      const EigenvectorView& v = pending[k].phi;
      const __m256d x1r = _mm256_loadu_pd(v.re1 + i), x1i = _mm256_loadu_pd(v.im1 + i);
      const __m256d x2r = _mm256_loadu_pd(v.re2 + i), x2i = _mm256_loadu_pd(v.im2 + i);
      const __m256d dw = _mm256_set1_pd(pending[k].omega - omega);
      const __m256d ds = _mm256_set1_pd(pending[k].sigma);
      const __m256d e1i = _mm256_sub_pd(ds, sd);
      const __m256d e2i = _mm256_add_pd(ds, sd);

      __m256d y1r = _mm256_fmsub_pd(dw, x1r, _mm256_mul_pd(e1i, x1i));
      y1r = _mm256_fmadd_pd(s12r, x2r, y1r);
      y1r = _mm256_fnmadd_pd(s12i, x2i, y1r);
      __m256d y1i = _mm256_fmadd_pd(dw, x1i, _mm256_mul_pd(e1i, x1r));
      y1i = _mm256_fmadd_pd(s12r, x2i, y1i);
      y1i = _mm256_fmadd_pd(s12i, x2r, y1i);
      __m256d y2r = _mm256_fmsub_pd(s21r, x1r, _mm256_mul_pd(s21i, x1i));
      y2r = _mm256_fmadd_pd(dw, x2r, y2r);
      y2r = _mm256_fnmadd_pd(e2i, x2i, y2r);
      __m256d y2i = _mm256_fmadd_pd(s21r, x1i, _mm256_mul_pd(s21i, x1r));
      y2i = _mm256_fmadd_pd(dw, x2i, y2i);
      y2i = _mm256_fmadd_pd(e2i, x2r, y2i);

      __m256d nrm = _mm256_mul_pd(y1r, y1r);
      nrm = _mm256_fmadd_pd(y1i, y1i, nrm);
      nrm = _mm256_fmadd_pd(y2r, y2r, nrm);
      nrm = _mm256_fmadd_pd(y2i, y2i, nrm);
      const __m256d scale = _mm256_div_pd(one, _mm256_sqrt_pd(nrm));
      _mm256_storeu_pd(v.re1 + i, _mm256_mul_pd(y1r, scale));
      _mm256_storeu_pd(v.im1 + i, _mm256_mul_pd(y1i, scale));
      _mm256_storeu_pd(v.re2 + i, _mm256_mul_pd(y2r, scale));
      _mm256_storeu_pd(v.im2 + i, _mm256_mul_pd(y2i, scale));
    }
  }
  if (i < n) {
    const ConstEigenvectorView tail{phi.re1 + i, phi.im1 + i, phi.re2 + i, phi.im2 + i};
    std::vector<PendingEigenvector> shifted(pending, pending + n_pending);
    for (auto& p : shifted) p.phi = {p.phi.re1 + i, p.phi.im1 + i, p.phi.re2 + i, p.phi.im2 + i};
    reference::darboux_step(n - i, omega, sigma, tail, q_re + i, q_im + i, shifted.data(),
                            shifted.size());
  }
}

}  // namespace

const KernelTable* avx2_table_impl() noexcept {
  static const KernelTable table{"avx2",        cmul_avx2,    kerr_avx2,
                                 sum_norm_avx2, norm_sq_avx2, darboux_step_avx2};
  return &table;
}

}  // namespace nfdm::kernels
