// Copyright 2026 The holoqed Authors
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

// AVX2/FMA variants. This translation unit is the only one compiled with
// -mavx2 -mfma; nothing here may run before dispatch has checked the CPU.

#include "holoqed/kernels.hpp"

#if defined(HOLOQED_BUILD_AVX2)

#include <immintrin.h>

namespace holoqed::kernels {

namespace {

// Two complex doubles per register: [re0, im0, re1, im1].
inline __m256d load2(const Complex* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }
inline void store2(Complex* p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double*>(p), v); }

// (re, im) · s for a broadcast complex scalar s.
inline __m256d cmul_scalar(__m256d v, __m256d s_re, __m256d s_im) {
  const __m256d swapped = _mm256_permute_pd(v, 0b0101);
  return _mm256_fmaddsub_pd(v, s_re, _mm256_mul_pd(swapped, s_im));
}

void cgemm_avx2(std::size_t m, std::size_t n, std::size_t k, Complex alpha, const Complex* a, const Complex* b,
                Complex beta, Complex* c) {
  const __m256d al_re = _mm256_set1_pd(alpha.real());
  const __m256d al_im = _mm256_set1_pd(alpha.imag());
  const __m256d be_re = _mm256_set1_pd(beta.real());
  const __m256d be_im = _mm256_set1_pd(beta.imag());
  const bool use_beta = beta != Complex(0.0);

  for (std::size_t j = 0; j < n; ++j) {
    const Complex* bcol = b + j * k;
    Complex* ccol = c + j * m;
    std::size_t i = 0;
    // Four rows at a time, accumulated as separate real/imag partial sums
    // and recombined with one addsub at the end.
    for (; i + 4 <= m; i += 4) {
      __m256d acc_r0 = _mm256_setzero_pd();
      __m256d acc_i0 = _mm256_setzero_pd();
      __m256d acc_r1 = _mm256_setzero_pd();
      __m256d acc_i1 = _mm256_setzero_pd();
      for (std::size_t p = 0; p < k; ++p) {
        const __m256d s_re = _mm256_set1_pd(bcol[p].real());
        const __m256d s_im = _mm256_set1_pd(bcol[p].imag());
        const __m256d a0 = load2(a + p * m + i);
        const __m256d a1 = load2(a + p * m + i + 2);
        acc_r0 = _mm256_fmadd_pd(a0, s_re, acc_r0);
        acc_i0 = _mm256_fmadd_pd(_mm256_permute_pd(a0, 0b0101), s_im, acc_i0);
        acc_r1 = _mm256_fmadd_pd(a1, s_re, acc_r1);
        acc_i1 = _mm256_fmadd_pd(_mm256_permute_pd(a1, 0b0101), s_im, acc_i1);
      }
      __m256d r0 = cmul_scalar(_mm256_addsub_pd(acc_r0, acc_i0), al_re, al_im);
      __m256d r1 = cmul_scalar(_mm256_addsub_pd(acc_r1, acc_i1), al_re, al_im);
      if (use_beta) {
        r0 = _mm256_add_pd(r0, cmul_scalar(load2(ccol + i), be_re, be_im));
        r1 = _mm256_add_pd(r1, cmul_scalar(load2(ccol + i + 2), be_re, be_im));
      }
      store2(ccol + i, r0);
      store2(ccol + i + 2, r1);
    }
    for (; i + 2 <= m; i += 2) {
      __m256d acc_r = _mm256_setzero_pd();
      __m256d acc_i = _mm256_setzero_pd();
      for (std::size_t p = 0; p < k; ++p) {
        const __m256d a0 = load2(a + p * m + i);
        acc_r = _mm256_fmadd_pd(a0, _mm256_set1_pd(bcol[p].real()), acc_r);
        acc_i = _mm256_fmadd_pd(_mm256_permute_pd(a0, 0b0101), _mm256_set1_pd(bcol[p].imag()), acc_i);
      }
      __m256d r = cmul_scalar(_mm256_addsub_pd(acc_r, acc_i), al_re, al_im);
      if (use_beta) r = _mm256_add_pd(r, cmul_scalar(load2(ccol + i), be_re, be_im));
      store2(ccol + i, r);
    }
    for (; i < m; ++i) {
      double sr = 0.0;
      double si = 0.0;
      for (std::size_t p = 0; p < k; ++p) {
        const Complex x = a[p * m + i];
        const Complex y = bcol[p];
        sr += x.real() * y.real() - x.imag() * y.imag();
        si += x.real() * y.imag() + x.imag() * y.real();
      }
      Complex out(alpha.real() * sr - alpha.imag() * si, alpha.real() * si + alpha.imag() * sr);
      if (use_beta) {
        const Complex old = ccol[i];
        out += Complex(beta.real() * old.real() - beta.imag() * old.imag(),
                       beta.real() * old.imag() + beta.imag() * old.real());
      }
      ccol[i] = out;
    }
  }
}

void axpy_avx2(std::size_t n, double a, const double* x, double* y) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void lincomb_avx2(std::size_t n, const double* y0, double h, const double* coef, const double* const* ks,
                  std::size_t count, double* out) {
  const __m256d vh = _mm256_set1_pd(h);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t s = 0; s < count; ++s) {
      acc = _mm256_fmadd_pd(_mm256_set1_pd(coef[s]), _mm256_loadu_pd(ks[s] + i), acc);
    }
    _mm256_storeu_pd(out + i, _mm256_fmadd_pd(vh, acc, _mm256_loadu_pd(y0 + i)));
  }
  for (; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t s = 0; s < count; ++s) acc += coef[s] * ks[s][i];
    out[i] = y0[i] + h * acc;
  }
}

void hadamard_acc_avx2(std::size_t n, const double* w, const Complex* x, Complex* y) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    // [w0, w0, w1, w1]
    const __m256d vw = _mm256_set_pd(w[i + 1], w[i + 1], w[i], w[i]);
    store2(y + i, _mm256_fmadd_pd(vw, load2(x + i), load2(y + i)));
  }
  for (; i < n; ++i) y[i] += w[i] * x[i];
}

constexpr KernelTable kAvx2{cgemm_avx2, axpy_avx2, lincomb_avx2, hadamard_acc_avx2};

}  // namespace

const KernelTable* avx2_table() noexcept { return &kAvx2; }

}  // namespace holoqed::kernels

#else

namespace holoqed::kernels {
const KernelTable* avx2_table() noexcept { return nullptr; }
}  // namespace holoqed::kernels

#endif
