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

#include "holoqed/kernels.hpp"

namespace holoqed::kernels {

namespace {

void cgemm_scalar(std::size_t m, std::size_t n, std::size_t k, Complex alpha, const Complex* a, const Complex* b,
                  Complex beta, Complex* c) {
  const double ar = alpha.real();
  const double ai = alpha.imag();
  const double br = beta.real();
  const double bi = beta.imag();
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) {
      double sr = 0.0;
      double si = 0.0;
      for (std::size_t p = 0; p < k; ++p) {
        const Complex x = a[p * m + i];
        const Complex y = b[j * k + p];
        sr += x.real() * y.real() - x.imag() * y.imag();
        si += x.real() * y.imag() + x.imag() * y.real();
      }
      Complex& out = c[j * m + i];
      double cr = 0.0;
      double ci = 0.0;
      if (br != 0.0 || bi != 0.0) {
        cr = br * out.real() - bi * out.imag();
        ci = br * out.imag() + bi * out.real();
      }
      out = Complex(ar * sr - ai * si + cr, ar * si + ai * sr + ci);
    }
  }
}

void axpy_scalar(std::size_t n, double a, const double* x, double* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void lincomb_scalar(std::size_t n, const double* y0, double h, const double* coef, const double* const* ks,
                    std::size_t count, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t s = 0; s < count; ++s) acc += coef[s] * ks[s][i];
    out[i] = y0[i] + h * acc;
  }
}

void hadamard_acc_scalar(std::size_t n, const double* w, const Complex* x, Complex* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] += w[i] * x[i];
}

constexpr KernelTable kScalar{cgemm_scalar, axpy_scalar, lincomb_scalar, hadamard_acc_scalar};

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

}  // namespace holoqed::kernels
