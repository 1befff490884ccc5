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

#pragma once

// Hot inner loops of the propagators. Every kernel has a portable scalar
// reference implementation and, on x86-64, an AVX2/FMA variant compiled in a
// separate translation unit. The variant is chosen once at startup from CPU
// feature detection and can be overridden for equivalence testing.
//
// Layout conventions: complex matrices are column-major with leading
// dimension equal to the row count (Eigen's default), complex values are
// interleaved (re, im) doubles.

#include <complex>
#include <cstddef>
#include <string_view>

namespace holoqed::kernels {

using Complex = std::complex<double>;

enum class Backend { Scalar, Avx2 };

struct KernelTable {
  /// C(m×n) = alpha · A(m×k) · B(k×n) + beta · C. C must not alias A or B.
  void (*cgemm)(std::size_t m, std::size_t n, std::size_t k, Complex alpha, const Complex* a, const Complex* b,
                Complex beta, Complex* c);
  /// y[i] += a · x[i] over real arrays of length n.
  void (*axpy)(std::size_t n, double a, const double* x, double* y);
  /// out[i] = y0[i] + h · Σ_s coef[s] · ks[s][i] over real arrays of length n.
  void (*lincomb)(std::size_t n, const double* y0, double h, const double* coef, const double* const* ks,
                  std::size_t count, double* out);
  /// y[i] += w[i] · x[i] for complex x, y and real weights w (length n complex entries).
  void (*hadamard_acc)(std::size_t n, const double* w, const Complex* x, Complex* y);
};

const KernelTable& scalar_table() noexcept;
/// Null when the binary was built without AVX2 support.
const KernelTable* avx2_table() noexcept;

bool cpu_supports(Backend backend) noexcept;
/// Throws std::invalid_argument if the backend is not usable on this CPU.
void select(Backend backend);
Backend active_backend() noexcept;
const KernelTable& active() noexcept;
std::string_view name(Backend backend) noexcept;

}  // namespace holoqed::kernels
