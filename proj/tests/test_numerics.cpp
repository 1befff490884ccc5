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

#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "holoqed/error.hpp"
#include "holoqed/integrator.hpp"
#include "holoqed/kernels.hpp"

namespace k = holoqed::kernels;
using Complex = std::complex<double>;

namespace {

std::vector<Complex> random_complex(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> d(0.0, 1.0);
  std::vector<Complex> v(n);
  for (auto& x : v) x = Complex(d(rng), d(rng));
  return v;
}

std::vector<double> random_real(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> d(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

double max_diff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_SUITE("kernels") {
  TEST_CASE("scalar cgemm against a naive triple loop") {
    std::mt19937_64 rng(21);
    const auto& s = k::scalar_table();
    for (auto [m, n, kk] : {std::array<std::size_t, 3>{1, 1, 1}, {3, 5, 2}, {15, 15, 15}, {27, 27, 27}}) {
      const auto a = random_complex(rng, m * kk);
      const auto b = random_complex(rng, kk * n);
      auto c = random_complex(rng, m * n);
      auto ref = c;
      const Complex alpha(0.3, -1.1), beta(0.5, 0.25);
      // column-major storage
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < m; ++i) {
          Complex acc = 0.0;
          for (std::size_t p = 0; p < kk; ++p) acc += a[i + p * m] * b[p + j * kk];
          ref[i + j * m] = alpha * acc + beta * ref[i + j * m];
        }
      }
      s.cgemm(m, n, kk, alpha, a.data(), b.data(), beta, c.data());
      CHECK(max_diff(c, ref) < 1e-12);
    }
  }

  TEST_CASE("avx2 kernels match the scalar reference") {
    const auto* v = k::avx2_table();
    if (v == nullptr || !k::cpu_supports(k::Backend::Avx2)) {
      MESSAGE("AVX2 unavailable on this host; equivalence not exercised");
      return;
    }
    const auto& s = k::scalar_table();
    std::mt19937_64 rng(22);

    for (std::size_t d : {1u, 2u, 3u, 5u, 8u, 15u, 16u, 27u, 33u}) {
      const auto a = random_complex(rng, d * d);
      const auto b = random_complex(rng, d * d);
      auto c1 = random_complex(rng, d * d);
      auto c2 = c1;
      s.cgemm(d, d, d, Complex(0, -1), a.data(), b.data(), Complex(1, 0), c1.data());
      v->cgemm(d, d, d, Complex(0, -1), a.data(), b.data(), Complex(1, 0), c2.data());
      CHECK(max_diff(c1, c2) < 1e-12);

      // rectangular with beta = 0 must ignore stale output
      auto r1 = std::vector<Complex>(d * 3, Complex(std::nan(""), 0));
      auto r2 = r1;
      s.cgemm(d, 3, d, Complex(1, 0), a.data(), b.data(), Complex(0, 0), r1.data());
      v->cgemm(d, 3, d, Complex(1, 0), a.data(), b.data(), Complex(0, 0), r2.data());
      CHECK(max_diff(r1, r2) < 1e-12);
    }

    for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 450u, 1458u}) {
      const auto x = random_real(rng, n);
      auto y1 = random_real(rng, n);
      auto y2 = y1;
      s.axpy(n, -0.7, x.data(), y1.data());
      v->axpy(n, -0.7, x.data(), y2.data());
      CHECK(max_diff(y1, y2) < 1e-15);

      std::vector<std::vector<double>> ks;
      std::vector<const double*> ptrs;
      std::vector<double> coef;
      for (int st = 0; st < 12; ++st) {
        ks.push_back(random_real(rng, n));
        coef.push_back(random_real(rng, 1)[0]);
      }
      for (auto& kv : ks) ptrs.push_back(kv.data());
      const auto y0 = random_real(rng, n);
      for (std::size_t count : {1u, 5u, 12u}) {
        std::vector<double> o1(n), o2(n);
        s.lincomb(n, y0.data(), 0.013, coef.data(), ptrs.data(), count, o1.data());
        v->lincomb(n, y0.data(), 0.013, coef.data(), ptrs.data(), count, o2.data());
        CHECK(max_diff(o1, o2) < 1e-14);
      }

      const auto w = random_real(rng, n);
      const auto xc = random_complex(rng, n);
      auto a1 = random_complex(rng, n);
      auto a2 = a1;
      s.hadamard_acc(n, w.data(), xc.data(), a1.data());
      v->hadamard_acc(n, w.data(), xc.data(), a2.data());
      CHECK(max_diff(a1, a2) < 1e-15);
    }
  }

  TEST_CASE("backend selection") {
    const auto before = k::active_backend();
    k::select(k::Backend::Scalar);
    CHECK(k::active_backend() == k::Backend::Scalar);
    CHECK(&k::active() == &k::scalar_table());
    if (k::cpu_supports(k::Backend::Avx2)) {
      k::select(k::Backend::Avx2);
      CHECK(k::active_backend() == k::Backend::Avx2);
    } else {
      CHECK_THROWS(k::select(k::Backend::Avx2));
    }
    k::select(before);
    CHECK(k::name(k::Backend::Scalar) == "scalar");
  }
}

TEST_SUITE("integrator") {
  TEST_CASE("harmonic oscillator to tight tolerance") {
    // y'' = −ω²y as a first-order system; exact solution cos, −ω sin
    const double w = 3.7;
    holoqed::Dop853 ode(2, [w](double, const double* y, double* dy) {
      dy[0] = y[1];
      dy[1] = -w * w * y[0];
    }, holoqed::StepControl{1e-12, 1e-14, 0.01, 0.0, 1'000'000});
    std::vector<double> y{1.0, 0.0};
    std::vector<double> stops{0.5, 1.0, 10.0};
    std::vector<double> seen;
    ode.integrate(0.0, y, stops, [&](std::size_t i, double t, const double* yy) {
      CHECK(t == stops[i]);
      CHECK(std::abs(yy[0] - std::cos(w * t)) < 1e-9);
      seen.push_back(t);
    });
    CHECK(seen.size() == 3);
    CHECK(std::abs(y[0] - std::cos(w * 10.0)) < 1e-9);
    CHECK(std::abs(y[1] + w * std::sin(w * 10.0)) < 1e-8);
    CHECK(ode.stats().accepted > 0);
  }

  TEST_CASE("error scales with tolerance") {
    auto run = [](double rtol) {
      holoqed::Dop853 ode(1, [](double t, const double* y, double* dy) { dy[0] = y[0] * std::cos(t); },
                          holoqed::StepControl{rtol, rtol * 1e-2, 0.01, 0.0, 1'000'000});
      std::vector<double> y{1.0};
      std::vector<double> stops{20.0};
      ode.integrate(0.0, y, stops, {});
      return std::abs(y[0] - std::exp(std::sin(20.0)));
    };
    const double e6 = run(1e-6);
    const double e10 = run(1e-10);
    CHECK(e10 < e6);
    CHECK(e10 < 1e-8);
  }

  TEST_CASE("stop at the start time is reported") {
    holoqed::Dop853 ode(1, [](double, const double*, double* dy) { dy[0] = 1.0; }, {});
    std::vector<double> y{0.0};
    std::vector<double> stops{0.0, 2.0};
    int calls = 0;
    ode.integrate(0.0, y, stops, [&](std::size_t, double, const double*) { ++calls; });
    CHECK(calls == 2);
    CHECK(std::abs(y[0] - 2.0) < 1e-12);
  }

  TEST_CASE("blow-up triggers step underflow") {
    // y' = y², y(0) = 1 diverges at t = 1
    holoqed::Dop853 ode(1, [](double, const double* y, double* dy) { dy[0] = y[0] * y[0]; },
                        holoqed::StepControl{1e-10, 1e-12, 0.01, 0.0, 10'000'000});
    std::vector<double> y{1.0};
    std::vector<double> stops{2.0};
    try {
      ode.integrate(0.0, y, stops, {});
      FAIL("expected a propagation error");
    } catch (const holoqed::PropagationError& e) {
      CHECK(e.kind() == holoqed::PropagationError::Kind::StepUnderflow);
    }
  }

  TEST_CASE("step budget is enforced") {
    holoqed::Dop853 ode(1, [](double t, const double*, double* dy) { dy[0] = std::cos(100.0 * t); },
                        holoqed::StepControl{1e-12, 1e-14, 0.001, 0.0, 10});
    std::vector<double> y{0.0};
    std::vector<double> stops{100.0};
    try {
      ode.integrate(0.0, y, stops, {});
      FAIL("expected a propagation error");
    } catch (const holoqed::PropagationError& e) {
      CHECK(e.kind() == holoqed::PropagationError::Kind::StepLimit);
    }
  }

  TEST_CASE("rejects descending stops") {
    holoqed::Dop853 ode(1, [](double, const double*, double* dy) { dy[0] = 0.0; }, {});
    std::vector<double> y{0.0};
    std::vector<double> stops{2.0, 1.0};
    CHECK_THROWS(ode.integrate(0.0, y, stops, {}));
  }
}
