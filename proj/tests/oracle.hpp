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

// Shared helpers for the test binaries. Everything here is written
// independently of the library's propagators so it can serve as an oracle.

#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace oracle {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline Matrix random_hermitian(std::mt19937_64& rng, Eigen::Index d, double scale) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix a(d, d);
  for (Eigen::Index c = 0; c < d; ++c) {
    for (Eigen::Index r = 0; r < d; ++r) a(r, c) = Complex(n(rng), n(rng));
  }
  return scale * 0.5 * (a + a.adjoint()) / std::sqrt(double(d));
}

inline Matrix random_matrix(std::mt19937_64& rng, Eigen::Index d) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix a(d, d);
  for (Eigen::Index c = 0; c < d; ++c) {
    for (Eigen::Index r = 0; r < d; ++r) a(r, c) = Complex(n(rng), n(rng)) / std::sqrt(2.0 * double(d));
  }
  return a;
}

inline Matrix random_density(std::mt19937_64& rng, Eigen::Index d) {
  const Matrix a = random_matrix(rng, d);
  Matrix rho = a * a.adjoint();
  return rho / rho.trace();
}

/// ½·Σ|λ| of the Hermitian part of a − b.
inline double trace_distance(const Matrix& a, const Matrix& b) {
  const Matrix diff = a - b;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (diff + diff.adjoint()), Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

/// Kronecker product by explicit loops.
inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  }
  return out;
}

struct Jump {
  Matrix a;
  double rate;
};

/// Column-stacked generator of dρ/dt = i[ρ,H] + Σ (γ/2)(2AρA† − A†Aρ − ρA†A),
/// using vec(XρY) = (Yᵀ ⊗ X)·vec(ρ).
inline Matrix generator(const Matrix& h, const std::vector<Jump>& jumps) {
  const auto d = h.rows();
  const Matrix id = Matrix::Identity(d, d);
  Matrix l = Complex(0, 1) * (kron(h.transpose(), id) - kron(id, h));
  for (const auto& j : jumps) {
    const Matrix ada = j.a.adjoint() * j.a;
    l += (j.rate / 2.0) * (2.0 * kron(j.a.conjugate(), j.a) - kron(id, ada) - kron(ada.transpose(), id));
  }
  return l;
}

/// exp(A) by Taylor series with scaling and squaring.
inline Matrix expm_taylor(const Matrix& a) {
  const double norm = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  while (norm / std::ldexp(1.0, squarings) > 0.25) ++squarings;
  const Matrix x = a / std::ldexp(1.0, squarings);
  Matrix term = Matrix::Identity(a.rows(), a.cols());
  Matrix sum = term;
  for (int k = 1; k <= 30; ++k) {
    term = term * x / double(k);
    sum += term;
    if (term.cwiseAbs().maxCoeff() < 1e-18) break;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

/// exp(A) = V·e^Λ·V⁻¹ for diagonalisable A.
inline Matrix expm_eigen(const Matrix& a) {
  Eigen::ComplexEigenSolver<Matrix> es(a);
  const Matrix& v = es.eigenvectors();
  const Vector e = es.eigenvalues().array().exp();
  return v * e.asDiagonal() * v.inverse();
}

/// ρ(t) = exp(L·t)·vec(ρ₀) reshaped.
inline Matrix evolve(const Matrix& l, const Matrix& rho0, double t) {
  const auto d = rho0.rows();
  const Matrix p = expm_taylor(l * t);
  const Vector v = p * Eigen::Map<const Vector>(rho0.data(), d * d);
  return Eigen::Map<const Matrix>(v.data(), d, d);
}

}  // namespace oracle
