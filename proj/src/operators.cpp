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

#include "holoqed/operators.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "holoqed/error.hpp"

namespace holoqed {

namespace {

void require_same_space(const HilbertSpace& a, const HilbertSpace& b, const char* what) {
  if (a != b) {
    throw SpaceMismatch(std::string(what) + ": " + a.describe() + " vs " + b.describe());
  }
}

bool all_finite(const Matrix& m) {
  return m.allFinite();
}

}  // namespace

// ---------------------------------------------------------------------------
// OperatorMatrix

OperatorMatrix::OperatorMatrix(HilbertSpace space, Matrix entries)
    : space_(std::move(space)), entries_(std::move(entries)) {
  const auto d = Eigen::Index(space_.dimension());
  if (entries_.rows() != d || entries_.cols() != d) {
    throw SpaceMismatch("operator of shape " + std::to_string(entries_.rows()) + "x" +
                        std::to_string(entries_.cols()) + " does not match space " + space_.describe());
  }
}

OperatorMatrix OperatorMatrix::identity(const HilbertSpace& space) {
  const auto d = Eigen::Index(space.dimension());
  return OperatorMatrix(space, Matrix::Identity(d, d));
}

OperatorMatrix OperatorMatrix::zero(const HilbertSpace& space) {
  const auto d = Eigen::Index(space.dimension());
  return OperatorMatrix(space, Matrix::Zero(d, d));
}

OperatorMatrix OperatorMatrix::adjoint() const { return OperatorMatrix(space_, entries_.adjoint()); }

double OperatorMatrix::max_abs() const {
  return entries_.size() == 0 ? 0.0 : entries_.cwiseAbs().maxCoeff();
}

bool OperatorMatrix::is_hermitian(double rel_tol) const {
  const double scale = max_abs();
  if (scale == 0.0) return true;
  const double asym = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
  return asym <= rel_tol * scale;
}

OperatorMatrix OperatorMatrix::operator+(const OperatorMatrix& rhs) const {
  require_same_space(space_, rhs.space_, "operator sum");
  return OperatorMatrix(space_, entries_ + rhs.entries_);
}

OperatorMatrix OperatorMatrix::operator-(const OperatorMatrix& rhs) const {
  require_same_space(space_, rhs.space_, "operator difference");
  return OperatorMatrix(space_, entries_ - rhs.entries_);
}

OperatorMatrix OperatorMatrix::operator*(const OperatorMatrix& rhs) const {
  require_same_space(space_, rhs.space_, "operator product");
  return OperatorMatrix(space_, entries_ * rhs.entries_);
}

OperatorMatrix OperatorMatrix::operator*(Complex s) const { return OperatorMatrix(space_, entries_ * s); }

// ---------------------------------------------------------------------------
// States

StateVector::StateVector(HilbertSpace space, Vector amplitudes)
    : space_(std::move(space)), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != Eigen::Index(space_.dimension())) {
    throw SpaceMismatch("state vector length does not match space " + space_.describe());
  }
  if (!amplitudes_.allFinite()) throw NumericalError("state vector has non-finite amplitudes");
  if (std::abs(amplitudes_.norm() - 1.0) > 1e-10) {
    throw NumericalError("state vector is not normalized (norm " + std::to_string(amplitudes_.norm()) + ")");
  }
}

StateVector StateVector::normalized(HilbertSpace space, Vector amplitudes) {
  const double n = amplitudes.norm();
  if (!(n > 0.0)) throw NumericalError("cannot normalize a zero vector");
  return StateVector(std::move(space), amplitudes / n);
}

StateVector StateVector::basis(const HilbertSpace& space, std::size_t flat_index) {
  if (flat_index >= space.dimension()) throw InvalidDimension("basis index out of range");
  Vector v = Vector::Zero(Eigen::Index(space.dimension()));
  v(Eigen::Index(flat_index)) = 1.0;
  return StateVector(space, std::move(v));
}

Complex StateVector::inner(const StateVector& other) const {
  require_same_space(space_, other.space_, "inner product");
  return amplitudes_.dot(other.amplitudes_);
}

Matrix StateVector::projector() const { return amplitudes_ * amplitudes_.adjoint(); }

DensityMatrix::DensityMatrix(HilbertSpace space, Matrix entries)
    : space_(std::move(space)), entries_(std::move(entries)) {
  const auto d = Eigen::Index(space_.dimension());
  if (entries_.rows() != d || entries_.cols() != d) {
    throw SpaceMismatch("density matrix shape does not match space " + space_.describe());
  }
  if (!all_finite(entries_)) throw NumericalError("density matrix has non-finite entries");
  const double scale = std::max(1.0, entries_.cwiseAbs().maxCoeff());
  if ((entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw NumericalError("density matrix is not Hermitian");
  }
  if (std::abs(entries_.trace() - Complex(1.0)) > 1e-8) {
    throw NumericalError("density matrix trace differs from 1");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(entries_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-8) {
    throw NumericalError("density matrix has a negative eigenvalue");
  }
}

DensityMatrix DensityMatrix::from_state(const StateVector& psi) {
  return DensityMatrix(psi.space(), psi.projector());
}

DensityMatrix DensityMatrix::maximally_mixed(const HilbertSpace& space) {
  const auto d = Eigen::Index(space.dimension());
  return DensityMatrix(space, Matrix::Identity(d, d) / double(d));
}

// ---------------------------------------------------------------------------
// Constructors

OperatorMatrix annihilation(std::size_t cutoff, std::string label) {
  if (cutoff < 2) throw InvalidDimension("Fock cutoff must be at least 2, got " + std::to_string(cutoff));
  auto space = HilbertSpace::single(std::move(label), cutoff, FactorKind::Fock);
  const auto d = Eigen::Index(cutoff);
  Matrix a = Matrix::Zero(d, d);
  for (Eigen::Index n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(double(n));
  return OperatorMatrix(std::move(space), std::move(a));
}

TransmonOperators transmon_ops(std::size_t levels, std::string label) {
  if (levels != 2 && levels != 3) {
    throw UnsupportedDimension("transmon model supports 2 or 3 levels, got " + std::to_string(levels));
  }
  auto space = HilbertSpace::single(std::move(label), levels, FactorKind::Transmon);
  const auto d = Eigen::Index(levels);
  auto ket_bra = [&](Eigen::Index r, Eigen::Index c) {
    Matrix m = Matrix::Zero(d, d);
    m(r, c) = 1.0;
    return m;
  };
  auto sigmaz = [&](Eigen::Index j) { return Matrix(ket_bra(j + 1, j + 1) - ket_bra(j, j)); };

  std::vector<OperatorMatrix> projectors;
  Matrix number = Matrix::Zero(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    projectors.emplace_back(space, ket_bra(j, j));
    number(j, j) = double(j);
  }
  TransmonOperators ops{space,
                        OperatorMatrix(space, ket_bra(0, 1)),
                        std::nullopt,
                        OperatorMatrix(space, sigmaz(0)),
                        std::nullopt,
                        std::move(projectors),
                        OperatorMatrix(space, number)};
  if (levels == 3) {
    ops.lower12 = OperatorMatrix(space, ket_bra(1, 2));
    ops.sigmaz12 = OperatorMatrix(space, sigmaz(1));
  }
  return ops;
}

Matrix kron(const Matrix& a, const Matrix& b) { return Eigen::kroneckerProduct(a, b).eval(); }

OperatorMatrix embed(const OperatorMatrix& op, const HilbertSpace& target_space, const std::string& factor_label) {
  const auto pos = target_space.index_of(factor_label);
  const auto& factors = target_space.factors();
  if (op.dimension() != factors[pos].dimension) {
    throw SpaceMismatch("operator dimension " + std::to_string(op.dimension()) + " does not match factor '" +
                        factor_label + "' of dimension " + std::to_string(factors[pos].dimension));
  }
  std::size_t before = 1;
  std::size_t after = 1;
  for (std::size_t i = 0; i < pos; ++i) before *= factors[i].dimension;
  for (std::size_t i = pos + 1; i < factors.size(); ++i) after *= factors[i].dimension;

  const auto d = Eigen::Index(op.dimension());
  const auto n_after = Eigen::Index(after);
  const auto D = Eigen::Index(target_space.dimension());
  Matrix out = Matrix::Zero(D, D);
  // (I_before ⊗ op ⊗ I_after): entry ((b, r, a), (b, c, a)) = op(r, c).
  for (Eigen::Index b = 0; b < Eigen::Index(before); ++b) {
    for (Eigen::Index r = 0; r < d; ++r) {
      for (Eigen::Index c = 0; c < d; ++c) {
        const Complex v = op.matrix()(r, c);
        if (v == Complex(0.0)) continue;
        for (Eigen::Index a = 0; a < n_after; ++a) {
          out((b * d + r) * n_after + a, (b * d + c) * n_after + a) = v;
        }
      }
    }
  }
  return OperatorMatrix(target_space, std::move(out));
}

DressedBasis dressed_basis(double g0, double omega_c, const HilbertSpace& space) {
  const auto iq = space.unique_index_of(FactorKind::Transmon);
  const auto ic = space.unique_index_of(FactorKind::Fock);
  if (space.factors()[ic].dimension < 2) throw InvalidDimension("Fock cutoff must be at least 2");

  auto product_state = [&](std::size_t q, std::size_t c) {
    std::vector<std::size_t> levels(space.size(), 0);
    levels[iq] = q;
    levels[ic] = c;
    return space.flat_index(levels);
  };
  const auto d = Eigen::Index(space.dimension());
  const double r = 1.0 / std::sqrt(2.0);
  Vector g = Vector::Zero(d);
  Vector minus = Vector::Zero(d);
  Vector plus = Vector::Zero(d);
  g(Eigen::Index(product_state(0, 0))) = 1.0;
  minus(Eigen::Index(product_state(0, 1))) = r;
  minus(Eigen::Index(product_state(1, 0))) = -r;
  plus(Eigen::Index(product_state(0, 1))) = r;
  plus(Eigen::Index(product_state(1, 0))) = r;
  return DressedBasis{StateVector(space, g),
                      StateVector(space, minus),
                      StateVector(space, plus),
                      0.0,
                      omega_c - g0,
                      omega_c + g0};
}

// ---------------------------------------------------------------------------
// Matrix functions

Matrix expm(const Matrix& a) {
  if (a.rows() != a.cols()) throw SpaceMismatch("matrix exponential of a non-square matrix");
  if (!all_finite(a)) throw NumericalError("matrix exponential of a matrix with non-finite entries");
  return a.exp();
}

OperatorMatrix matrix_exponential(const OperatorMatrix& a) { return OperatorMatrix(a.space(), expm(a.matrix())); }

Matrix partial_trace(const Matrix& rho, const HilbertSpace& space, const std::vector<std::string>& keep,
                     HilbertSpace* kept_space) {
  const auto& factors = space.factors();
  std::vector<bool> kept(factors.size(), false);
  for (const auto& label : keep) kept[space.index_of(label)] = true;

  std::vector<Factor> kept_factors;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (kept[i]) kept_factors.push_back(factors[i]);
  }
  HilbertSpace reduced(kept_factors);
  const auto dk = Eigen::Index(reduced.dimension());
  Matrix out = Matrix::Zero(dk, dk);

  auto reduced_index = [&](const std::vector<std::size_t>& levels) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < factors.size(); ++i) {
      if (kept[i]) idx = idx * factors[i].dimension + levels[i];
    }
    return Eigen::Index(idx);
  };
  auto traced_equal = [&](const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    for (std::size_t i = 0; i < factors.size(); ++i) {
      if (!kept[i] && a[i] != b[i]) return false;
    }
    return true;
  };

  const std::size_t D = space.dimension();
  std::vector<std::vector<std::size_t>> levels(D);
  for (std::size_t i = 0; i < D; ++i) levels[i] = space.levels_of(i);
  for (std::size_t r = 0; r < D; ++r) {
    for (std::size_t c = 0; c < D; ++c) {
      if (!traced_equal(levels[r], levels[c])) continue;
      out(reduced_index(levels[r]), reduced_index(levels[c])) += rho(Eigen::Index(r), Eigen::Index(c));
    }
  }
  if (kept_space) *kept_space = reduced;
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::string>& keep) {
  HilbertSpace reduced;
  Matrix m = partial_trace(rho.matrix(), rho.space(), keep, &reduced);
  return DensityMatrix(std::move(reduced), std::move(m));
}

}  // namespace holoqed
