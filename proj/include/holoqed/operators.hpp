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

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "holoqed/hilbert.hpp"

namespace holoqed {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;
inline constexpr Complex kI{0.0, 1.0};

/// Converts a frequency quoted as ω/2π in MHz into rad/ns.
constexpr double mhz_to_angular(double mhz) { return kTwoPi * mhz * 1e-3; }
constexpr double angular_to_mhz(double w) { return w / kTwoPi * 1e3; }

/// Dense square operator bound to a Hilbert space. Angular frequency units
/// (rad/ns) for Hamiltonians, dimensionless otherwise.
class OperatorMatrix {
 public:
  OperatorMatrix(HilbertSpace space, Matrix entries);

  static OperatorMatrix identity(const HilbertSpace& space);
  static OperatorMatrix zero(const HilbertSpace& space);

  const HilbertSpace& space() const noexcept { return space_; }
  const Matrix& matrix() const noexcept { return entries_; }
  std::size_t dimension() const noexcept { return space_.dimension(); }
  Complex operator()(std::size_t r, std::size_t c) const { return entries_(Eigen::Index(r), Eigen::Index(c)); }

  OperatorMatrix adjoint() const;
  /// max|A − A†| ≤ rel_tol · max|A| (a zero operator is Hermitian).
  bool is_hermitian(double rel_tol = 1e-12) const;
  double max_abs() const;

  OperatorMatrix operator+(const OperatorMatrix& rhs) const;
  OperatorMatrix operator-(const OperatorMatrix& rhs) const;
  OperatorMatrix operator*(const OperatorMatrix& rhs) const;
  OperatorMatrix operator*(Complex s) const;
  friend OperatorMatrix operator*(Complex s, const OperatorMatrix& op) { return op * s; }
  OperatorMatrix operator*(double s) const { return *this * Complex(s, 0.0); }
  friend OperatorMatrix operator*(double s, const OperatorMatrix& op) { return op * s; }

 private:
  HilbertSpace space_;
  Matrix entries_;
};

class StateVector {
 public:
  /// Requires unit norm within 1e-10.
  StateVector(HilbertSpace space, Vector amplitudes);
  static StateVector normalized(HilbertSpace space, Vector amplitudes);
  static StateVector basis(const HilbertSpace& space, std::size_t flat_index);

  const HilbertSpace& space() const noexcept { return space_; }
  const Vector& amplitudes() const noexcept { return amplitudes_; }

  Complex inner(const StateVector& other) const;  // ⟨this|other⟩
  Matrix projector() const;

 private:
  HilbertSpace space_;
  Vector amplitudes_;
};

class DensityMatrix {
 public:
  /// Validates Hermiticity, unit trace (1e-8) and eigenvalues ≥ −1e-8.
  DensityMatrix(HilbertSpace space, Matrix entries);
  static DensityMatrix from_state(const StateVector& psi);
  static DensityMatrix maximally_mixed(const HilbertSpace& space);

  const HilbertSpace& space() const noexcept { return space_; }
  const Matrix& matrix() const noexcept { return entries_; }

 private:
  HilbertSpace space_;
  Matrix entries_;
};

/// Bosonic lowering operator with `cutoff` Fock states: a[n−1, n] = √n.
OperatorMatrix annihilation(std::size_t cutoff, std::string label = "c");

struct TransmonOperators {
  HilbertSpace space;
  OperatorMatrix lower01;                 // |0⟩⟨1|
  std::optional<OperatorMatrix> lower12;  // |1⟩⟨2|, three-level only
  OperatorMatrix sigmaz01;                // |1⟩⟨1| − |0⟩⟨0|
  std::optional<OperatorMatrix> sigmaz12; // |2⟩⟨2| − |1⟩⟨1|
  std::vector<OperatorMatrix> projectors; // |j⟩⟨j|
  OperatorMatrix number;                  // Σ j |j⟩⟨j|
};

/// Transmon ladder operators for 2 or 3 retained levels.
TransmonOperators transmon_ops(std::size_t levels, std::string label = "q");

/// I ⊗ … ⊗ op ⊗ … ⊗ I with op placed at the factor named `factor_label`.
OperatorMatrix embed(const OperatorMatrix& op, const HilbertSpace& target_space,
                     const std::string& factor_label);

struct DressedBasis {
  StateVector ground;  // |G⟩ = |0⟩_q|0⟩_c
  StateVector minus;   // (|0⟩_q|1⟩_c − |1⟩_q|0⟩_c)/√2
  StateVector plus;    // (|0⟩_q|1⟩_c + |1⟩_q|0⟩_c)/√2
  double energy_ground = 0.0;
  double energy_minus = 0.0;
  double energy_plus = 0.0;

  std::vector<StateVector> states() const { return {ground, minus, plus}; }
};

/// Resonant Jaynes–Cummings dressed states on a (transmon ⊗ Fock) space,
/// energies measured from |G⟩: E_± = ω_c ± g0.
DressedBasis dressed_basis(double g0, double omega_c, const HilbertSpace& space);

Matrix expm(const Matrix& a);
OperatorMatrix matrix_exponential(const OperatorMatrix& a);

/// Traces out every factor not listed in `keep`. The kept factors retain
/// their original order.
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::string>& keep);
Matrix partial_trace(const Matrix& rho, const HilbertSpace& space, const std::vector<std::string>& keep,
                     HilbertSpace* kept_space = nullptr);

/// Kronecker product A ⊗ B.
Matrix kron(const Matrix& a, const Matrix& b);

}  // namespace holoqed
