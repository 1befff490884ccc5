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

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "holoqed/operators.hpp"

namespace holoqed {

/// Real scalar function of time (ns). Must be free of hidden mutable state.
using Envelope = std::function<double(double)>;

/// amplitude·cos(frequency·t + phase)
struct Tone {
  double amplitude = 0.0;
  double frequency = 0.0;
  double phase = 0.0;

  double operator()(double t) const;
};

struct ModulationTerm {
  OperatorMatrix op;
  Envelope envelope;
  std::string name;
  std::optional<Tone> tone;  // set when the envelope is a single cosine
};

/// Interaction picture defined by a static Hermitian H0 = V·diag(E)·V†.
struct Frame {
  Matrix vectors;           // V (identity when H0 is diagonal)
  Eigen::VectorXd energies; // E
  bool diagonal = false;

  static Frame from(const OperatorMatrix& h0);
  /// e^{iH0t} X e^{−iH0t}
  Matrix to_frame(const Matrix& x, double t) const;
  /// e^{−iH0t}·ψ
  Vector evolve(const Vector& psi, double t) const;
};

/// H(t) = static + Σ envelope_k(t)·op_k, optionally viewed in a frame:
/// H_I(t) = e^{iH0t}(H(t) − H0)e^{−iH0t}.
class TimeDependentHamiltonian {
 public:
  explicit TimeDependentHamiltonian(OperatorMatrix static_part);

  /// Throws ConfigurationError when `op` is not Hermitian or lives elsewhere.
  TimeDependentHamiltonian& add_term(OperatorMatrix op, Envelope envelope, std::string name = {});
  TimeDependentHamiltonian& add_tone(OperatorMatrix op, Tone tone, std::string name = {});
  /// Appends every term of `other` and adds its static part. Spaces must match.
  TimeDependentHamiltonian& operator+=(const TimeDependentHamiltonian& other);

  const HilbertSpace& space() const noexcept { return static_part_.space(); }
  std::size_t dimension() const noexcept { return static_part_.dimension(); }
  const OperatorMatrix& static_part() const noexcept { return static_part_; }
  const std::vector<ModulationTerm>& terms() const noexcept { return terms_; }
  const std::optional<Frame>& frame() const noexcept { return frame_; }
  bool is_static() const noexcept { return terms_.empty() && !frame_; }

  Matrix evaluate(double t) const;
  /// Writes H(t) into `out` (resized as needed). Safe to call concurrently
  /// with distinct `out` buffers.
  void evaluate_into(double t, Matrix& out) const;

  friend TimeDependentHamiltonian rotating_frame(const TimeDependentHamiltonian& h, const OperatorMatrix& h0);

 private:
  OperatorMatrix static_part_;
  std::vector<ModulationTerm> terms_;
  std::optional<Frame> frame_;
  // Frame-basis copies (V†XV) of the static part and the term operators.
  Matrix static_in_eigenbasis_;
  std::vector<Matrix> terms_in_eigenbasis_;
};

/// e^{iH0t}(H(t) − H0)e^{−iH0t}, evaluated exactly at every t (no RWA).
TimeDependentHamiltonian rotating_frame(const TimeDependentHamiltonian& h, const OperatorMatrix& h0);

// ---------------------------------------------------------------------------
// Single dressed-state qubit

struct DriveSpec {
  double omega1 = 0.0;  // σz tone amplitude Ω₁ (rad/ns)
  double omega2 = 0.0;  // σx tone amplitude Ω₂ (rad/ns)
  double phi = 0.0;     // σx tone phase (rad)
  double g0 = 0.0;
  double omega_c = 0.0;

  double omega() const;  // √(Ω₁²+Ω₂²)
  double theta() const;  // 2·atan2(Ω₂, Ω₁) mapped into [0, 2π)
  double f1(double t) const;
  double f2(double t) const;
  /// Throws ConfigurationError unless Ω > 0 and all fields are finite.
  void validate() const;

  /// Amplitudes realising the holonomy U1(θ, φ) at total strength Ω.
  static DriveSpec for_gate(double theta, double phi, double omega, double g0, double omega_c);
};

/// How the σx tone acts on a three-level transmon.
enum class DriveLadder {
  Qubit,    // 0↔1 only
  Harmonic  // 0↔1 plus √2 on 1↔2
};

/// Space (transmon ⊗ Fock) with labels "q" and "c".
HilbertSpace jc_space(std::size_t transmon_levels, std::size_t fock_cutoff);

/// ω_q/2·σz + ω_c·a†a + g0(aσ⁺ + a†σ⁻), shifted by ω_q/2 so that |0⟩_q|0⟩_c
/// has zero energy. With three levels, |2⟩ sits at 2ω_q − α and couples to
/// |1⟩ with √2·g0.
TimeDependentHamiltonian build_jc(double omega_q, double omega_c, double g0, const HilbertSpace& space,
                                  double anharmonicity = 0.0);

/// 2f₁(t)·σz + 2√2·f₂(t)·σx on the transmon factor of `space`.
TimeDependentHamiltonian build_drive(const DriveSpec& spec, const HilbertSpace& space,
                                     DriveLadder ladder = DriveLadder::Qubit);

enum class ReducedVariant {
  Truncated,  // zero (G,G) entry
  Projected   // (G,G) = −2f₁, the exact projection of the drive
};

/// Lab-frame Hamiltonian on {|G⟩,|−⟩,|+⟩}: diag(0, E₋, E₊) plus
/// 2·[[0, −f₂, f₂], [−f₂, 0, −f₁], [f₂, −f₁, 0]].
TimeDependentHamiltonian build_h1_reduced(const DriveSpec& spec, ReducedVariant variant = ReducedVariant::Truncated);

/// Basis (G, −, +) as a single abstract factor labelled "dressed".
HilbertSpace dressed_space();
/// diag(0, ω_c − g0, ω_c + g0) on dressed_space().
OperatorMatrix dressed_energies(double g0, double omega_c);

struct EffectiveModel {
  OperatorMatrix h;  // Ω(|b⟩⟨+| + h.c.)
  StateVector bright;
  StateVector dark;
};

EffectiveModel build_heff1(const DriveSpec& spec);

// ---------------------------------------------------------------------------
// Three-unit cell

struct CellSpec {
  std::array<double, 3> omega_c{};
  std::array<double, 3> g{};
  double t13 = 0.0;
  double t23 = 0.0;
  double modulation = 0.0;  // angular frequency of the ac tone

  /// (ω_c, ω_c+3δ_c, ω_c+δ_c) with δ_c = 4g and modulation 6g.
  static CellSpec uniform(double omega_c, double g, double t);
  /// Checks positivity and the δ_c = 4g spacing; throws ConfigurationError.
  void validate() const;
};

/// Three dressed factors "u1","u2","u3" of dimension 3 in level order (G, −, +).
HilbertSpace cell_space();
/// Σ_j diag(0, ω_cj − g_j, ω_cj + g_j) on unit j.
OperatorMatrix cell_free_hamiltonian(const CellSpec& cell);
/// a_j†a_k + h.c. with a† ↦ (|−⟩⟨G| + |+⟩⟨G|)/√2 on each unit (0-based j, k).
OperatorMatrix cell_hopping(std::size_t j, std::size_t k);
/// H0 + 4T13·cos(νt)·hop(1,3) + 4T23·cos(νt)·hop(2,3), lab frame.
TimeDependentHamiltonian build_cell_ac(const CellSpec& cell);
/// Two-target RWA model T13|−G⟩₁₃⟨G+| + T23|−G⟩₂₃⟨G+| + h.c. in the frame of H0.
OperatorMatrix build_cell_rwa(const CellSpec& cell);

/// Stationary part of e^{iH0t}(H(t) − H0)e^{−iH0t}: every term must carry a
/// Tone; entries whose Bohr frequency cancels the tone within `tolerance`
/// (rad/ns) survive with half the amplitude. This is the RWA step.
OperatorMatrix time_average(const TimeDependentHamiltonian& lab, const OperatorMatrix& h0, double tolerance = 1e-9);

struct TransitionGap {
  std::size_t from = 0;  // flat index in cell_space()
  std::size_t to = 0;
  double gap = 0.0;      // |E_to − E_from|
  std::string label;     // e.g. "|-G>_13 <-> |G+>_13"
};

/// Dressed transitions driven by the (j,k) hopping with both other-unit
/// spectators in |G⟩, deduplicated and sorted by gap.
std::vector<TransitionGap> pair_transition_gaps(const CellSpec& cell, std::size_t j, std::size_t k);

}  // namespace holoqed
