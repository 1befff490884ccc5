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

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "holoqed/dynamics.hpp"
#include "holoqed/hamiltonians.hpp"

namespace holoqed {

struct SingleQubitGate {
  double theta = 0.0;
  double phi = 0.0;
  Eigen::Matrix2cd matrix;  // on span{|G⟩, |−⟩}
};

struct TwoQubitGate {
  Eigen::Matrix4cd matrix;  // on span{|GG⟩, |G−⟩, |−G⟩, |−−⟩}
};

/// [[cosθ, sinθ·e^{iφ}], [sinθ·e^{−iφ}, −cosθ]]
SingleQubitGate ideal_u1(double theta, double phi);
/// Swap of |G−⟩ and |−G⟩, +1 on |GG⟩, −1 on |−−⟩.
TwoQubitGate ideal_u2();

enum class GateKind { Single, Two };

/// π/Ω for single-qubit gates, π/(√2·T) for the two-qubit gate.
double cyclic_time(GateKind kind, double amplitude);

struct ParallelTransportReport {
  std::size_t samples = 0;
  double max_coupling = 0.0;            // max |⟨ψ_i(t)|H|ψ_j(t)⟩| over i, j ∈ {d, b}
  double dark_annihilation = 0.0;       // ‖H|d⟩‖
  double cyclicity_defect = 0.0;        // max over i of ‖P_i(τ) − P_i(0)‖₂ at τ = π/Ω
  double half_period_defect_bright = 0.0;
};

/// Evolves |d⟩ and |b⟩ under the effective model and samples the transport
/// condition on a uniform grid over [0, π/Ω].
ParallelTransportReport check_parallel_transport(const DriveSpec& spec, std::size_t n_samples);

/// 2×2 block on span{|G⟩,|−⟩} of exp(−i·H_eff·π/Ω).
Eigen::Matrix2cd effective_gate(const DriveSpec& spec);

/// √(1 − |⟨U1·ψ|ψ(τ)⟩|²) between the reduced lab-frame model, read in the
/// frame of its free part at τ = π/Ω, and the ideal gate. `input` holds
/// (c_G, c_−).
double reduced_model_distance(const DriveSpec& spec, ReducedVariant variant, const Eigen::Vector2cd& input,
                              const PropagationOptions& options = PropagationOptions::schrodinger());

/// Computational block (units 1, 2; unit 3 in |G⟩) of exp(−i·H_rwa·τ₂).
Eigen::Matrix4cd cell_rwa_gate(const CellSpec& cell, double duration);

// ---------------------------------------------------------------------------
// Gate scenarios

struct SingleQubitScenario {
  std::string id = "single";
  double omega_c = mhz_to_angular(6000.0);
  double g0 = mhz_to_angular(300.0);
  double anharmonicity = mhz_to_angular(310.0);
  std::size_t transmon_levels = 3;
  std::size_t fock_cutoff = 5;
  DriveLadder ladder = DriveLadder::Qubit;
  double theta = 0.0;
  double phi = 0.0;
  double omega = mhz_to_angular(8.0);
  double kappa = mhz_to_angular(0.01);
  double gamma1 = mhz_to_angular(0.01);  // Γ₁ʲ for both j
  double gamma2 = mhz_to_angular(0.01);  // Γ₂ʲ for both j
  bool decoherence = true;
  double theta_prime = 0.0;               // input cosθ′|G⟩ + sinθ′|−⟩
  std::optional<double> duration;         // defaults to π/Ω
  PropagationOptions numerics = PropagationOptions::lindblad();

  static SingleQubitScenario hadamard();
  static SingleQubitScenario not_gate();

  DriveSpec drive() const;
  double gate_time() const;
  HilbertSpace space() const;
  LindbladModel model() const;
  DressedBasis basis() const;
  SingleQubitGate gate() const { return ideal_u1(theta, phi); }
  /// Target at time t: U1·input carried by the free dressed-state phases.
  Vector target(const Eigen::Vector2cd& input, double t) const;
  Eigen::Vector2cd input() const;
  void validate() const;
};

struct TwoQubitScenario {
  std::string id = "two_qubit";
  double omega_c = mhz_to_angular(6000.0);
  double g = mhz_to_angular(100.0);
  double t13 = mhz_to_angular(6.0);
  double t23 = mhz_to_angular(6.0);
  double rate = mhz_to_angular(0.01);
  bool decoherence = true;
  std::optional<double> duration;  // defaults to π/(√2·T13)
  PropagationOptions numerics = PropagationOptions::lindblad();

  CellSpec cell() const;
  double gate_time() const;
  /// Interaction-picture model: ac cell Hamiltonian in the frame of its
  /// free part plus per-unit decay |G⟩⟨∓| and dephasing diag(−1, 1, 1).
  LindbladModel model() const;
  void validate() const;
};

struct FidelityReport {
  std::string id;
  double final_fidelity = 0.0;
  double gate_time = 0.0;
  PropagationResult trajectory;          // columns named after the CSV header
  std::vector<double> theta_primes;      // averaged runs only
  std::vector<double> per_state;         // averaged runs only
  std::string method;
};

FidelityReport simulate_gate_fidelity(const SingleQubitScenario& scenario);
FidelityReport simulate_gate_fidelity(const TwoQubitScenario& scenario);

enum class AverageMethod {
  Linear,   // three Hermitian responses, combined per input
  PerState  // one propagation per input, spread over workers
};

/// Worker count from HOLOQED_WORKERS, falling back to the hardware count.
unsigned default_workers();

/// Mean fidelity over cosθ′|G⟩ + sinθ′|−⟩ with θ′ = 2πk/n. Without
/// decoherence the pure-state amplitudes are combined instead.
FidelityReport average_gate_fidelity(const SingleQubitScenario& scenario, std::size_t n_states,
                                     AverageMethod method = AverageMethod::Linear, unsigned workers = 0);

}  // namespace holoqed
