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

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "holoqed/hamiltonians.hpp"
#include "holoqed/integrator.hpp"
#include "holoqed/operators.hpp"

namespace holoqed {

struct Collapse {
  OperatorMatrix op;
  double rate = 0.0;  // rad/ns
  std::string name;
};

/// dρ/dt = i[ρ, H(t)] + Σ (γ/2)(2AρA† − A†Aρ − ρA†A).
class LindbladModel {
 public:
  LindbladModel(TimeDependentHamiltonian hamiltonian, std::vector<Collapse> collapses = {});

  const TimeDependentHamiltonian& hamiltonian() const noexcept { return hamiltonian_; }
  const std::vector<Collapse>& collapses() const noexcept { return collapses_; }
  const HilbertSpace& space() const noexcept { return hamiltonian_.space(); }

  /// Dense d²×d² generator acting on column-stacked ρ at time t.
  Matrix superoperator(double t) const;

 private:
  TimeDependentHamiltonian hamiltonian_;
  std::vector<Collapse> collapses_;
};

/// Scalar recorded at every output time. `state` is ψ (d×1) for
/// Schrödinger runs and ρ (d×d) for Lindblad runs.
struct Observable {
  std::string name;
  std::function<double(double t, const Matrix& state)> fn;
};

/// ⟨v|ψ⟩ overlap squared, or ⟨v|ρ|v⟩.
Observable population_observable(std::string name, Vector v);
/// Same with a time-dependent target.
Observable fidelity_observable(std::string name, std::function<Vector(double)> target);

struct PropagationOptions {
  double rtol = 1e-8;
  double atol = 1e-10;
  double initial_step = 0.01;  // ns
  double max_step = 0.0;       // 0 → unbounded
  /// Output grid spacing (ns); ≤ 0 records only t = 0 and t_final.
  double output_step = 0.0;
  bool keep_states = false;
  /// Lindblad: largest tolerated |tr ρ(t) − tr ρ(0)|.
  double max_trace_drift = 1e-5;
  /// Lindblad: track Hermiticity and the smallest eigenvalue at every grid point.
  bool check_physicality = true;
  std::size_t max_steps = 50'000'000;

  static PropagationOptions schrodinger() { return PropagationOptions{1e-10, 1e-12}; }
  static PropagationOptions lindblad() { return PropagationOptions{}; }
};

struct Diagnostics {
  IntegratorStats steps;
  double max_trace_drift = 0.0;    // |tr − tr₀| (Lindblad) or |‖ψ‖ − 1| (Schrödinger)
  double max_hermiticity_error = 0.0;
  double min_eigenvalue = 0.0;     // Lindblad only, when check_physicality
  double wall_seconds = 0.0;
};

struct PropagationResult {
  std::vector<double> times;
  std::vector<Matrix> states;  // only with keep_states
  std::vector<std::pair<std::string, std::vector<double>>> observables;
  Matrix final_state;          // at t_final (also when t_final is off-grid)
  double t_final = 0.0;
  Diagnostics diagnostics;

  const std::vector<double>& series(const std::string& name) const;
};

/// Output grid k·step, k = 0 … floor(t_final/step + 1e-9).
std::vector<double> output_grid(double t_final, double step);

PropagationResult propagate_schrodinger(const TimeDependentHamiltonian& h, const StateVector& psi0, double t_final,
                                        const std::vector<Observable>& record = {},
                                        const PropagationOptions& options = PropagationOptions::schrodinger());

PropagationResult propagate_lindblad(const LindbladModel& model, const DensityMatrix& rho0, double t_final,
                                     const std::vector<Observable>& record = {},
                                     const PropagationOptions& options = PropagationOptions::lindblad());

/// Propagates any Hermitian operator through the (linear) master equation.
/// Used to build responses for linear combinations of inputs; positivity
/// is not checked and the trace-drift test is relative to tr(x0).
PropagationResult propagate_lindblad_hermitian(const LindbladModel& model, const Matrix& x0, double t_final,
                                               const std::vector<Observable>& record = {},
                                               const PropagationOptions& options = PropagationOptions::lindblad());

double expectation(const DensityMatrix& rho, const OperatorMatrix& op);
double expectation(const Matrix& rho, const Matrix& op);
std::vector<double> populations(const DensityMatrix& rho, const std::vector<StateVector>& basis);
std::vector<double> populations(const Matrix& rho, const std::vector<Vector>& basis);

}  // namespace holoqed
