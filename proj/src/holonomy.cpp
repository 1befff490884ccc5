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

#include "holoqed/holonomy.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

#include "holoqed/error.hpp"

namespace holoqed {

SingleQubitGate ideal_u1(double theta, double phi) {
  SingleQubitGate g{theta, phi, Eigen::Matrix2cd()};
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  g.matrix << c, s * std::polar(1.0, phi), s * std::polar(1.0, -phi), -c;
  return g;
}

TwoQubitGate ideal_u2() {
  TwoQubitGate g{Eigen::Matrix4cd::Zero()};
  g.matrix(0, 0) = 1.0;
  g.matrix(1, 2) = 1.0;
  g.matrix(2, 1) = 1.0;
  g.matrix(3, 3) = -1.0;
  return g;
}

double cyclic_time(GateKind kind, double amplitude) {
  if (!(amplitude > 0.0) || !std::isfinite(amplitude)) throw ConfigurationError("gate amplitude must be positive");
  return kind == GateKind::Single ? std::numbers::pi / amplitude : std::numbers::pi / (std::sqrt(2.0) * amplitude);
}

namespace {

double projector_distance(const Vector& a, const Vector& b) {
  const Matrix diff = a * a.adjoint() - b * b.adjoint();
  Eigen::SelfAdjointEigenSolver<Matrix> es(diff, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

ParallelTransportReport check_parallel_transport(const DriveSpec& spec, std::size_t n_samples) {
  if (n_samples < 10) throw ConfigurationError("parallel-transport check needs at least 10 samples");
  const auto model = build_heff1(spec);
  const Matrix& h = model.h.matrix();
  const double tau = cyclic_time(GateKind::Single, spec.omega());
  const Vector d0 = model.dark.amplitudes();
  const Vector b0 = model.bright.amplitudes();

  ParallelTransportReport r;
  r.samples = n_samples;
  r.dark_annihilation = (h * d0).norm();
  for (std::size_t k = 0; k < n_samples; ++k) {
    const double t = tau * double(k) / double(n_samples - 1);
    const Matrix u = expm(-kI * t * h);
    const Vector d = u * d0;
    const Vector b = u * b0;
    const Vector hs[2] = {h * d, h * b};
    const Vector* states[2] = {&d, &b};
    for (const auto* psi : states) {
      for (const auto& hv : hs) r.max_coupling = std::max(r.max_coupling, std::abs(psi->dot(hv)));
    }
  }
  const Matrix u_tau = expm(-kI * tau * h);
  r.cyclicity_defect = std::max(projector_distance(u_tau * d0, d0), projector_distance(u_tau * b0, b0));
  r.half_period_defect_bright = projector_distance(expm(-kI * (tau / 2.0) * h) * b0, b0);
  return r;
}

Eigen::Matrix2cd effective_gate(const DriveSpec& spec) {
  const auto model = build_heff1(spec);
  const Matrix u = expm(-kI * cyclic_time(GateKind::Single, spec.omega()) * model.h.matrix());
  return u.topLeftCorner(2, 2);
}

double reduced_model_distance(const DriveSpec& spec, ReducedVariant variant, const Eigen::Vector2cd& input,
                              const PropagationOptions& options) {
  const auto h = build_h1_reduced(spec, variant);
  const double tau = cyclic_time(GateKind::Single, spec.omega());
  Vector psi0 = Vector::Zero(3);
  psi0.head(2) = input;
  PropagationOptions o = options;
  o.output_step = 0.0;
  const auto run = propagate_schrodinger(h, StateVector::normalized(h.space(), psi0), tau, {}, o);
  Vector psi = run.final_state.col(0);
  const Matrix& e = h.static_part().matrix();
  for (Eigen::Index k = 0; k < 3; ++k) psi(k) *= std::polar(1.0, e(k, k).real() * tau);
  const Eigen::Vector2cd ideal = ideal_u1(spec.theta(), spec.phi).matrix * input.normalized();
  const double f = std::norm(ideal.dot(psi.head(2)));
  return std::sqrt(std::max(0.0, 1.0 - f));
}

Eigen::Matrix4cd cell_rwa_gate(const CellSpec& cell, double duration) {
  const OperatorMatrix h = build_cell_rwa(cell);
  const Matrix u = expm(-kI * duration * h.matrix());
  const auto space = cell_space();
  const std::size_t idx[4] = {space.flat_index({0, 0, 0}), space.flat_index({0, 1, 0}), space.flat_index({1, 0, 0}),
                              space.flat_index({1, 1, 0})};
  Eigen::Matrix4cd out;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) out(r, c) = u(Eigen::Index(idx[r]), Eigen::Index(idx[c]));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Single-qubit scenario

SingleQubitScenario SingleQubitScenario::hadamard() {
  SingleQubitScenario s;
  s.id = "hadamard";
  s.theta = std::numbers::pi / 4.0;
  s.phi = std::numbers::pi;
  return s;
}

SingleQubitScenario SingleQubitScenario::not_gate() {
  SingleQubitScenario s;
  s.id = "not";
  s.theta = std::numbers::pi / 2.0;
  s.phi = 0.0;
  return s;
}

DriveSpec SingleQubitScenario::drive() const { return DriveSpec::for_gate(theta, phi, omega, g0, omega_c); }

double SingleQubitScenario::gate_time() const {
  return duration ? *duration : cyclic_time(GateKind::Single, omega);
}

HilbertSpace SingleQubitScenario::space() const { return jc_space(transmon_levels, fock_cutoff); }

DressedBasis SingleQubitScenario::basis() const { return dressed_basis(g0, omega_c, space()); }

void SingleQubitScenario::validate() const {
  drive().validate();
  if (transmon_levels != 2 && transmon_levels != 3) throw UnsupportedDimension("transmon levels must be 2 or 3");
  if (fock_cutoff < 2) throw InvalidDimension("Fock cutoff must be at least 2");
  for (double r : {kappa, gamma1, gamma2}) {
    if (!(r >= 0.0) || !std::isfinite(r)) throw ConfigurationError("decoherence rates must be >= 0");
  }
  if (duration && (!(*duration >= 0.0) || !std::isfinite(*duration))) {
    throw ConfigurationError("duration must be >= 0");
  }
}

LindbladModel SingleQubitScenario::model() const {
  validate();
  const auto sp = space();
  auto h = build_jc(omega_c, omega_c, g0, sp, anharmonicity);
  h += build_drive(drive(), sp, ladder);
  std::vector<Collapse> collapses;
  if (decoherence) {
    const auto q = transmon_ops(transmon_levels, "q");
    const auto& fq = sp.factor("q");
    auto on_q = [&](const OperatorMatrix& op) {
      return embed(OperatorMatrix(HilbertSpace::single("q", fq.dimension, fq.kind), op.matrix()), sp, "q");
    };
    const auto a = annihilation(fock_cutoff, "c");
    const auto& fc = sp.factor("c");
    collapses.push_back(
        {embed(OperatorMatrix(HilbertSpace::single("c", fc.dimension, fc.kind), a.matrix()), sp, "c"), kappa, "a"});
    collapses.push_back({on_q(q.lower01), gamma1, "sigma_minus_01"});
    if (q.lower12) collapses.push_back({on_q(*q.lower12), gamma1, "sigma_minus_12"});
    collapses.push_back({on_q(q.sigmaz01), gamma2, "sigma_z_01"});
    if (q.sigmaz12) collapses.push_back({on_q(*q.sigmaz12), gamma2, "sigma_z_12"});
  }
  return LindbladModel(std::move(h), std::move(collapses));
}

Eigen::Vector2cd SingleQubitScenario::input() const {
  return Eigen::Vector2cd(std::cos(theta_prime), std::sin(theta_prime));
}

Vector SingleQubitScenario::target(const Eigen::Vector2cd& in, double t) const {
  const auto b = basis();
  const Eigen::Vector2cd u = gate().matrix * in;
  return u(0) * std::polar(1.0, -b.energy_ground * t) * b.ground.amplitudes() +
         u(1) * std::polar(1.0, -b.energy_minus * t) * b.minus.amplitudes();
}

namespace {

std::vector<Observable> single_observables(const SingleQubitScenario& s, const Eigen::Vector2cd& in) {
  const auto b = s.basis();
  const Vector g = b.ground.amplitudes();
  const Vector m = b.minus.amplitudes();
  const Vector p = b.plus.amplitudes();
  auto pop = [](const Vector& v, const Matrix& st) {
    if (st.cols() == 1) return std::norm(v.dot(st.col(0)));
    return (v.adjoint() * st * v)(0, 0).real();
  };
  std::vector<Observable> obs;
  obs.push_back(population_observable("pop_G", g));
  obs.push_back(population_observable("pop_minus", m));
  obs.push_back(population_observable("pop_plus", p));
  obs.push_back(Observable{"leakage", [=](double, const Matrix& st) {
                             return 1.0 - pop(g, st) - pop(m, st) - pop(p, st);
                           }});
  obs.push_back(fidelity_observable("fidelity", [s, in](double t) { return s.target(in, t); }));
  return obs;
}

double fidelity_of(const Vector& target, const Matrix& state) {
  if (state.cols() == 1) return std::norm(target.dot(state.col(0)));
  return (target.adjoint() * state * target)(0, 0).real();
}

// Runs job(i) for i in [0, n) over `workers` threads; rethrows the first failure.
template <typename Job>
void parallel_for(std::size_t n, unsigned workers, Job job) {
  workers = std::max(1u, std::min<unsigned>(workers, unsigned(n)));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          job(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = n;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

FidelityReport simulate_gate_fidelity(const SingleQubitScenario& scenario) {
  const auto model = scenario.model();
  const double tau = scenario.gate_time();
  const auto in = scenario.input();
  const auto b = scenario.basis();
  const Vector psi0 = in(0) * b.ground.amplitudes() + in(1) * b.minus.amplitudes();
  const auto rho0 = DensityMatrix::from_state(StateVector::normalized(model.space(), psi0));

  FidelityReport report;
  report.id = scenario.id;
  report.gate_time = tau;
  report.method = "lindblad";
  report.trajectory = propagate_lindblad(model, rho0, tau, single_observables(scenario, in), scenario.numerics);
  report.final_fidelity = fidelity_of(scenario.target(in, tau), report.trajectory.final_state);
  return report;
}

// ---------------------------------------------------------------------------
// Two-qubit scenario

CellSpec TwoQubitScenario::cell() const {
  CellSpec c = CellSpec::uniform(omega_c, g, t13);
  c.t23 = t23;
  c.validate();
  return c;
}

double TwoQubitScenario::gate_time() const { return duration ? *duration : cyclic_time(GateKind::Two, t13); }

void TwoQubitScenario::validate() const {
  cell();
  if (!(rate >= 0.0) || !std::isfinite(rate)) throw ConfigurationError("decoherence rate must be >= 0");
  if (duration && (!(*duration >= 0.0) || !std::isfinite(*duration))) {
    throw ConfigurationError("duration must be >= 0");
  }
}

LindbladModel TwoQubitScenario::model() const {
  validate();
  const CellSpec c = cell();
  const auto lab = build_cell_ac(c);
  auto h = rotating_frame(lab, cell_free_hamiltonian(c));
  std::vector<Collapse> collapses;
  if (decoherence && rate > 0.0) {
    const auto sp = cell_space();
    const char* units[3] = {"u1", "u2", "u3"};
    for (int u = 0; u < 3; ++u) {
      auto on_unit = [&](Matrix m) {
        return embed(OperatorMatrix(HilbertSpace::single(units[u], 3, FactorKind::Dressed), std::move(m)), sp,
                     units[u]);
      };
      Matrix lm = Matrix::Zero(3, 3);
      lm(0, 1) = 1.0;
      Matrix lp = Matrix::Zero(3, 3);
      lp(0, 2) = 1.0;
      Matrix z = Matrix::Zero(3, 3);
      z(0, 0) = -1.0;
      z(1, 1) = 1.0;
      z(2, 2) = 1.0;
      const std::string tag = std::to_string(u + 1);
      collapses.push_back({on_unit(lm), rate, "decay_minus_" + tag});
      collapses.push_back({on_unit(lp), rate, "decay_plus_" + tag});
      collapses.push_back({on_unit(z), rate, "dephasing_" + tag});
    }
  }
  return LindbladModel(std::move(h), std::move(collapses));
}

FidelityReport simulate_gate_fidelity(const TwoQubitScenario& scenario) {
  const auto model = scenario.model();
  const auto sp = model.space();
  const double tau = scenario.gate_time();
  const auto d = Eigen::Index(sp.dimension());

  Vector psi0 = Vector::Zero(d);
  psi0(Eigen::Index(sp.flat_index({1, 0, 0}))) = 1.0;  // |−GG⟩
  Vector target = Vector::Zero(d);
  target(Eigen::Index(sp.flat_index({0, 1, 0}))) = 1.0;  // |G−G⟩

  std::vector<Observable> obs;
  static const char* kNames[3] = {"G", "minus", "plus"};
  for (std::size_t u = 0; u < 3; ++u) {
    for (std::size_t level = 0; level < 3; ++level) {
      std::vector<Eigen::Index> members;
      for (std::size_t i = 0; i < sp.dimension(); ++i) {
        if (sp.levels_of(i)[u] == level) members.push_back(Eigen::Index(i));
      }
      obs.push_back(Observable{std::string("pop_") + kNames[level] + "_" + std::to_string(u + 1),
                               [members](double, const Matrix& rho) {
                                 double p = 0.0;
                                 for (auto i : members) p += rho(i, i).real();
                                 return p;
                               }});
    }
  }
  obs.push_back(population_observable("fidelity", target));

  FidelityReport report;
  report.id = scenario.id;
  report.gate_time = tau;
  report.method = "lindblad";
  report.trajectory = propagate_lindblad(model, DensityMatrix::from_state(StateVector(sp, psi0)), tau, obs,
                                         scenario.numerics);
  report.final_fidelity = fidelity_of(target, report.trajectory.final_state);
  return report;
}

// ---------------------------------------------------------------------------
// Averaged fidelity

unsigned default_workers() {
  if (const char* env = std::getenv("HOLOQED_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return unsigned(std::min(v, 1024L));
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

FidelityReport average_gate_fidelity(const SingleQubitScenario& scenario, std::size_t n_states, AverageMethod method,
                                     unsigned workers) {
  if (n_states < 2) throw ConfigurationError("averaging needs at least 2 input states");
  if (workers == 0) workers = default_workers();
  const auto model = scenario.model();
  const auto sp = model.space();
  const double tau = scenario.gate_time();
  const auto b = scenario.basis();
  const Vector g = b.ground.amplitudes();
  const Vector m = b.minus.amplitudes();
  PropagationOptions numerics = scenario.numerics;
  numerics.output_step = 0.0;
  const bool open = scenario.decoherence;

  FidelityReport report;
  report.id = scenario.id;
  report.gate_time = tau;
  report.theta_primes.resize(n_states);
  report.per_state.resize(n_states);
  for (std::size_t k = 0; k < n_states; ++k) report.theta_primes[k] = kTwoPi * double(k) / double(n_states);

  auto target_for = [&](double tp) { return scenario.target(Eigen::Vector2cd(std::cos(tp), std::sin(tp)), tau); };

  if (method == AverageMethod::Linear) {
    // Φ is linear: ρ(θ′) = c²Φ(|G⟩⟨G|) + s²Φ(|−⟩⟨−|) + cs·Φ(|G⟩⟨−| + |−⟩⟨G|).
    std::vector<Matrix> inputs;
    if (open) {
      inputs = {g * g.adjoint(), m * m.adjoint(), g * m.adjoint() + m * g.adjoint()};
    } else {
      inputs = {g, m};
    }
    std::vector<Matrix> outputs(inputs.size());
    parallel_for(inputs.size(), workers, [&](std::size_t i) {
      if (open) {
        outputs[i] = propagate_lindblad_hermitian(model, inputs[i], tau, {}, numerics).final_state;
      } else {
        outputs[i] = propagate_schrodinger(model.hamiltonian(), StateVector(sp, inputs[i].col(0)), tau, {},
                                           PropagationOptions::schrodinger())
                         .final_state;
      }
    });
    for (std::size_t k = 0; k < n_states; ++k) {
      const double c = std::cos(report.theta_primes[k]);
      const double s = std::sin(report.theta_primes[k]);
      const Vector t = target_for(report.theta_primes[k]);
      if (open) {
        const Matrix rho = c * c * outputs[0] + s * s * outputs[1] + c * s * outputs[2];
        report.per_state[k] = fidelity_of(t, rho);
      } else {
        const Vector psi = c * outputs[0].col(0) + s * outputs[1].col(0);
        report.per_state[k] = std::norm(t.dot(psi));
      }
    }
    report.method = open ? "linear_lindblad" : "linear_schrodinger";
  } else {
    parallel_for(n_states, workers, [&](std::size_t k) {
      const double tp = report.theta_primes[k];
      const Vector psi0 = std::cos(tp) * g + std::sin(tp) * m;
      const StateVector sv = StateVector::normalized(sp, psi0);
      Matrix out;
      if (open) {
        out = propagate_lindblad(model, DensityMatrix::from_state(sv), tau, {}, numerics).final_state;
      } else {
        out = propagate_schrodinger(model.hamiltonian(), sv, tau, {}, PropagationOptions::schrodinger()).final_state;
      }
      report.per_state[k] = fidelity_of(target_for(tp), out);
    });
    report.method = open ? "per_state_lindblad" : "per_state_schrodinger";
  }
  double sum = 0.0;
  for (double f : report.per_state) sum += f;  // fixed order: deterministic
  report.final_fidelity = sum / double(n_states);
  return report;
}

}  // namespace holoqed
