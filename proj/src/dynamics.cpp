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

#include "holoqed/dynamics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "holoqed/error.hpp"
#include "holoqed/kernels.hpp"

namespace holoqed {

LindbladModel::LindbladModel(TimeDependentHamiltonian hamiltonian, std::vector<Collapse> collapses)
    : hamiltonian_(std::move(hamiltonian)), collapses_(std::move(collapses)) {
  for (const auto& c : collapses_) {
    if (!(c.rate >= 0.0) || !std::isfinite(c.rate)) {
      throw ConfigurationError("collapse '" + c.name + "' has a negative or non-finite rate");
    }
    if (c.op.space() != space()) throw SpaceMismatch("collapse '" + c.name + "' lives on a different space");
  }
}

Matrix LindbladModel::superoperator(double t) const {
  const auto d = Eigen::Index(space().dimension());
  const Matrix id = Matrix::Identity(d, d);
  const Matrix h = hamiltonian_.evaluate(t);
  Matrix l = -kI * kron(id, h) + kI * kron(h.transpose(), id);
  for (const auto& c : collapses_) {
    const Matrix& a = c.op.matrix();
    const Matrix ada = a.adjoint() * a;
    l += (c.rate / 2.0) * (2.0 * kron(a.conjugate(), a) - kron(id, ada) - kron(ada.transpose(), id));
  }
  return l;
}

Observable population_observable(std::string name, Vector v) {
  return Observable{std::move(name), [v = std::move(v)](double, const Matrix& s) {
                      if (s.cols() == 1) return std::norm(v.dot(s.col(0)));
                      return (v.adjoint() * s * v)(0, 0).real();
                    }};
}

Observable fidelity_observable(std::string name, std::function<Vector(double)> target) {
  return Observable{std::move(name), [target = std::move(target)](double t, const Matrix& s) {
                      const Vector v = target(t);
                      if (s.cols() == 1) return std::norm(v.dot(s.col(0)));
                      return (v.adjoint() * s * v)(0, 0).real();
                    }};
}

const std::vector<double>& PropagationResult::series(const std::string& name) const {
  for (const auto& [n, s] : observables) {
    if (n == name) return s;
  }
  throw ConfigurationError("no observable named '" + name + "'");
}

std::vector<double> output_grid(double t_final, double step) {
  if (!(t_final >= 0.0) || !std::isfinite(t_final)) throw ConfigurationError("t_final must be finite and >= 0");
  std::vector<double> grid{0.0};
  if (step <= 0.0) {
    if (t_final > 0.0) grid.push_back(t_final);
    return grid;
  }
  const auto n = static_cast<std::size_t>(std::floor(t_final / step + 1e-9));
  for (std::size_t k = 1; k <= n; ++k) grid.push_back(std::min(double(k) * step, t_final));
  return grid;
}

namespace {

using Clock = std::chrono::steady_clock;

// Jump operator in the cheapest form its structure allows.
struct Jump {
  enum class Form { RealDiagonal, Sparse, Dense } form = Form::Dense;
  double rate = 0.0;
  std::vector<std::tuple<Eigen::Index, Eigen::Index, Complex>> entries;  // Sparse
  Matrix a;
  Matrix a_dagger;
};

class LindbladRhs {
 public:
  LindbladRhs(const LindbladModel& model) : h_(model.hamiltonian()), d_(Eigen::Index(model.space().dimension())) {
    damping_ = Matrix::Zero(d_, d_);
    std::vector<double> w(std::size_t(d_ * d_), 0.0);
    bool any_diagonal = false;
    for (const auto& c : model.collapses()) {
      if (c.rate == 0.0) continue;
      const Matrix& a = c.op.matrix();
      damping_ += (-0.5 * c.rate) * kI * (a.adjoint() * a);

      std::size_t nnz = 0;
      bool diagonal_real = true;
      for (Eigen::Index col = 0; col < d_; ++col) {
        for (Eigen::Index row = 0; row < d_; ++row) {
          if (a(row, col) == Complex(0.0)) continue;
          ++nnz;
          if (row != col || a(row, col).imag() != 0.0) diagonal_real = false;
        }
      }
      if (diagonal_real) {
        any_diagonal = true;
        for (Eigen::Index col = 0; col < d_; ++col) {
          for (Eigen::Index row = 0; row < d_; ++row) {
            w[std::size_t(col * d_ + row)] += c.rate * a(row, row).real() * a(col, col).real();
          }
        }
        continue;
      }
      Jump j;
      j.rate = c.rate;
      if (nnz <= std::size_t(2 * d_)) {
        j.form = Jump::Form::Sparse;
        for (Eigen::Index col = 0; col < d_; ++col) {
          for (Eigen::Index row = 0; row < d_; ++row) {
            if (a(row, col) != Complex(0.0)) j.entries.emplace_back(row, col, a(row, col));
          }
        }
      } else {
        j.form = Jump::Form::Dense;
        j.a = a;
        j.a_dagger = a.adjoint();
      }
      jumps_.push_back(std::move(j));
    }
    if (any_diagonal) diag_weights_ = std::move(w);
    heff_.resize(d_, d_);
    m_.resize(d_, d_);
    t_.resize(d_, d_);
  }

  // ρ and out are column-major d×d complex arrays; ρ is assumed Hermitian.
  void operator()(double t, const Complex* rho, Complex* out) {
    const auto& k = kernels::active();
    const auto n = std::size_t(d_);
    h_.evaluate_into(t, heff_);
    heff_ += damping_;
    // M = Heff·ρ; −iHeffρ + iρHeff† = −iM + (−iM)† for Hermitian ρ.
    k.cgemm(n, n, n, Complex(1.0), heff_.data(), rho, Complex(0.0), m_.data());
    for (Eigen::Index c = 0; c < d_; ++c) {
      for (Eigen::Index r = 0; r < d_; ++r) {
        out[c * d_ + r] = -kI * m_(r, c) + kI * std::conj(m_(c, r));
      }
    }
    if (!diag_weights_.empty()) k.hadamard_acc(n * n, diag_weights_.data(), rho, out);
    for (const auto& j : jumps_) {
      if (j.form == Jump::Form::Sparse) {
        for (const auto& [i, jj, a] : j.entries) {
          for (const auto& [kk, l, b] : j.entries) {
            out[kk * d_ + i] += j.rate * a * std::conj(b) * rho[l * d_ + jj];
          }
        }
      } else {
        k.cgemm(n, n, n, Complex(1.0), j.a.data(), rho, Complex(0.0), t_.data());
        k.cgemm(n, n, n, Complex(j.rate), t_.data(), j.a_dagger.data(), Complex(1.0), out);
      }
    }
  }

 private:
  const TimeDependentHamiltonian& h_;
  Eigen::Index d_;
  Matrix damping_;
  std::vector<double> diag_weights_;
  std::vector<Jump> jumps_;
  Matrix heff_;
  Matrix m_;
  Matrix t_;
};

StepControl step_control(const PropagationOptions& o) {
  return StepControl{o.rtol, o.atol, o.initial_step, o.max_step, o.max_steps};
}

void check_time(double t_final) {
  if (!(t_final >= 0.0) || !std::isfinite(t_final)) throw ConfigurationError("t_final must be finite and >= 0");
}

std::vector<double> stops_for(const std::vector<double>& grid, double t_final) {
  std::vector<double> stops(grid.begin() + 1, grid.end());
  if (stops.empty() || stops.back() < t_final) stops.push_back(t_final);
  return stops;
}

PropagationResult run_lindblad(const LindbladModel& model, const Matrix& x0, double t_final,
                               const std::vector<Observable>& record, const PropagationOptions& options,
                               bool positivity) {
  check_time(t_final);
  const auto start = Clock::now();
  const auto d = Eigen::Index(model.space().dimension());
  if (x0.rows() != d || x0.cols() != d) throw SpaceMismatch("initial operator has the wrong dimension");

  PropagationResult result;
  result.t_final = t_final;
  result.times = output_grid(t_final, options.output_step);
  for (const auto& o : record) result.observables.emplace_back(o.name, std::vector<double>{});

  const Complex trace0 = x0.trace();
  Matrix state = x0;
  auto& diag = result.diagnostics;
  diag.min_eigenvalue = positivity ? 1.0 : 0.0;

  std::size_t next_row = 0;
  auto on_grid = [&](double t, const Matrix& rho) {
    if (next_row >= result.times.size() || t < result.times[next_row]) return;
    const double drift = std::abs(rho.trace() - trace0);
    diag.max_trace_drift = std::max(diag.max_trace_drift, drift);
    if (drift > options.max_trace_drift) {
      std::ostringstream os;
      os << "trace drifted by " << drift << " at t = " << t << " ns (limit " << options.max_trace_drift << ")";
      throw PropagationError(PropagationError::Kind::TraceDrift, os.str());
    }
    if (options.check_physicality) {
      diag.max_hermiticity_error = std::max(diag.max_hermiticity_error, (rho - rho.adjoint()).cwiseAbs().maxCoeff());
      if (positivity) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
        diag.min_eigenvalue = std::min(diag.min_eigenvalue, es.eigenvalues()(0));
      }
    }
    for (std::size_t k = 0; k < record.size(); ++k) result.observables[k].second.push_back(record[k].fn(t, rho));
    if (options.keep_states) result.states.push_back(rho);
    ++next_row;
  };
  on_grid(0.0, state);

  if (t_final > 0.0) {
    LindbladRhs rhs(model);
    const auto n = std::size_t(2 * d * d);
    Dop853 stepper(
        n,
        [&rhs](double t, const double* y, double* dy) {
          rhs(t, reinterpret_cast<const Complex*>(y), reinterpret_cast<Complex*>(dy));
        },
        step_control(options));
    const auto stops = stops_for(result.times, t_final);
    Matrix view(d, d);
    stepper.integrate(0.0, std::span<double>(reinterpret_cast<double*>(state.data()), n), stops,
                      [&](std::size_t, double t, const double* y) {
                        std::copy_n(reinterpret_cast<const Complex*>(y), d * d, view.data());
                        on_grid(t, view);
                      });
    diag.steps = stepper.stats();
  }
  result.final_state = std::move(state);
  diag.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return result;
}

}  // namespace

PropagationResult propagate_schrodinger(const TimeDependentHamiltonian& h, const StateVector& psi0, double t_final,
                                        const std::vector<Observable>& record, const PropagationOptions& options) {
  check_time(t_final);
  if (psi0.space() != h.space()) throw SpaceMismatch("initial state lives on a different space");
  const auto start = Clock::now();
  const auto d = Eigen::Index(h.dimension());

  PropagationResult result;
  result.t_final = t_final;
  result.times = output_grid(t_final, options.output_step);
  for (const auto& o : record) result.observables.emplace_back(o.name, std::vector<double>{});

  Matrix state = psi0.amplitudes();
  auto& diag = result.diagnostics;
  std::size_t next_row = 0;
  auto on_grid = [&](double t, const Matrix& psi) {
    if (next_row >= result.times.size() || t < result.times[next_row]) return;
    diag.max_trace_drift = std::max(diag.max_trace_drift, std::abs(psi.norm() - 1.0));
    for (std::size_t k = 0; k < record.size(); ++k) result.observables[k].second.push_back(record[k].fn(t, psi));
    if (options.keep_states) result.states.push_back(psi);
    ++next_row;
  };
  on_grid(0.0, state);

  if (t_final > 0.0) {
    Matrix hm(d, d);
    const auto n = std::size_t(2 * d);
    Dop853 stepper(
        n,
        [&](double t, const double* y, double* dy) {
          h.evaluate_into(t, hm);
          kernels::active().cgemm(std::size_t(d), 1, std::size_t(d), -kI, hm.data(),
                                  reinterpret_cast<const Complex*>(y), Complex(0.0), reinterpret_cast<Complex*>(dy));
        },
        step_control(options));
    const auto stops = stops_for(result.times, t_final);
    Matrix view(d, 1);
    stepper.integrate(0.0, std::span<double>(reinterpret_cast<double*>(state.data()), n), stops,
                      [&](std::size_t, double t, const double* y) {
                        std::copy_n(reinterpret_cast<const Complex*>(y), d, view.data());
                        on_grid(t, view);
                      });
    diag.steps = stepper.stats();
  }
  result.final_state = std::move(state);
  diag.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return result;
}

PropagationResult propagate_lindblad(const LindbladModel& model, const DensityMatrix& rho0, double t_final,
                                     const std::vector<Observable>& record, const PropagationOptions& options) {
  if (rho0.space() != model.space()) throw SpaceMismatch("initial state lives on a different space");
  return run_lindblad(model, rho0.matrix(), t_final, record, options, true);
}

PropagationResult propagate_lindblad_hermitian(const LindbladModel& model, const Matrix& x0, double t_final,
                                               const std::vector<Observable>& record,
                                               const PropagationOptions& options) {
  const double scale = std::max(1.0, x0.cwiseAbs().maxCoeff());
  if ((x0 - x0.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw ConfigurationError("linear-response input must be Hermitian");
  }
  return run_lindblad(model, x0, t_final, record, options, false);
}

double expectation(const Matrix& rho, const Matrix& op) { return (rho * op).trace().real(); }

double expectation(const DensityMatrix& rho, const OperatorMatrix& op) {
  if (rho.space() != op.space()) throw SpaceMismatch("operator and state live on different spaces");
  return expectation(rho.matrix(), op.matrix());
}

std::vector<double> populations(const Matrix& rho, const std::vector<Vector>& basis) {
  std::vector<double> out;
  out.reserve(basis.size());
  for (const auto& v : basis) out.push_back((v.adjoint() * rho * v)(0, 0).real());
  return out;
}

std::vector<double> populations(const DensityMatrix& rho, const std::vector<StateVector>& basis) {
  std::vector<Vector> vs;
  for (const auto& b : basis) {
    if (b.space() != rho.space()) throw SpaceMismatch("basis vector lives on a different space");
    vs.push_back(b.amplitudes());
  }
  return populations(rho.matrix(), vs);
}

}  // namespace holoqed
