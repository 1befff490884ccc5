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

#include "holoqed/hamiltonians.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "holoqed/error.hpp"

namespace holoqed {

namespace {

bool is_diagonal(const Matrix& m) {
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      if (r != c && m(r, c) != Complex(0.0)) return false;
    }
  }
  return true;
}

bool finite(double x) { return std::isfinite(x); }

Matrix unit_matrix(Eigen::Index d, Eigen::Index r, Eigen::Index c) {
  Matrix m = Matrix::Zero(d, d);
  m(r, c) = 1.0;
  return m;
}

}  // namespace

double Tone::operator()(double t) const { return amplitude * std::cos(frequency * t + phase); }

// ---------------------------------------------------------------------------
// Frame

Frame Frame::from(const OperatorMatrix& h0) {
  if (!h0.is_hermitian()) throw ConfigurationError("frame generator must be Hermitian");
  Frame f;
  const auto d = Eigen::Index(h0.dimension());
  if (is_diagonal(h0.matrix())) {
    f.diagonal = true;
    f.vectors = Matrix::Identity(d, d);
    f.energies = h0.matrix().diagonal().real();
  } else {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h0.matrix());
    if (es.info() != Eigen::Success) throw NumericalError("frame eigendecomposition failed");
    f.vectors = es.eigenvectors();
    f.energies = es.eigenvalues();
  }
  return f;
}

Matrix Frame::to_frame(const Matrix& x, double t) const {
  const auto d = energies.size();
  Vector phase(d);
  for (Eigen::Index j = 0; j < d; ++j) phase(j) = std::polar(1.0, energies(j) * t);
  Matrix m = diagonal ? x : Matrix(vectors.adjoint() * x * vectors);
  for (Eigen::Index c = 0; c < d; ++c) {
    for (Eigen::Index r = 0; r < d; ++r) m(r, c) *= phase(r) * std::conj(phase(c));
  }
  return diagonal ? m : Matrix(vectors * m * vectors.adjoint());
}

Vector Frame::evolve(const Vector& psi, double t) const {
  Vector w = diagonal ? psi : Vector(vectors.adjoint() * psi);
  for (Eigen::Index j = 0; j < w.size(); ++j) w(j) *= std::polar(1.0, -energies(j) * t);
  return diagonal ? w : Vector(vectors * w);
}

// ---------------------------------------------------------------------------
// TimeDependentHamiltonian

TimeDependentHamiltonian::TimeDependentHamiltonian(OperatorMatrix static_part) : static_part_(std::move(static_part)) {
  if (!static_part_.is_hermitian()) throw ConfigurationError("static Hamiltonian part is not Hermitian");
}

TimeDependentHamiltonian& TimeDependentHamiltonian::add_term(OperatorMatrix op, Envelope envelope, std::string name) {
  if (op.space() != space()) {
    throw SpaceMismatch("term '" + name + "' lives on " + op.space().describe() + ", expected " + space().describe());
  }
  if (!op.is_hermitian()) throw ConfigurationError("term '" + name + "' is not Hermitian");
  if (!envelope) throw ConfigurationError("term '" + name + "' has no envelope");
  if (frame_) terms_in_eigenbasis_.push_back(frame_->vectors.adjoint() * op.matrix() * frame_->vectors);
  terms_.push_back(ModulationTerm{std::move(op), std::move(envelope), std::move(name), std::nullopt});
  return *this;
}

TimeDependentHamiltonian& TimeDependentHamiltonian::add_tone(OperatorMatrix op, Tone tone, std::string name) {
  add_term(std::move(op), [tone](double t) { return tone(t); }, std::move(name));
  terms_.back().tone = tone;
  return *this;
}

TimeDependentHamiltonian& TimeDependentHamiltonian::operator+=(const TimeDependentHamiltonian& other) {
  if (frame_ || other.frame_) throw ConfigurationError("cannot add Hamiltonians expressed in a rotating frame");
  if (other.space() != space()) throw SpaceMismatch("Hamiltonians act on different spaces");
  static_part_ = static_part_ + other.static_part_;
  for (const auto& term : other.terms_) terms_.push_back(term);
  return *this;
}

Matrix TimeDependentHamiltonian::evaluate(double t) const {
  Matrix out;
  evaluate_into(t, out);
  return out;
}

void TimeDependentHamiltonian::evaluate_into(double t, Matrix& out) const {
  if (!frame_) {
    out = static_part_.matrix();
    for (const auto& term : terms_) {
      const double e = term.envelope(t);
      if (e != 0.0) out.noalias() += e * term.op.matrix();
    }
    return;
  }
  Matrix m = static_in_eigenbasis_;
  for (std::size_t k = 0; k < terms_.size(); ++k) {
    const double e = terms_[k].envelope(t);
    if (e != 0.0) m.noalias() += e * terms_in_eigenbasis_[k];
  }
  const auto d = m.rows();
  Vector phase(d);
  for (Eigen::Index j = 0; j < d; ++j) phase(j) = std::polar(1.0, frame_->energies(j) * t);
  for (Eigen::Index c = 0; c < d; ++c) {
    const Complex pc = std::conj(phase(c));
    for (Eigen::Index r = 0; r < d; ++r) m(r, c) *= phase(r) * pc;
  }
  if (frame_->diagonal) {
    out = std::move(m);
  } else {
    out.noalias() = frame_->vectors * m * frame_->vectors.adjoint();
  }
}

TimeDependentHamiltonian rotating_frame(const TimeDependentHamiltonian& h, const OperatorMatrix& h0) {
  if (h.frame_) throw ConfigurationError("Hamiltonian is already expressed in a rotating frame");
  if (h0.space() != h.space()) throw SpaceMismatch("frame generator lives on a different space");
  TimeDependentHamiltonian out(h.static_part_);
  out.terms_ = h.terms_;
  out.frame_ = Frame::from(h0);
  const Matrix& v = out.frame_->vectors;
  out.static_in_eigenbasis_ = v.adjoint() * (h.static_part_.matrix() - h0.matrix()) * v;
  out.terms_in_eigenbasis_.reserve(h.terms_.size());
  for (const auto& term : h.terms_) out.terms_in_eigenbasis_.push_back(v.adjoint() * term.op.matrix() * v);
  return out;
}

// ---------------------------------------------------------------------------
// Single qubit

double DriveSpec::omega() const { return std::hypot(omega1, omega2); }

double DriveSpec::theta() const {
  double th = 2.0 * std::atan2(omega2, omega1);
  if (th < 0.0) th += 2.0 * kTwoPi;
  if (th >= kTwoPi) th -= kTwoPi;
  return th;
}

double DriveSpec::f1(double t) const { return omega1 * std::cos(2.0 * g0 * t); }
double DriveSpec::f2(double t) const { return omega2 * std::cos((omega_c + g0) * t + phi); }

void DriveSpec::validate() const {
  if (!finite(omega1) || !finite(omega2) || !finite(phi) || !finite(g0) || !finite(omega_c)) {
    throw ConfigurationError("drive parameters must be finite");
  }
  if (!(omega() > 0.0)) throw ConfigurationError("drive amplitude Omega must be positive");
}

DriveSpec DriveSpec::for_gate(double theta, double phi, double omega, double g0, double omega_c) {
  DriveSpec s{omega * std::cos(theta / 2.0), omega * std::sin(theta / 2.0), phi, g0, omega_c};
  s.validate();
  return s;
}

HilbertSpace jc_space(std::size_t transmon_levels, std::size_t fock_cutoff) {
  return HilbertSpace({Factor{"q", transmon_levels, FactorKind::Transmon}, Factor{"c", fock_cutoff, FactorKind::Fock}});
}

namespace {

struct JcFactors {
  std::string q;
  std::string c;
  std::size_t levels;
  std::size_t cutoff;
};

JcFactors jc_factors(const HilbertSpace& space) {
  const auto iq = space.unique_index_of(FactorKind::Transmon);
  const auto ic = space.unique_index_of(FactorKind::Fock);
  const auto& fq = space.factors()[iq];
  const auto& fc = space.factors()[ic];
  if (fq.dimension != 2 && fq.dimension != 3) {
    throw UnsupportedDimension("transmon must keep 2 or 3 levels, got " + std::to_string(fq.dimension));
  }
  return {fq.label, fc.label, fq.dimension, fc.dimension};
}

OperatorMatrix on_factor(const Matrix& m, const HilbertSpace& space, const std::string& label) {
  const auto& f = space.factor(label);
  return embed(OperatorMatrix(HilbertSpace::single(f.label, f.dimension, f.kind), m), space, label);
}

}  // namespace

TimeDependentHamiltonian build_jc(double omega_q, double omega_c, double g0, const HilbertSpace& space,
                                  double anharmonicity) {
  const auto f = jc_factors(space);
  const auto nq = Eigen::Index(f.levels);
  Matrix hq = Matrix::Zero(nq, nq);
  hq(1, 1) = omega_q;
  Matrix raise = Matrix::Zero(nq, nq);  // σ⁺
  raise(1, 0) = 1.0;
  if (nq == 3) {
    hq(2, 2) = 2.0 * omega_q - anharmonicity;
    raise(2, 1) = std::sqrt(2.0);
  }
  const auto a = annihilation(f.cutoff, f.c);
  const Matrix n = a.matrix().adjoint() * a.matrix();

  const auto a_full = on_factor(a.matrix(), space, f.c);
  const auto sp_full = on_factor(raise, space, f.q);
  const auto coupling = a_full * sp_full;  // aσ⁺
  const OperatorMatrix h =
      on_factor(hq, space, f.q) + omega_c * on_factor(n, space, f.c) + g0 * (coupling + coupling.adjoint());
  return TimeDependentHamiltonian(h);
}

TimeDependentHamiltonian build_drive(const DriveSpec& spec, const HilbertSpace& space, DriveLadder ladder) {
  spec.validate();
  const auto f = jc_factors(space);
  const auto nq = Eigen::Index(f.levels);
  Matrix sz = Matrix::Zero(nq, nq);
  Matrix sx = Matrix::Zero(nq, nq);
  for (Eigen::Index j = 0; j < nq; ++j) sz(j, j) = 2.0 * double(j) - 1.0;
  sx(0, 1) = sx(1, 0) = 1.0;
  if (nq == 3 && ladder == DriveLadder::Harmonic) sx(1, 2) = sx(2, 1) = std::sqrt(2.0);

  TimeDependentHamiltonian h(OperatorMatrix::zero(space));
  h.add_tone(2.0 * on_factor(sz, space, f.q), Tone{spec.omega1, 2.0 * spec.g0, 0.0}, "f1_sigma_z");
  h.add_tone(2.0 * std::sqrt(2.0) * on_factor(sx, space, f.q), Tone{spec.omega2, spec.omega_c + spec.g0, spec.phi},
             "f2_sigma_x");
  return h;
}

HilbertSpace dressed_space() { return HilbertSpace::single("dressed", 3, FactorKind::Dressed); }

OperatorMatrix dressed_energies(double g0, double omega_c) {
  Matrix e = Matrix::Zero(3, 3);
  e(1, 1) = omega_c - g0;
  e(2, 2) = omega_c + g0;
  return OperatorMatrix(dressed_space(), e);
}

TimeDependentHamiltonian build_h1_reduced(const DriveSpec& spec, ReducedVariant variant) {
  spec.validate();
  const auto space = dressed_space();
  Matrix m2 = Matrix::Zero(3, 3);
  m2(0, 1) = m2(1, 0) = -2.0;
  m2(0, 2) = m2(2, 0) = 2.0;
  Matrix m1 = Matrix::Zero(3, 3);
  m1(1, 2) = m1(2, 1) = -2.0;
  if (variant == ReducedVariant::Projected) m1(0, 0) = -2.0;

  TimeDependentHamiltonian h(dressed_energies(spec.g0, spec.omega_c));
  h.add_tone(OperatorMatrix(space, m1), Tone{spec.omega1, 2.0 * spec.g0, 0.0}, "f1");
  h.add_tone(OperatorMatrix(space, m2), Tone{spec.omega2, spec.omega_c + spec.g0, spec.phi}, "f2");
  return h;
}

EffectiveModel build_heff1(const DriveSpec& spec) {
  spec.validate();
  const auto space = dressed_space();
  const double half = spec.theta() / 2.0;
  const Complex e_phi = std::polar(1.0, spec.phi);
  Vector b(3);
  b << std::sin(half) * e_phi, -std::cos(half), 0.0;
  Vector d(3);
  d << std::cos(half), std::sin(half) * std::conj(e_phi), 0.0;
  Vector plus = Vector::Zero(3);
  plus(2) = 1.0;
  const Matrix bp = b * plus.adjoint();
  return EffectiveModel{OperatorMatrix(space, spec.omega() * (bp + bp.adjoint())), StateVector(space, b),
                        StateVector(space, d)};
}

// ---------------------------------------------------------------------------
// Cell

CellSpec CellSpec::uniform(double omega_c, double g, double t) {
  const double delta = 4.0 * g;
  CellSpec cell;
  cell.omega_c = {omega_c, omega_c + 3.0 * delta, omega_c + delta};
  cell.g = {g, g, g};
  cell.t13 = t;
  cell.t23 = t;
  cell.modulation = 6.0 * g;
  cell.validate();
  return cell;
}

void CellSpec::validate() const {
  for (std::size_t j = 0; j < 3; ++j) {
    if (!finite(omega_c[j]) || !(omega_c[j] > 0.0)) throw ConfigurationError("cell omega_c must be positive");
    if (!finite(g[j]) || !(g[j] > 0.0)) throw ConfigurationError("cell couplings g must be positive");
  }
  if (!finite(t13) || !finite(t23)) throw ConfigurationError("cell hopping strengths must be finite");
  if (!finite(modulation) || !(modulation > 0.0)) throw ConfigurationError("cell modulation must be positive");
  const double g0 = g[0];
  const double tol = 1e-9 * std::max(1.0, omega_c[0]);
  if (std::abs(g[1] - g0) > tol || std::abs(g[2] - g0) > tol) {
    throw ConfigurationError("cell requires equal couplings g1 = g2 = g3");
  }
  const double delta = 4.0 * g0;
  if (std::abs(omega_c[2] - omega_c[0] - delta) > tol || std::abs(omega_c[1] - omega_c[0] - 3.0 * delta) > tol) {
    std::ostringstream os;
    os << "cell frequencies must be (w, w+3d, w+d) with d = 4g = " << delta << " rad/ns";
    throw ConfigurationError(os.str());
  }
}

HilbertSpace cell_space() {
  return HilbertSpace({Factor{"u1", 3, FactorKind::Dressed}, Factor{"u2", 3, FactorKind::Dressed},
                       Factor{"u3", 3, FactorKind::Dressed}});
}

namespace {

const char* kUnit[3] = {"u1", "u2", "u3"};

OperatorMatrix on_unit(const Matrix& m, std::size_t unit) {
  return embed(OperatorMatrix(HilbertSpace::single(kUnit[unit], 3, FactorKind::Dressed), m), cell_space(),
               kUnit[unit]);
}

}  // namespace

OperatorMatrix cell_free_hamiltonian(const CellSpec& cell) {
  OperatorMatrix h = OperatorMatrix::zero(cell_space());
  for (std::size_t j = 0; j < 3; ++j) {
    Matrix e = Matrix::Zero(3, 3);
    e(1, 1) = cell.omega_c[j] - cell.g[j];
    e(2, 2) = cell.omega_c[j] + cell.g[j];
    h = h + on_unit(e, j);
  }
  return h;
}

OperatorMatrix cell_hopping(std::size_t j, std::size_t k) {
  if (j > 2 || k > 2 || j == k) throw ConfigurationError("hopping needs two distinct units in {0,1,2}");
  Matrix create = Matrix::Zero(3, 3);
  create(1, 0) = create(2, 0) = 1.0 / std::sqrt(2.0);
  const OperatorMatrix hop = on_unit(create, j) * on_unit(create.adjoint(), k);
  return hop + hop.adjoint();
}

TimeDependentHamiltonian build_cell_ac(const CellSpec& cell) {
  cell.validate();
  TimeDependentHamiltonian h(cell_free_hamiltonian(cell));
  h.add_tone(cell_hopping(0, 2), Tone{4.0 * cell.t13, cell.modulation, 0.0}, "J13");
  h.add_tone(cell_hopping(1, 2), Tone{4.0 * cell.t23, cell.modulation, 0.0}, "J23");
  return h;
}

OperatorMatrix build_cell_rwa(const CellSpec& cell) {
  cell.validate();
  const Matrix minus_g = unit_matrix(3, 1, 0);  // |−⟩⟨G|
  const Matrix g_plus = unit_matrix(3, 0, 2);   // |G⟩⟨+|
  const OperatorMatrix k13 = on_unit(minus_g, 0) * on_unit(g_plus, 2);
  const OperatorMatrix k23 = on_unit(minus_g, 1) * on_unit(g_plus, 2);
  return cell.t13 * (k13 + k13.adjoint()) + cell.t23 * (k23 + k23.adjoint());
}

OperatorMatrix time_average(const TimeDependentHamiltonian& lab, const OperatorMatrix& h0, double tolerance) {
  if (lab.frame()) throw ConfigurationError("time_average expects a lab-frame Hamiltonian");
  const Frame frame = Frame::from(h0);
  const Matrix& v = frame.vectors;
  const auto d = Eigen::Index(lab.dimension());
  auto bohr = [&](Eigen::Index r, Eigen::Index c) { return frame.energies(r) - frame.energies(c); };

  const Matrix s = v.adjoint() * (lab.static_part().matrix() - h0.matrix()) * v;
  Matrix avg = Matrix::Zero(d, d);
  for (Eigen::Index c = 0; c < d; ++c) {
    for (Eigen::Index r = 0; r < d; ++r) {
      if (std::abs(bohr(r, c)) <= tolerance) avg(r, c) += s(r, c);
    }
  }
  for (const auto& term : lab.terms()) {
    if (!term.tone) throw ConfigurationError("term '" + term.name + "' is not a single tone");
    const Tone& tone = *term.tone;
    const Matrix x = v.adjoint() * term.op.matrix() * v;
    for (Eigen::Index c = 0; c < d; ++c) {
      for (Eigen::Index r = 0; r < d; ++r) {
        if (x(r, c) == Complex(0.0)) continue;
        const double w = bohr(r, c);
        // cos(νt+ϕ)·e^{iwt} = ½e^{i((w+ν)t+ϕ)} + ½e^{i((w−ν)t−ϕ)}
        Complex weight = 0.0;
        if (std::abs(w + tone.frequency) <= tolerance) weight += 0.5 * std::polar(1.0, tone.phase);
        if (std::abs(w - tone.frequency) <= tolerance) weight += 0.5 * std::polar(1.0, -tone.phase);
        avg(r, c) += tone.amplitude * weight * x(r, c);
      }
    }
  }
  return OperatorMatrix(lab.space(), frame.diagonal ? avg : Matrix(v * avg * v.adjoint()));
}

std::vector<TransitionGap> pair_transition_gaps(const CellSpec& cell, std::size_t j, std::size_t k) {
  cell.validate();
  const auto space = cell_space();
  const OperatorMatrix h0 = cell_free_hamiltonian(cell);
  const OperatorMatrix hop = cell_hopping(j, k);
  static const char* kState = "G-+";
  std::vector<TransitionGap> out;
  const auto d = space.dimension();
  for (std::size_t c = 0; c < d; ++c) {
    for (std::size_t r = 0; r < c; ++r) {
      if (hop(r, c) == Complex(0.0)) continue;
      const auto lr = space.levels_of(r);
      const auto lc = space.levels_of(c);
      bool spectators_ground = true;
      for (std::size_t u = 0; u < 3; ++u) {
        if (u != j && u != k && (lr[u] != 0 || lc[u] != 0)) spectators_ground = false;
      }
      if (!spectators_ground) continue;
      TransitionGap gap;
      gap.from = r;
      gap.to = c;
      gap.gap = std::abs(h0(c, c).real() - h0(r, r).real());
      std::ostringstream os;
      os << '|' << kState[lr[j]] << kState[lr[k]] << ">_" << j + 1 << k + 1 << " <-> |" << kState[lc[j]]
         << kState[lc[k]] << ">_" << j + 1 << k + 1;
      gap.label = os.str();
      out.push_back(gap);
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.gap < b.gap; });
  return out;
}

}  // namespace holoqed
