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
#include <numbers>
#include <random>

#include "doctest.h"
#include "holoqed/error.hpp"
#include "holoqed/hamiltonians.hpp"
#include "oracle.hpp"

using namespace holoqed;

namespace {

constexpr double kPi = std::numbers::pi;

DriveSpec operating_drive(double theta, double phi) {
  return DriveSpec::for_gate(theta, phi, mhz_to_angular(8.0), mhz_to_angular(300.0), mhz_to_angular(6000.0));
}

double hermiticity_defect(const Matrix& m) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.adjoint()).cwiseAbs().maxCoeff() / scale;
}

void check_hermitian_at_random_times(const TimeDependentHamiltonian& h, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> t(0.0, 200.0);
  for (int k = 0; k < 100; ++k) CHECK(hermiticity_defect(h.evaluate(t(rng))) < 1e-12);
}

}  // namespace

TEST_SUITE("hamiltonians") {
  TEST_CASE("jc spectrum at resonance") {
    const double wc = mhz_to_angular(6000.0);
    const double g0 = mhz_to_angular(300.0);
    const auto s = jc_space(2, 4);
    const auto h = build_jc(wc, wc, g0, s);
    CHECK(h.is_static());
    const auto b = dressed_basis(g0, wc, s);
    const Matrix& m = h.static_part().matrix();
    CHECK(std::abs(b.plus.amplitudes().dot(m * b.plus.amplitudes()) - (wc + g0)) < 1e-12 * wc);
    CHECK(std::abs(b.minus.amplitudes().dot(m * b.minus.amplitudes()) - (wc - g0)) < 1e-12 * wc);
  }

  TEST_CASE("jc without coupling is diagonal") {
    const auto h = build_jc(1.3, 1.1, 0.0, jc_space(3, 5), 0.2);
    const Matrix& m = h.static_part().matrix();
    CHECK((m - Matrix(m.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("three-level jc entries") {
    const double wq = 2.0, wc = 2.0, g0 = 0.1, alpha = mhz_to_angular(310.0);
    const auto s = jc_space(3, 3);
    const Matrix m = build_jc(wq, wc, g0, s, alpha).static_part().matrix();
    const auto idx = [&](std::size_t q, std::size_t c) { return Eigen::Index(s.flat_index({q, c})); };
    // level-2 energy relative to level 0
    CHECK(std::abs(m(idx(2, 0), idx(2, 0)) - (2.0 * wq - alpha)) < 1e-14);
    CHECK(std::abs(m(idx(1, 0), idx(0, 1)) - g0) < 1e-15);
    CHECK(std::abs(m(idx(2, 0), idx(1, 1)) - std::sqrt(2.0) * g0) < 1e-15);
    CHECK(std::abs(m(idx(1, 1), idx(0, 2)) - std::sqrt(2.0) * g0) < 1e-15);
    CHECK(m(idx(0, 0), idx(0, 0)) == Complex(0.0));
  }

  TEST_CASE("jc rejects spaces without the expected factors") {
    CHECK_THROWS(build_jc(1.0, 1.0, 0.1, HilbertSpace::single("x", 4)));
  }

  TEST_CASE("drive amplitudes and angles") {
    const auto h = DriveSpec::for_gate(kPi / 4, 0.0, 1.0, 0.3, 6.0);
    CHECK(std::abs(h.omega1 - 0.924) < 1e-3);
    CHECK(std::abs(h.omega2 - 0.383) < 1e-3);
    DriveSpec ratio{0.924, 0.383, 0.0, 0.3, 6.0};
    CHECK(std::abs(ratio.theta() - kPi / 4) < 1e-3);
    DriveSpec equal{0.05, 0.05, 0.0, 0.3, 6.0};
    CHECK(equal.theta() == doctest::Approx(kPi / 2).epsilon(1e-15));
    CHECK_THROWS_AS((DriveSpec{0.0, 0.0, 0.0, 0.3, 6.0}.validate()), ConfigurationError);
    CHECK_THROWS_AS((DriveSpec{std::nan(""), 0.1, 0.0, 0.3, 6.0}.validate()), ConfigurationError);
    // θ round trip over the full circle
    for (double th : {0.1, 1.0, 3.0, 4.0, 6.0}) CHECK(std::abs(DriveSpec::for_gate(th, 0.0, 1.0, 1.0, 1.0).theta() - th) < 1e-12);
  }

  TEST_CASE("pure sigma-z drive is diagonal") {
    DriveSpec spec{0.05, 0.0, 0.0, 0.3, 6.0};
    const auto h = build_drive(spec, jc_space(3, 3), DriveLadder::Harmonic);
    for (double t : {0.0, 0.37, 12.5}) {
      const Matrix m = h.evaluate(t);
      CHECK((m - Matrix(m.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0);
    }
  }

  TEST_CASE("drive operator content") {
    const auto spec = operating_drive(kPi / 3, 0.7);
    const auto s = jc_space(3, 2);
    const auto idx = [&](std::size_t q, std::size_t c) { return Eigen::Index(s.flat_index({q, c})); };
    const double t = 1.234;
    const Matrix qubit = build_drive(spec, s, DriveLadder::Qubit).evaluate(t);
    const Matrix harm = build_drive(spec, s, DriveLadder::Harmonic).evaluate(t);
    const double f1 = spec.omega1 * std::cos(2.0 * spec.g0 * t);
    const double f2 = spec.omega2 * std::cos((spec.omega_c + spec.g0) * t + spec.phi);
    CHECK(std::abs(qubit(idx(0, 0), idx(0, 0)) + 2.0 * f1) < 1e-14);
    CHECK(std::abs(qubit(idx(1, 1), idx(1, 1)) - 2.0 * f1) < 1e-14);
    CHECK(std::abs(qubit(idx(2, 0), idx(2, 0)) - 6.0 * f1) < 1e-14);
    CHECK(std::abs(qubit(idx(0, 1), idx(1, 1)) - 2.0 * std::sqrt(2.0) * f2) < 1e-14);
    CHECK(qubit(idx(1, 0), idx(2, 0)) == Complex(0.0));
    CHECK(std::abs(harm(idx(1, 0), idx(2, 0)) - 4.0 * f2) < 1e-14);
    CHECK(std::abs(spec.f1(t) - f1) < 1e-15);
    CHECK(std::abs(spec.f2(t) - f2) < 1e-15);
  }

  TEST_CASE("reduced hamiltonian entries") {
    const auto spec = operating_drive(kPi / 4, kPi);
    const auto printed = build_h1_reduced(spec, ReducedVariant::Truncated);
    const auto projected = build_h1_reduced(spec, ReducedVariant::Projected);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ts(0.0, 100.0);
    for (int k = 0; k < 100; ++k) {
      const double t = ts(rng);
      const Matrix m = printed.evaluate(t);
      const Matrix p = projected.evaluate(t);
      CHECK(std::abs(m(0, 1) + 2.0 * spec.f2(t)) < 1e-14);
      CHECK(std::abs(m(0, 2) - 2.0 * spec.f2(t)) < 1e-14);
      CHECK(std::abs(m(1, 2) + 2.0 * spec.f1(t)) < 1e-14);
      CHECK(m(0, 0) == Complex(0.0));
      CHECK(std::abs(p(0, 0) + 2.0 * spec.f1(t)) < 1e-14);
      CHECK(std::abs(m(1, 1) - (spec.omega_c - spec.g0)) < 1e-12);
      CHECK(std::abs(m(2, 2) - (spec.omega_c + spec.g0)) < 1e-12);
      CHECK(hermiticity_defect(m) < 1e-12);
      CHECK(hermiticity_defect(p) < 1e-12);
    }
  }

  TEST_CASE("reduced hamiltonian is the dressed projection of the full model") {
    // with two transmon levels the projection onto {G, -, +} is exact for the drive
    const auto spec = operating_drive(kPi / 3, 0.4);
    const auto s = jc_space(2, 3);
    auto full = build_jc(spec.omega_c, spec.omega_c, spec.g0, s);
    full += build_drive(spec, s);
    const auto basis = dressed_basis(spec.g0, spec.omega_c, s);
    Matrix p(Eigen::Index(s.dimension()), 3);
    p.col(0) = basis.ground.amplitudes();
    p.col(1) = basis.minus.amplitudes();
    p.col(2) = basis.plus.amplitudes();
    const auto reduced = build_h1_reduced(spec, ReducedVariant::Projected);
    for (double t : {0.0, 0.3, 7.7}) {
      const Matrix proj = p.adjoint() * full.evaluate(t) * p;
      CHECK((proj - reduced.evaluate(t)).cwiseAbs().maxCoeff() < 1e-12);
    }
  }

  TEST_CASE("effective hamiltonian bright and dark states") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
    for (int k = 0; k < 50; ++k) {
      const auto spec = operating_drive(u(rng) / 2.0, u(rng));
      const auto m = build_heff1(spec);
      CHECK((m.h.matrix() * m.dark.amplitudes()).norm() < 1e-15);
      CHECK(std::abs(m.h(2, 0) * m.bright.amplitudes()(0) + m.h(2, 1) * m.bright.amplitudes()(1) - spec.omega()) <
            1e-15);
      CHECK(std::abs(m.bright.inner(m.dark)) < 1e-15);
      CHECK(m.h.is_hermitian());
    }
    const auto flip = build_heff1(operating_drive(kPi, 0.0));
    CHECK(std::abs(std::abs(flip.bright.amplitudes()(0)) - 1.0) < 1e-15);
    CHECK(std::abs(flip.h(1, 2)) < 1e-15);
  }

  TEST_CASE("hermiticity at random times") {
    const auto spec = operating_drive(kPi / 4, kPi);
    for (auto ladder : {DriveLadder::Qubit, DriveLadder::Harmonic}) {
      const auto s = jc_space(3, 5);
      auto h = build_jc(spec.omega_c, spec.omega_c, spec.g0, s, mhz_to_angular(310.0));
      h += build_drive(spec, s, ladder);
      check_hermitian_at_random_times(h, 1);
      check_hermitian_at_random_times(rotating_frame(h, h.static_part()), 2);
    }
    check_hermitian_at_random_times(build_h1_reduced(spec), 3);
    const auto cell = CellSpec::uniform(mhz_to_angular(6000.0), mhz_to_angular(300.0), mhz_to_angular(6.0));
    check_hermitian_at_random_times(build_cell_ac(cell), 4);
    check_hermitian_at_random_times(rotating_frame(build_cell_ac(cell), cell_free_hamiltonian(cell)), 5);
  }

  TEST_CASE("terms are validated") {
    TimeDependentHamiltonian h(OperatorMatrix::zero(dressed_space()));
    Matrix nh = Matrix::Zero(3, 3);
    nh(0, 1) = 1.0;
    CHECK_THROWS_AS(h.add_term(OperatorMatrix(dressed_space(), nh), [](double) { return 1.0; }), ConfigurationError);
    CHECK_THROWS_AS(h.add_term(OperatorMatrix::identity(HilbertSpace::single("y", 3)), [](double) { return 1.0; }),
                    SpaceMismatch);
    auto framed = rotating_frame(h, OperatorMatrix::zero(dressed_space()));
    CHECK_THROWS(framed += h);
  }

  TEST_CASE("frame of the generator itself is zero") {
    std::mt19937_64 rng(8);
    const auto s = HilbertSpace::single("x", 5);
    const OperatorMatrix h0(s, oracle::random_hermitian(rng, 5, 2.0));
    const auto framed = rotating_frame(TimeDependentHamiltonian(h0), h0);
    for (double t : {0.0, 0.5, 3.0}) CHECK(framed.evaluate(t).cwiseAbs().maxCoeff() < 1e-13);
  }

  TEST_CASE("frame transform matches the explicit conjugation") {
    std::mt19937_64 rng(9);
    const auto s = HilbertSpace::single("x", 4);
    const OperatorMatrix h0(s, oracle::random_hermitian(rng, 4, 1.5));
    const OperatorMatrix v(s, oracle::random_hermitian(rng, 4, 0.5));
    TimeDependentHamiltonian h(h0);
    h.add_tone(v, Tone{0.8, 1.9, 0.3});
    const auto framed = rotating_frame(h, h0);
    for (double t : {0.0, 0.77, 4.2}) {
      const Matrix u = oracle::expm_eigen(Complex(0, 1) * h0.matrix() * t);
      const Matrix expected = u * (0.8 * std::cos(1.9 * t + 0.3) * v.matrix()) * u.adjoint();
      CHECK((framed.evaluate(t) - expected).cwiseAbs().maxCoeff() < 1e-12);
    }
  }

  TEST_CASE("cell validation") {
    const double w = mhz_to_angular(6000.0), g = mhz_to_angular(300.0), t = mhz_to_angular(6.0);
    const auto cell = CellSpec::uniform(w, g, t);
    CHECK(cell.omega_c[1] - cell.omega_c[0] == doctest::Approx(12.0 * g));
    CHECK(cell.omega_c[2] - cell.omega_c[0] == doctest::Approx(4.0 * g));
    CHECK(cell.modulation == doctest::Approx(6.0 * g));
    auto bad = cell;
    bad.omega_c[2] += 0.01;
    CHECK_THROWS_AS(bad.validate(), ConfigurationError);
    bad = cell;
    bad.g[1] *= 1.1;
    CHECK_THROWS_AS(bad.validate(), ConfigurationError);
    bad = cell;
    bad.g[0] = -g;
    CHECK_THROWS_AS(bad.validate(), ConfigurationError);
    CHECK_THROWS(cell_hopping(0, 0));
    CHECK_THROWS(cell_hopping(0, 3));
  }

  TEST_CASE("cell hopping in dressed states") {
    const Matrix hop = cell_hopping(0, 2).matrix();
    const auto s = cell_space();
    const auto idx = [&](std::size_t a, std::size_t b, std::size_t c) { return Eigen::Index(s.flat_index({a, b, c})); };
    // a1† a3 ↦ ½(|−⟩+|+⟩)₁⟨G| ⊗ |G⟩₃(⟨−|+⟨+|)
    CHECK(std::abs(hop(idx(1, 0, 0), idx(0, 0, 2)) - 0.5) < 1e-15);
    CHECK(std::abs(hop(idx(2, 0, 1), idx(0, 0, 1)) - 0.0) < 1e-15);
    CHECK(std::abs(hop(idx(0, 0, 1), idx(1, 0, 0)) - 0.5) < 1e-15);
    CHECK(OperatorMatrix(s, hop).is_hermitian());
  }

  TEST_CASE("time average of the ac cell is the rwa cell") {
    const double w = mhz_to_angular(6000.0), g = mhz_to_angular(300.0);
    for (double tmhz : {5.0, 6.0, 10.0}) {
      auto cell = CellSpec::uniform(w, g, mhz_to_angular(tmhz));
      cell.t23 = 0.7 * cell.t13;
      const auto avg = time_average(build_cell_ac(cell), cell_free_hamiltonian(cell));
      CHECK((avg.matrix() - build_cell_rwa(cell).matrix()).cwiseAbs().maxCoeff() < 1e-15);
    }
  }

  TEST_CASE("time average needs tone metadata") {
    TimeDependentHamiltonian h(OperatorMatrix::zero(dressed_space()));
    h.add_term(dressed_energies(0.1, 1.0), [](double t) { return std::cos(t); }, "bare");
    CHECK_THROWS_AS(time_average(h, OperatorMatrix::zero(dressed_space())), ConfigurationError);
  }

  TEST_CASE("ac cell frame phases") {
    const double w = mhz_to_angular(6000.0), g = mhz_to_angular(300.0);
    const auto cell = CellSpec::uniform(w, g, mhz_to_angular(6.0));
    const auto lab = build_cell_ac(cell);
    const auto framed = rotating_frame(lab, cell_free_hamiltonian(cell));
    const auto gaps = pair_transition_gaps(cell, 0, 2);
    REQUIRE(gaps.size() == 4);
    const double expected[4] = {2.0 * g, 4.0 * g, 4.0 * g, 6.0 * g};
    for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(gaps[k].gap - expected[k]) < 1e-12);
    for (double t : {0.13, 1.7, 9.1}) {
      const Matrix m = framed.evaluate(t);
      const Matrix l = lab.evaluate(t);
      for (const auto& gap : gaps) {
        const auto r = Eigen::Index(gap.from), c = Eigen::Index(gap.to);
        const double bohr = (cell_free_hamiltonian(cell)(gap.from, gap.from) -
                             cell_free_hamiltonian(cell)(gap.to, gap.to)).real();
        CHECK(std::abs(std::abs(bohr) - gap.gap) < 1e-12);
        CHECK(std::abs(m(r, c) - l(r, c) * std::polar(1.0, bohr * t)) < 1e-12);
      }
    }
    const auto gaps23 = pair_transition_gaps(cell, 1, 2);
    bool target_found = false;
    for (const auto& gap : gaps23) {
      if (gap.label == "|-G>_23 <-> |G+>_23" || gap.label == "|G+>_23 <-> |-G>_23") {
        target_found = true;
        CHECK(std::abs(gap.gap - 6.0 * g) < 1e-12);
      }
    }
    CHECK(target_found);
  }

  TEST_CASE("neglected cell transitions are detuned by at least 2g") {
    const double g = mhz_to_angular(300.0);
    const auto cell = CellSpec::uniform(mhz_to_angular(6000.0), g, mhz_to_angular(6.0));
    for (auto [j, k] : {std::pair<std::size_t, std::size_t>{0, 2}, {1, 2}}) {
      for (const auto& gap : pair_transition_gaps(cell, j, k)) {
        const double detuning = std::abs(gap.gap - cell.modulation);
        const bool kept = detuning < 1e-12;
        if (!kept) CHECK(detuning >= 2.0 * g - 1e-12);
      }
    }
  }

  TEST_CASE("zero hopping makes the frame hamiltonian vanish") {
    const double g = mhz_to_angular(300.0);
    const auto cell = CellSpec::uniform(mhz_to_angular(6000.0), g, 0.0);
    const auto framed = rotating_frame(build_cell_ac(cell), cell_free_hamiltonian(cell));
    CHECK(framed.evaluate(3.3).cwiseAbs().maxCoeff() == 0.0);
  }
}
