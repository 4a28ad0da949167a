#include <cmath>
#include <random>

#include "doctest.h"
#include "lmg/model.hpp"
#include "test_util.hpp"

using namespace lmg;
using namespace lmg::test;

TEST_CASE("effective coefficients at the reference working point") {
  // eta = 0.1, Delta = -1.1: alpha = 2 (0.01)(-1.1) / 0.21, eps = 2 / (alpha Delta)
  const auto c = effective_coefficients(0.1, -1.1, 0.6, 0.2);
  const double alpha = 2.0 * 0.01 * -1.1 / (1.21 - 1.0);
  CHECK(c.alpha == doctest::Approx(alpha).epsilon(1e-14));
  CHECK(c.epsilon == doctest::Approx(2.0 / (alpha * -1.1)).epsilon(1e-14));
  CHECK(c.beta1 == doctest::Approx(0.4));
  CHECK(c.beta2 == doctest::Approx(0.8));
  CHECK(c.jz_coefficient() == doctest::Approx(c.alpha * c.epsilon * c.beta1 * c.beta2).epsilon(1e-13));
}

TEST_CASE("coefficient edge cases") {
  CHECK_THROWS_AS(effective_coefficients(0.1, 1.0, 0.3, 0.3), ResonantDetuning);
  CHECK_THROWS_AS(effective_coefficients(0.1, -1.0, 0.3, 0.3), ResonantDetuning);
  CHECK_THROWS_AS(effective_coefficients(-0.1, 1.1, 0.3, 0.3), InvalidParameter);
  const auto c = effective_coefficients(0.0, 1.1, 0.3, 0.1);
  CHECK(c.alpha == 0.0);
  CHECK(std::isinf(c.epsilon));
  CHECK(std::isfinite(c.jz_coefficient()));
}

TEST_CASE("H_eff is Hermitian and conserves total spin") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t n = 1; n <= 5; ++n) {
    const SpinRegister reg(n);
    const auto j2 = collective_operator(reg, Collective::TotalSquared);
    for (int trial = 0; trial < 4; ++trial) {
      double delta = 2.0 * u(rng);
      if (std::abs(std::abs(delta) - 1.0) < 0.05 || std::abs(delta) < 0.05) delta = 1.3;
      const auto c = effective_coefficients(0.1 + 0.05 * u(rng), delta, u(rng), u(rng));
      const auto h = build_effective_lmg(reg, c);
      CHECK(h.hermiticity_defect() < 1e-12);
      CHECK(max_abs_diff(commutator(h, j2), ComplexMatrix(reg.dim())) < 1e-10);
    }
  }
}

TEST_CASE("equal drives leave only the J_y^2 term") {
  const SpinRegister reg(3);
  const auto c = effective_coefficients(0.1, 1.1, 0.25, 0.25);
  const auto jy = collective_operator(reg, Collective::Y);
  auto expect = jy * jy;
  expect *= c.alpha * c.beta2 * c.beta2;
  CHECK(max_abs_diff(build_effective_lmg(reg, c), expect) < 1e-12);
}

TEST_CASE("isotropic form is diagonal with the closed-form spectrum") {
  for (std::size_t n = 1; n <= 5; ++n) {
    const SpinRegister reg(n);
    const auto c = effective_coefficients(0.1, -1.1, 0.4, 0.0);
    const auto h = build_effective_lmg(reg, c);
    const double ab2 = c.alpha * c.beta1 * c.beta1;
    const auto levels = isotropic_spectrum(n, ab2, c.epsilon);
    REQUIRE(levels.size() == n + 1);
    for (const auto& l : levels) {
      const auto d = dicke_state(n, l.m);
      const auto hd = matvec(h, d.span());
      for (std::size_t i = 0; i < hd.size(); ++i) CHECK(std::abs(hd[i] - l.energy * d[i]) < 1e-12);
    }
  }
}

TEST_CASE("symmetric sector operators match the projected full-space ones") {
  for (std::size_t n = 1; n <= 5; ++n) {
    const auto full = LmgOperators::full_space(n);
    const auto sector = LmgOperators::symmetric_sector(n);
    const SymmetricSector s(n);
    const auto c = effective_coefficients(0.1, 0.9, 0.37, 0.11);
    CHECK(max_abs_diff(s.project(full.assemble(c)), sector.assemble(c)) < 1e-12);
    CHECK(max_abs_diff(full.assemble(c), build_effective_lmg(SpinRegister(n), c)) < 1e-13);
  }
}

TEST_CASE("disorder term") {
  const SpinRegister reg(2);
  const DisorderProfile d{{0.2, -0.1}, 0.1};
  const auto m = d.ising_coefficients();
  CHECK(m[0] == doctest::Approx(0.1 * 0.02 / 4.0));
  CHECK(m[1] == doctest::Approx(0.1 * -0.01 / 4.0));
  const auto h = build_disorder_term(reg, d);
  // |uu>: J_z = 1, sigma_z = (+1, +1); |ud>: J_z = 0; |dd>: J_z = -1, sigma_z = (-1, -1)
  CHECK(h(0, 0).real() == doctest::Approx(-(m[0] + m[1])));
  CHECK(std::abs(h(1, 1)) < 1e-18);
  CHECK(h(3, 3).real() == doctest::Approx(-(m[0] + m[1])));
  CHECK(h.hermiticity_defect() == 0.0);
  CHECK_THROWS_AS(build_disorder_term(SpinRegister(3), d), LengthMismatch);
  CHECK_THROWS_AS((DisorderProfile{{0.6, 0.0}, 0.1}.validate()), InvalidParameter);
  CHECK(DisorderProfile{{0.0, 0.0}, 0.1}.is_zero());
}

TEST_CASE("Lamb-Dicke indicator") {
  CHECK(lamb_dicke_indicator(20.0, 0.1) == doctest::Approx(0.21));
  CHECK(lamb_dicke_indicator(0.0, 0.05) == doctest::Approx(0.0025));
}

TEST_CASE("full interaction-picture Hamiltonian") {
  FullModelParams p;
  p.n_spins = 2;
  p.fock_cutoff = 4;
  p.eta = 0.1;
  p.delta = -1.1;
  const FullModel model(p);
  CHECK(model.dim() == 16);
  ComplexMatrix h(16);
  for (double t : {0.0, 0.37, 12.5}) {
    model.hamiltonian(t, 0.3, 0.1, h);
    CHECK(h.hermiticity_defect() < 1e-14);
  }

  // eta = 0 reduces to the carrier drive (Omega1 e^{i Delta t} + Omega2 e^{-i Delta t}) J_+ + h.c.
  p.eta = 0.0;
  const FullModel bare(p);
  const double t = 0.8;
  bare.hamiltonian(t, 0.3, 0.1, h);
  const SpinRegister reg(2);
  const cplx drive = 0.3 * std::polar(1.0, -1.1 * t) + 0.1 * std::polar(1.0, 1.1 * t);
  auto k = kron(collective_operator(reg, Collective::Plus), ComplexMatrix::identity(4));
  k *= drive;
  CHECK(max_abs_diff(h, k + k.adjoint()) < 1e-14);

  p.omega1 = 0.3;
  p.omega2 = 0.1;
  CHECK(build_full_interaction_hamiltonian(p, t) == h);
  p.eta_per_spin = {0.1};
  CHECK_THROWS_AS(FullModel{p}, LengthMismatch);
}

TEST_CASE("partial trace of a product state") {
  FullModelParams p;
  p.n_spins = 1;
  p.fock_cutoff = 3;
  const FullModel model(p);
  // spin (|u> + |d>)/sqrt2 times Fock |1>
  CVector psi(6);
  psi[0 * 3 + 1] = 1.0 / std::sqrt(2.0);
  psi[1 * 3 + 1] = 1.0 / std::sqrt(2.0);
  const auto rho = model.reduced_spin_state(psi);
  CHECK(max_abs_diff(rho, ComplexMatrix{{0.5, 0.5}, {0.5, 0.5}}) < 1e-15);
}

TEST_CASE("regime classification names the printed forms") {
  const std::size_t n = 4;
  // Omega2 = 0, alpha < 0, eps > N: isotropic FI with |uuuu>
  auto r = classify_lmg(effective_coefficients(0.1, -1.1, 0.3, 0.0), n);
  CHECK(r.form == LmgForm::Isotropic);
  CHECK(r.magnetism == Magnetism::Ferromagnetic);
  REQUIRE(r.unique());
  CHECK(r.ground_labels[0] == "|↑↑↑↑⟩");

  r = classify_lmg(effective_coefficients(0.1, 1.1, 0.3, 0.3), n);
  CHECK(r.form == LmgForm::OneAxisY);
  CHECK(r.magnetism == Magnetism::Antiferromagnetic);
  REQUIRE(r.ground_states.size() == 1);
  CHECK(r.ground_labels[0] == "|m_y=0⟩");

  r = classify_lmg(effective_coefficients(0.1, -1.1, 0.3, -0.3), 3);
  CHECK(r.form == LmgForm::OneAxisX);
  CHECK(to_string(r.form) == "one-axis-x");
  CHECK(r.ground_states.size() == 2);

  r = classify_lmg(effective_coefficients(0.1, -1.1, 0.3, 0.1), n);
  CHECK(r.form == LmgForm::General);
  CHECK(r.ground_states.empty());
}
