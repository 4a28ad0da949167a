#include <cmath>
#include <random>

#include "doctest.h"
#include "lmg/linalg.hpp"
#include "test_util.hpp"

using namespace lmg;
using lmg::test::random_hermitian;
using lmg::test::random_matrix;

TEST_CASE("identity, diagonal, trace and adjoint") {
  const auto i3 = ComplexMatrix::identity(3);
  CHECK(i3.trace() == cplx{3.0, 0.0});
  const std::vector<double> d{1.0, -2.0, 5.0};
  const auto m = ComplexMatrix::diagonal(std::span<const double>(d));
  CHECK(m.trace().real() == doctest::Approx(4.0));
  ComplexMatrix a{{1.0, cplx{2.0, 3.0}}, {cplx{0.0, 1.0}, 4.0}};
  const auto ad = a.adjoint();
  CHECK(ad(0, 1) == cplx{0.0, -1.0});
  CHECK(ad(1, 0) == cplx{2.0, -3.0});
  CHECK(a.hermiticity_defect() == doctest::Approx(std::abs(cplx{2.0, 3.0} - cplx{0.0, -1.0})));
}

TEST_CASE("constructors reject non-square data") {
  CHECK_THROWS_AS(ComplexMatrix(2, std::vector<cplx>(3)), DimMismatch);
  CHECK_THROWS_AS((ComplexMatrix{{1.0, 2.0}, {3.0}}), DimMismatch);
}

TEST_CASE("matrix product matches a hand-computed 2x2 product") {
  ComplexMatrix a{{1.0, cplx{0, 1}}, {2.0, 3.0}};
  ComplexMatrix b{{cplx{0, -1}, 1.0}, {1.0, 0.0}};
  const auto c = a * b;
  CHECK(c(0, 0) == cplx{0.0, 0.0});
  CHECK(c(0, 1) == cplx{1.0, 0.0});
  CHECK(c(1, 0) == cplx{3.0, -2.0});
  CHECK(c(1, 1) == cplx{2.0, 0.0});
  CHECK_THROWS_AS(a * ComplexMatrix(3), DimMismatch);
}

TEST_CASE("kron obeys the mixed-product rule") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    const auto a = random_matrix(2, rng), b = random_matrix(3, rng);
    const auto c = random_matrix(2, rng), d = random_matrix(3, rng);
    const auto lhs = kron(a, b) * kron(c, d);
    const auto rhs = kron(a * c, b * d);
    CHECK(frobenius_distance(lhs, rhs) < 1e-12);
  }
}

TEST_CASE("vector kron, inner, norm and outer") {
  const CVector u{1.0, cplx{0, 1}};
  const CVector v{0.5, -0.5};
  const auto w = kron(u, v);
  REQUIRE(w.size() == 4);
  CHECK(w[1] == cplx{-0.5, 0.0});
  CHECK(w[2] == cplx{0.0, 0.5});
  CHECK(inner(u, u) == cplx{2.0, 0.0});
  CHECK(norm2(u) == doctest::Approx(std::sqrt(2.0)));
  const auto p = outer(u, u);
  CHECK(p(0, 1) == cplx{0.0, -1.0});
  CHECK_THROWS_AS(inner(u, CVector(3)), DimMismatch);
}

TEST_CASE("commutator of Pauli matrices") {
  ComplexMatrix sx{{0.0, 1.0}, {1.0, 0.0}};
  ComplexMatrix sy{{0.0, cplx{0, -1}}, {cplx{0, 1}, 0.0}};
  ComplexMatrix sz{{1.0, 0.0}, {0.0, -1.0}};
  auto expect = sz;
  expect *= cplx{0.0, 2.0};
  CHECK(frobenius_distance(commutator(sx, sy), expect) < 1e-15);
}

TEST_CASE("hermitize averages with the adjoint") {
  std::mt19937_64 rng(3);
  auto m = random_matrix(5, rng);
  const auto expect = [&] {
    auto s = m + m.adjoint();
    s *= 0.5;
    return s;
  }();
  m.hermitize();
  CHECK(frobenius_distance(m, expect) < 1e-15);
  CHECK(m.hermiticity_defect() == 0.0);
}

TEST_CASE("2x2 eigenvalues match the closed form") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = u(rng), d = u(rng);
    const cplx b{u(rng), u(rng)};
    ComplexMatrix m{{a, b}, {std::conj(b), d}};
    const auto e = hermitian_eig(m);
    const double mean = 0.5 * (a + d);
    const double rad = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(b));
    CHECK(e.eigenvalues[0] == doctest::Approx(mean - rad).epsilon(1e-13));
    CHECK(e.eigenvalues[1] == doctest::Approx(mean + rad).epsilon(1e-13));
  }
}

TEST_CASE("eigendecomposition reconstructs random Hermitian matrices") {
  std::mt19937_64 rng(5);
  for (std::size_t n : {1u, 2u, 3u, 7u, 16u, 32u}) {
    const auto h = random_hermitian(n, rng);
    const auto e = hermitian_eig(h);
    for (std::size_t k = 1; k < n; ++k) CHECK(e.eigenvalues[k - 1] <= e.eigenvalues[k]);
    const auto& v = e.eigenvectors;
    CHECK(frobenius_distance(v.adjoint() * v, ComplexMatrix::identity(n)) < 1e-12);
    const auto lam = ComplexMatrix::diagonal(std::span<const double>(e.eigenvalues));
    CHECK(frobenius_distance(v * lam * v.adjoint(), h) < 1e-11 * h.frobenius_norm());
    const auto x = e.vector(0);
    const auto hx = matvec(h, x);
    for (std::size_t r = 0; r < n; ++r) CHECK(std::abs(hx[r] - e.eigenvalues[0] * x[r]) < 1e-11 * h.frobenius_norm());
  }
}

TEST_CASE("degenerate and diagonal inputs") {
  const auto e = hermitian_eig(ComplexMatrix::identity(4));
  for (double x : e.eigenvalues) CHECK(x == doctest::Approx(1.0));
  const std::vector<double> d{3.0, -1.0, 2.0};
  const auto f = hermitian_eig(ComplexMatrix::diagonal(std::span<const double>(d)));
  CHECK(f.eigenvalues == std::vector<double>{-1.0, 2.0, 3.0});
}

TEST_CASE("eigensolver input checks") {
  CHECK_THROWS_AS(hermitian_eig(ComplexMatrix(0)), DimMismatch);
  ComplexMatrix m{{0.0, 1.0}, {0.0, 0.0}};
  CHECK_THROWS_AS(hermitian_eig(m), NonHermitian);
  CHECK_THROWS_AS(frobenius_distance(ComplexMatrix(2), ComplexMatrix(3)), DimMismatch);
}
