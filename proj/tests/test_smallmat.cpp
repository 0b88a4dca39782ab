#include <cmath>
#include <limits>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "tachys/errors.hpp"
#include "tachys/smallmat.hpp"

using namespace tachys;

TEST_SUITE("smallmat") {
  TEST_CASE("constructors reject non-finite entries and wrong sizes") {
    CHECK_THROWS_AS(CMat(2, {1.0, 2.0, 3.0}), DomainError);
    CHECK_THROWS_AS(CMat(3), DomainError);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(CMat(2, {1.0, nan, 0.0, 1.0}), DomainError);
    CHECK_THROWS_AS(CMat::diag({std::numeric_limits<double>::infinity(), 1.0}), DomainError);
    CHECK_THROWS_AS((PureState{1.0, nan}), DomainError);
  }

  TEST_CASE("state comparison ignores global phase") {
    const PureState u{0.6, cplx(0.0, 0.8)};
    const PureState v = std::polar(1.0, 1.234) * u;
    CHECK(same_ray(u, v));
    CHECK(fidelity(u, v) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_FALSE(same_ray(u, PureState{0.8, cplx(0.0, -0.6)}));
    CHECK(u.is_normalized());
    CHECK_FALSE((PureState{1.0, 1.0}).is_normalized());
  }

  TEST_CASE("expm of zero is the identity") {
    CHECK(oracle::max_abs_diff(expm(CMat(2), 3.7), CMat::identity(2)) == 0.0);
    CHECK(oracle::max_abs_diff(expm(CMat(4), 3.7), CMat::identity(4)) < 1e-15);
  }

  TEST_CASE("expm of the canonical flip at t = pi is -i sigma_x") {
    const CMat M(2, {0.0, 0.5, 0.5, 0.0});
    const CMat want(2, {0.0, cplx(0.0, -1.0), cplx(0.0, -1.0), 0.0});
    CHECK(oracle::max_abs_diff(expm(M, std::numbers::pi), want) < 1e-15);
    CHECK(oracle::max_abs_diff(oracle::taylor_expm(M, std::numbers::pi), want) < 1e-13);
  }

  TEST_CASE("expm of a diagonal matrix") {
    const CMat D = CMat::diag({0.3, -1.7});
    const CMat R = expm(D, 2.5);
    CHECK(std::abs(R(0, 0) - std::exp(cplx(0.0, -0.3 * 2.5))) < 1e-15);
    CHECK(std::abs(R(1, 1) - std::exp(cplx(0.0, 1.7 * 2.5))) < 1e-15);
    CHECK(std::abs(R(0, 1)) == 0.0);
  }

  TEST_CASE("expm agrees with the Taylor oracle on general 2x2 and 4x4 matrices") {
    oracle::Rng rng(11);
    for (int k = 0; k < 40; ++k) {
      const CMat m2 = rng.general(1.3);
      const double t = rng.uniform(-2.0, 2.0);
      CHECK(oracle::max_abs_diff(expm(m2, t), oracle::taylor_expm(m2, t)) < 1e-11);

      CMat m4(4);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) m4(i, j) = rng.cnormal();
      CHECK(oracle::max_abs_diff(expm(m4, t), oracle::taylor_expm(m4, t)) < 1e-10);

      CMat h4 = m4 + m4.adjoint();
      CHECK(oracle::max_abs_diff(expm(h4, t), oracle::taylor_expm(h4, t)) < 1e-10);
    }
  }

  TEST_CASE("expm of Hermitian input is unitary and obeys the group law") {
    oracle::Rng rng(12);
    double worst_unitary = 0.0;
    double worst_group = 0.0;
    for (int k = 0; k < 100; ++k) {
      const CMat h = rng.hermitian_with_gap(rng.uniform(0.1, 4.0));
      const double s = rng.uniform(-5.0, 5.0);
      const double t = rng.uniform(-5.0, 5.0);
      const CMat U = expm(h, t);
      worst_unitary = std::max(worst_unitary, (U.adjoint() * U - CMat::identity(2)).frobenius_norm());
      worst_group = std::max(worst_group, (expm(h, s) * U - expm(h, s + t)).frobenius_norm());

      CMat g4(4);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) g4(i, j) = rng.cnormal();
      const CMat h4 = g4 + g4.adjoint();
      const CMat U4 = expm(h4, t);
      worst_unitary = std::max(worst_unitary, (U4.adjoint() * U4 - CMat::identity(4)).frobenius_norm());
      worst_group = std::max(worst_group, (expm(h4, s) * U4 - expm(h4, s + t)).frobenius_norm());
    }
    CHECK(worst_unitary < 1e-11);
    CHECK(worst_group < 1e-10);
  }

  TEST_CASE("expm of a non-Hermitian matrix is invertible with the expected inverse") {
    oracle::Rng rng(13);
    for (int k = 0; k < 20; ++k) {
      const CMat m = rng.general();
      const double t = rng.uniform(0.0, 3.0);
      CHECK((expm(m, t) * expm(m, -t) - CMat::identity(2)).frobenius_norm() < 1e-10);
    }
  }

  TEST_CASE("herm_sqrt on trivial and diagonal inputs") {
    CHECK(oracle::max_abs_diff(herm_sqrt(CMat::identity(2)), CMat::identity(2)) < 1e-15);
    CHECK(oracle::max_abs_diff(herm_sqrt(CMat::diag({1.0, 4.0})), CMat::diag({1.0, 2.0})) < 1e-15);
  }

  TEST_CASE("herm_sqrt re-squares and commutes with inversion") {
    oracle::Rng rng(14);
    for (int k = 0; k < 50; ++k) {
      const CMat P = rng.positive_definite(0.05, 8.0);
      const CMat S = herm_sqrt(P);
      CHECK(S.is_hermitian(1e-12));
      CHECK(herm_eig(S).values[0] > 0.0);
      CHECK((S * S - P).frobenius_norm() < 1e-10);
      CHECK((S.inverse() - herm_sqrt(P.inverse())).frobenius_norm() < 1e-9);
    }
  }

  TEST_CASE("herm_sqrt rejects indefinite input and reports the eigenvalue") {
    const CMat P(2, {1.0, 2.0, 2.0, 1.0});  // eigenvalues 3, -1
    try {
      herm_sqrt(P);
      FAIL("expected MetricDegeneracyError");
    } catch (const MetricDegeneracyError& e) {
      CHECK(e.value() == doctest::Approx(-1.0));
      CHECK(e.kind() == "metric-degeneracy");
    }
  }

  TEST_CASE("eig2 examples and ordering") {
    const auto [a, b] = eig2(CMat::diag({1.0, 3.0}));
    CHECK(a == cplx(3.0));
    CHECK(b == cplx(1.0));
    const double w = 1.7;
    const auto [p, m] = eig2(CMat(2, {0.0, 0.5 * w, 0.5 * w, 0.0}));
    CHECK(std::abs(p - 0.5 * w) < 1e-15);
    CHECK(std::abs(m + 0.5 * w) < 1e-15);
    // Purely imaginary pair: ties in the real part break by the imaginary part.
    const auto [i1, i2] = eig2(CMat(2, {0.0, 1.0, -1.0, 0.0}));
    CHECK(i1.imag() > i2.imag());
  }

  TEST_CASE("eig2 matches the companion-polynomial oracle and the trace/determinant") {
    oracle::Rng rng(15);
    for (int k = 0; k < 200; ++k) {
      const CMat M = rng.general(2.0);
      const auto [l1, l2] = eig2(M);
      const auto [r1, r2] = oracle::quadratic_roots(-M.trace(), M.det());
      const double scale = std::max(1.0, M.frobenius_norm());
      CHECK(std::abs(l1 - r1) < 1e-10 * scale);
      CHECK(std::abs(l2 - r2) < 1e-10 * scale);
      CHECK(std::abs(l1 + l2 - M.trace()) < 1e-12 * scale);
      CHECK(std::abs(l1 * l2 - M.det()) < 1e-12 * scale * scale);
    }
  }

  TEST_CASE("herm_eig diagonalizes 4x4 Hermitian matrices") {
    oracle::Rng rng(16);
    for (int k = 0; k < 30; ++k) {
      CMat g(4);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) g(i, j) = rng.cnormal();
      const CMat h = g + g.adjoint();
      const HermitianEigen e = herm_eig(h);
      CMat D(4);
      for (int i = 0; i < 4; ++i) D(i, i) = e.values[static_cast<std::size_t>(i)];
      CHECK((e.vectors * D * e.vectors.adjoint() - h).frobenius_norm() < 1e-12 * h.frobenius_norm());
      CHECK((e.vectors.adjoint() * e.vectors - CMat::identity(4)).frobenius_norm() < 1e-13);
      for (int i = 0; i + 1 < 4; ++i) CHECK(e.values[static_cast<std::size_t>(i)] <= e.values[static_cast<std::size_t>(i + 1)]);
    }
  }

  TEST_CASE("Kronecker products, determinants and inverses") {
    const CMat X = pauli(1);
    const CMat Z = pauli(3);
    const CMat XZ = kron(X, Z);
    CHECK(XZ(0, 2) == cplx(1.0));
    CHECK(XZ(1, 3) == cplx(-1.0));
    CHECK(std::abs(XZ.det() - cplx(1.0)) < 1e-15);
    oracle::Rng rng(17);
    CMat g(4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) g(i, j) = rng.cnormal();
    CHECK((g * g.inverse() - CMat::identity(4)).frobenius_norm() < 1e-12);
    const PureState a{0.6, 0.8};
    const PureState b{cplx(0.0, 1.0), 0.0};
    const PureState ab = kron(a, b);
    CHECK(ab.dim() == 4);
    CHECK(ab[0] == cplx(0.0, 0.6));
    CHECK(ab[2] == cplx(0.0, 0.8));
  }

  TEST_CASE("ray_angle is accurate near both ends") {
    const double eps = 1e-9;
    const PureState u{1.0, 0.0};
    const PureState v{std::cos(eps), std::sin(eps)};
    CHECK(ray_angle(u, v) == doctest::Approx(eps).epsilon(1e-12));
    CHECK(ray_angle(u, PureState{0.0, cplx(0.0, -1.0)}) == doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));
  }
}
