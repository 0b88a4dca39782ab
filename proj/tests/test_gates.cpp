#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "tachys/brachistochrone.hpp"
#include "tachys/errors.hpp"
#include "tachys/gates.hpp"
#include "tachys/metric.hpp"

using namespace tachys;

namespace {

constexpr double kPi = std::numbers::pi;

double prob(const CMat& effect, const PureState& s) { return (effect * s.projector()).trace().real(); }

}  // namespace

TEST_SUITE("gates") {
  TEST_CASE("Bloch basis construction") {
    const BlochBasis b = make_bloch_basis(kPi / 2);
    CHECK(b.overlap() == doctest::Approx(std::cos(kPi / 4)));
    CHECK(inner(b.psi0, b.psi1).imag() == 0.0);
    const auto r = oracle::bloch_vector(b.psi1);
    CHECK(r[0] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(r[1] == doctest::Approx(-1.0));
    CHECK_THROWS_AS(make_bloch_basis(0.0), DegenerateBasisError);
    CHECK_THROWS_AS(make_bloch_basis(-0.1), DomainError);
    CHECK_THROWS_AS(make_bloch_basis(3.5), DomainError);
  }

  TEST_CASE("POVM completeness, positivity and unambiguity over a theta grid") {
    for (int k = 1; k <= 64; ++k) {
      const BlochBasis b = make_bloch_basis(kPi * k / 64.0);
      const Povm p = discrimination_povm(b);
      REQUIRE(p.effects.size() == 3);
      CHECK(p.labels[2] == kInconclusive);
      CHECK(p.completeness_defect() < 1e-12);
      CHECK(p.min_eigenvalue() > -1e-12);
      for (const CMat& e : p.effects) CHECK(e.is_hermitian(1e-12));
      CHECK(prob(p.effects[0], b.psi1) < 1e-14);
      CHECK(prob(p.effects[1], b.psi0) < 1e-14);
      const double a = std::cos(0.5 * b.theta);
      CHECK(std::abs(inconclusive_probability(p, b.psi0) - a) < 1e-12);
      CHECK(std::abs(inconclusive_probability(p, b.psi1) - a) < 1e-12);
    }
  }

  TEST_CASE("POVM examples") {
    const Povm orth = discrimination_povm(make_bloch_basis(kPi));
    CHECK(orth.effects[2].frobenius_norm() < 1e-15);
    const BlochBasis half = make_bloch_basis(2.0 * kPi / 3.0);
    const Povm p = discrimination_povm(half);
    CHECK(inconclusive_probability(p, half.psi0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(inconclusive_probability(p, half.psi1) == doctest::Approx(0.5).epsilon(1e-14));
    const BlochBasis quarter = make_bloch_basis(kPi / 2);
    CHECK(inconclusive_probability(discrimination_povm(quarter), quarter.psi1) ==
          doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  }

  TEST_CASE("speed versus inconclusive probability tradeoff") {
    double prev_tau = 1e300;
    double prev_p = -1.0;
    for (int k = 64; k >= 1; --k) {
      const BlochBasis b = make_bloch_basis(kPi * k / 64.0);
      const double tau = minimal_time(b.psi0, b.psi1, 1.0);
      const double p = inconclusive_probability(discrimination_povm(b), b.psi0);
      CHECK(tau / 2.0 == doctest::Approx(std::acos(b.overlap())).epsilon(1e-12));
      CHECK(p == doctest::Approx(b.overlap()).epsilon(1e-12));
      CHECK(tau < prev_tau);
      CHECK(p > prev_p);
      prev_tau = tau;
      prev_p = p;
    }
  }

  TEST_CASE("NOT gate round trip") {
    const NotGateReport orth = not_roundtrip(make_bloch_basis(kPi), 1.0);
    CHECK(orth.roundtrip_fidelity == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(((orth.U * orth.U) + CMat::identity(2)).frobenius_norm() < 1e-15);

    const BlochBasis q = make_bloch_basis(kPi / 2);
    const NotGateReport r = not_roundtrip(q, 1.0);
    CHECK((r.image_of_psi1 - PureState{0.0, cplx(0.0, -1.0)}).norm() < 1e-15);
    CHECK(r.roundtrip_fidelity < 1e-15);

    oracle::Rng rng(61);
    for (int k = 0; k < 100; ++k) {
      const double theta = rng.uniform(1e-6, kPi);
      const double omega = rng.uniform(0.1, 5.0);
      const BlochBasis b = make_bloch_basis(theta);
      const NotGateReport n = not_roundtrip(b, omega);
      CHECK(n.not_tau == doctest::Approx(kPi / omega).epsilon(1e-15));
      CHECK(n.not_tau == doctest::Approx(n.orthogonal_tau).epsilon(1e-14));
      CHECK(n.forward_tau == doctest::Approx(theta / omega).epsilon(1e-12));
      CHECK(std::abs(n.roundtrip_fidelity - std::abs(std::cos(theta))) < 1e-12);
      CHECK(same_ray(n.U * b.psi0, b.psi1, 1e-14));
      // Two NOT periods give minus the identity.
      CHECK(oracle::max_abs_diff(expm(CMat(2, {0.0, 0.5 * omega, 0.5 * omega, 0.0}), 2.0 * n.not_tau),
                                 -1.0 * CMat::identity(2)) < 1e-12);
    }
  }

  TEST_CASE("cloning defect") {
    CHECK(cloning_defect(make_bloch_basis(kPi)) < 1e-16);
    const BlochBasis half = make_bloch_basis(2.0 * kPi / 3.0);
    CHECK(cloning_defect(half) == doctest::Approx(0.25).epsilon(1e-14));
    double best = 0.0, best_a = 0.0;
    for (int k = 1; k < 1000; ++k) {
      const double theta = kPi * k / 1000.0;
      const BlochBasis b = make_bloch_basis(theta);
      const double a = b.overlap();
      const double d = cloning_defect(b);
      CHECK(d > 0.0);
      CHECK(d == doctest::Approx(std::abs(a - a * a)).epsilon(1e-12));
      if (d > best) {
        best = d;
        best_a = a;
      }
    }
    CHECK(best == doctest::Approx(0.25).epsilon(1e-5));
    CHECK(best_a == doctest::Approx(0.5).epsilon(5e-3));
    // a -> 1 limit.
    CHECK(cloning_defect(make_bloch_basis(1e-9)) < 1e-15);
  }

  TEST_CASE("control-U channel: orthogonal aligned case") {
    const BlochBasis b = make_bloch_basis(kPi);
    const ControlUReport r = control_u_channel(b, kPi);
    CHECK(r.p == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r.q == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r.lhs == doctest::Approx(kPi / 2));
    CHECK(std::abs(r.rhs - kPi / 2) < 1e-9);
    CHECK_FALSE(r.p_below_one);
    CHECK_FALSE(r.q_below_one);
  }

  TEST_CASE("control-U channel: bisecting placement at theta = pi/2") {
    const BlochBasis b = make_bloch_basis(kPi / 2);
    const ControlUReport r = control_u_channel(b, 3.0 * kPi / 4.0);
    const double c2 = std::pow(std::cos(kPi / 8), 2);
    CHECK(r.p == doctest::Approx(c2).epsilon(1e-14));
    CHECK(r.q == doctest::Approx(c2).epsilon(1e-14));
    CHECK(r.p_below_one);
    CHECK(r.q_below_one);
    // The four states are in arc order on one great circle, so the bound is attained.
    CHECK(std::abs(r.rhs - r.lhs) < 1e-12);
  }

  TEST_CASE("control-U channel: random configurations") {
    oracle::Rng rng(62);
    for (int k = 0; k < 1000; ++k) {
      const double theta = rng.uniform(1e-3, kPi);
      const double alpha = rng.uniform(-kPi, kPi);
      const BlochBasis b = make_bloch_basis(theta);
      const ControlUReport r = control_u_channel(b, alpha, rng.uniform(0.5, 2.0));
      CHECK(r.rhs >= r.lhs - 1e-10);
      CHECK(r.residual < 1e-8);
      CHECK(r.output_from_psi1.trace().real() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(r.output_from_psi0.trace().real() == doctest::Approx(1.0).epsilon(1e-12));
      if (theta < kPi - 1e-6) CHECK(std::min(r.p, r.q) < 1.0);
      CHECK(r.p >= 0.0);
      CHECK(r.p <= 1.0 + 1e-15);
      CHECK(r.q >= 0.0);
      CHECK(r.q <= 1.0 + 1e-15);
    }
  }

  TEST_CASE("control-U channel with the ancilla in e1") {
    // Aligned orthogonal placement still decomposes.
    const ControlUReport ok = control_u_channel(make_bloch_basis(kPi), kPi, 1.0, AncillaPreparation::e1);
    CHECK(ok.residual < 1e-8);
    try {
      control_u_channel(make_bloch_basis(1.0), 0.3, 1.0, AncillaPreparation::e1);
      FAIL("expected ChannelDecompositionError");
    } catch (const ChannelDecompositionError& e) {
      CHECK(e.residual() > 1e-8);
      CHECK(e.module() == "gates");
    }
  }

  TEST_CASE("efficiency bound") {
    const EfficiencyReport orth = efficiency_bound(make_bloch_basis(kPi), 1.0);
    CHECK(orth.delta_t == doctest::Approx(kPi));
    CHECK(orth.epsilon == doctest::Approx(kPi / 2));
    CHECK(std::abs(orth.slack()) < 1e-12);
    const EfficiencyReport q = efficiency_bound(make_bloch_basis(kPi / 2), 1.0);
    CHECK(q.epsilon == doctest::Approx(kPi / 4));
    CHECK(q.delta_t == doctest::Approx(kPi / 2));
    CHECK(std::abs(q.slack()) < 1e-12);
  }

  TEST_CASE("suboptimal Hamiltonians are strictly slower") {
    oracle::Rng rng(63);
    int reached = 0;
    for (int k = 0; k < 40; ++k) {
      const BlochBasis b = make_bloch_basis(rng.uniform(0.2, kPi));
      const double omega = rng.uniform(0.5, 2.0);
      // Axes in the plane perpendicular to r1 - r0 always reach psi1; phi = 0 is the optimal axis.
      const auto r0 = oracle::bloch_vector(b.psi0);
      const auto r1 = oracle::bloch_vector(b.psi1);
      const std::array<double, 3> m{r0[1] * r1[2] - r0[2] * r1[1], r0[2] * r1[0] - r0[0] * r1[2],
                                    r0[0] * r1[1] - r0[1] * r1[0]};
      const double mn = std::sqrt(m[0] * m[0] + m[1] * m[1] + m[2] * m[2]);
      std::array<double, 3> s{r0[0] + r1[0], r0[1] + r1[1], r0[2] + r1[2]};
      const double sn = std::sqrt(s[0] * s[0] + s[1] * s[1] + s[2] * s[2]);
      if (sn < 1e-9) s = {1.0, 0.0, 0.0};
      const double phi = (k % 2 ? 1.0 : -1.0) * rng.uniform(0.05, 1.5);
      std::array<double, 3> n{};
      for (int i = 0; i < 3; ++i)
        n[static_cast<std::size_t>(i)] = std::cos(phi) * m[static_cast<std::size_t>(i)] / mn +
                                         std::sin(phi) * s[static_cast<std::size_t>(i)] / (sn < 1e-9 ? 1.0 : sn);
      const CMat H = oracle::Rng::bloch_hamiltonian(rng.uniform(-1.0, 1.0), omega, n);
      const auto e = efficiency_of(H, b);
      REQUIRE(e.has_value());
      ++reached;
      CHECK(e->delta_E == doctest::Approx(omega).epsilon(1e-12));
      CHECK(e->slack() > 0.0);
    }
    CHECK(reached == 40);
    CHECK_FALSE(efficiency_of(CMat::diag({0.5, -0.5}), make_bloch_basis(kPi / 2)).has_value());
  }
}
