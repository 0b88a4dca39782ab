#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "tachys/brachistochrone.hpp"
#include "tachys/errors.hpp"
#include "tachys/metric.hpp"

using namespace tachys;

namespace {

const PureState kInitial{1.0, 0.0};

void check_canonical(const CMat& H, double omega) {
  CHECK(std::abs(H(0, 0)) < 1e-15);
  CHECK(std::abs(H(1, 1)) < 1e-15);
  CHECK(std::abs(H(0, 1) - 0.5 * omega) < 1e-15);
  CHECK(std::abs(H(1, 0) - 0.5 * omega) < 1e-15);
}

}  // namespace

TEST_SUITE("brachistochrone") {
  TEST_CASE("targets with a = |a|, b = -i|b| give the canonical flip Hamiltonian") {
    for (double omega : {0.5, 1.0, 3.0}) {
      for (double frac : {0.1, 0.37, 0.8, 0.999}) {
        const double tau = frac * std::numbers::pi / omega;
        const PureState target{std::cos(0.5 * omega * tau), cplx(0.0, -std::sin(0.5 * omega * tau))};
        const OptimalHamiltonianSpec spec = optimal_hamiltonian(target, omega);
        check_canonical(spec.H, omega);
        CHECK(spec.convention == PhaseConvention::flipped_quarter_turn);
        CHECK(minimal_time(kInitial, target, omega) == doctest::Approx(tau).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("orthogonal target (0, -i)") {
    const OptimalHamiltonianSpec spec = optimal_hamiltonian(PureState{0.0, cplx(0.0, -1.0)}, 1.0);
    check_canonical(spec.H, 1.0);
    CHECK(spec.s == 0.0);
    const BrachistochroneResult r = solve_brachistochrone(PureState{0.0, cplx(0.0, -1.0)}, 1.0);
    CHECK(std::abs(r.tau - std::numbers::pi) < 1e-12);
  }

  TEST_CASE("equal-weight targets with arbitrary relative phase pass the propagation check") {
    for (int k = 0; k < 24; ++k) {
      const double phi = -std::numbers::pi + 2.0 * std::numbers::pi * k / 24.0;
      const PureState target{1.0 / std::sqrt(2.0), std::polar(1.0 / std::sqrt(2.0), phi)};
      const BrachistochroneResult r = solve_brachistochrone(target, 1.3);
      CHECK(fidelity(expm(r.spec.H, r.tau) * kInitial, target) >= 1.0 - 1e-9);
      const double oracle_t = oracle::brute_force_first_passage(r.spec.H, kInitial, target,
                                                                default_scan_horizon(1.3), 4000, 1.0 - 1e-8);
      CHECK(oracle_t == doctest::Approx(r.tau).epsilon(1e-6));
    }
  }

  TEST_CASE("Hamiltonian invariants on random targets") {
    oracle::Rng rng(21);
    for (int k = 0; k < 200; ++k) {
      const PureState target = rng.state();
      const double omega = rng.uniform(0.2, 5.0);
      const OptimalHamiltonianSpec spec = optimal_hamiltonian(target, omega);
      CHECK(spec.H.is_hermitian(1e-14));
      const auto [e1, e2] = eig2(spec.H);
      CHECK(std::abs((e1 - e2).real() - omega) < 1e-10);
      CHECK(spec.H(0, 0) == spec.H(1, 1));
      CHECK(spec.H(0, 0).real() == doctest::Approx(spec.s));
      CHECK(spec.theta > -std::numbers::pi);
      CHECK(spec.theta <= std::numbers::pi);
      const double tau = minimal_time(kInitial, target, omega);
      CHECK(fidelity(expm(spec.H, tau) * kInitial, target) >= 1.0 - 1e-9);
    }
  }

  TEST_CASE("errors") {
    CHECK_THROWS_AS(optimal_hamiltonian(PureState{1.0, 0.0}, 1.0), TrivialTargetError);
    CHECK_THROWS_AS(optimal_hamiltonian(PureState{std::polar(1.0, 0.4), 0.0}, 1.0), TrivialTargetError);
    CHECK_THROWS_AS(optimal_hamiltonian(PureState{0.0, 1.0}, 0.0), DomainError);
    CHECK_THROWS_AS(optimal_hamiltonian(PureState{0.0, 1.0}, -1.0), DomainError);
    CHECK_THROWS_AS(optimal_hamiltonian(PureState{1.0, 1.0}, 1.0), DomainError);
    CHECK_THROWS_AS(minimal_time(PureState{1.0, 1.0}, kInitial, 1.0), DomainError);
  }

  TEST_CASE("minimal_time examples") {
    CHECK(minimal_time(kInitial, PureState{0.0, 1.0}, 1.0) == doctest::Approx(std::numbers::pi).epsilon(1e-15));
    CHECK(minimal_time(kInitial, std::polar(1.0, 0.3) * kInitial, 1.0) == 0.0);
    const PureState half{0.5, std::sqrt(0.75)};
    CHECK(minimal_time(kInitial, half, 2.0) == doctest::Approx(std::numbers::pi / 3.0).epsilon(1e-14));
  }

  TEST_CASE("speed law and monotonicity") {
    oracle::Rng rng(22);
    for (int k = 0; k < 50; ++k) {
      const PureState u = rng.state();
      const PureState v = rng.state();
      const double omega = rng.uniform(0.5, 3.0);
      const double tau = minimal_time(u, v, omega);
      CHECK(tau * omega / 2.0 == doctest::Approx(angle(u, v)).epsilon(1e-14));
      CHECK(minimal_time(u, v, omega * 1.01) < tau);
    }
    double prev = 0.0;
    for (int k = 1; k <= 20; ++k) {
      const double x = 0.5 * std::numbers::pi * k / 20.0;
      const double tau = minimal_time(kInitial, PureState{std::cos(x), std::sin(x)}, 1.0);
      CHECK(tau > prev);
      prev = tau;
    }
  }

  TEST_CASE("first_passage_scan examples") {
    const CMat H(2, {0.0, 0.5, 0.5, 0.0});
    const auto t = first_passage_scan(H, kInitial, PureState{0.0, cplx(0.0, -1.0)}, default_scan_horizon(1.0));
    REQUIRE(t.has_value());
    CHECK(std::abs(*t - std::numbers::pi) < 1e-10);
    const auto zero = first_passage_scan(H, kInitial, kInitial, 10.0);
    REQUIRE(zero.has_value());
    CHECK(*zero == 0.0);
    // A diagonal Hamiltonian never leaves the ray of |0>.
    CHECK_FALSE(first_passage_scan(CMat::diag({0.5, -0.5}), kInitial, PureState{0.0, 1.0}, 20.0).has_value());
    CHECK_THROWS_AS(first_passage_scan(H, kInitial, kInitial, 1.0, 999), DomainError);
    CHECK_THROWS_AS(first_passage_scan(H, kInitial, kInitial, -1.0), DomainError);
  }

  TEST_CASE("first_passage_scan resolves near-periodic arrival windows") {
    // Rotation about a tilted axis: the trajectory only grazes the target.
    oracle::Rng rng(23);
    for (int k = 0; k < 20; ++k) {
      const double omega = rng.uniform(0.5, 2.0);
      const CMat H = rng.hermitian_with_gap(omega);
      const PureState target = expm(H, rng.uniform(0.2, 5.0)) * kInitial;
      const auto t = first_passage_scan(H, kInitial, target, default_scan_horizon(omega));
      REQUIRE(t.has_value());
      const double ref = oracle::brute_force_first_passage(H, kInitial, target, default_scan_horizon(omega), 20000,
                                                           kFirstPassageFidelity);
      CHECK(*t == doctest::Approx(ref).epsilon(1e-6));
      CHECK(*t >= minimal_time(kInitial, target, omega) - 1e-8);
    }
  }
}
