#include "tachys/brachistochrone.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tachys/errors.hpp"

namespace tachys {

namespace {

constexpr const char* kModule = "brachistochrone";
constexpr double kPropagationFidelity = 1.0 - 1e-9;

void check_omega(double omega) {
  if (!(omega > 0.0) || !std::isfinite(omega)) throw DomainError(kModule, "omega must be positive and finite");
}

double wrap_angle(double x) {
  double r = std::remainder(x, 2.0 * std::numbers::pi);
  if (r <= -std::numbers::pi) r += 2.0 * std::numbers::pi;
  return r;
}

CMat hamiltonian_from(double omega, double s, double theta) {
  return CMat(2, {s, 0.5 * omega * std::exp(-kI * theta), 0.5 * omega * std::exp(kI * theta), s});
}

// Sign of d/dt F^2(t) where F is the normalized overlap of final with
// w = exp(-iHt) initial; denominators are positive and dropped.
double overlap_slope(const CMat& H, const PureState& w, const PureState& target) {
  const PureState hw = cplx(0.0, -1.0) * (H * w);
  const cplx c = inner(target, w);
  const cplx dc = inner(target, hw);
  const double nw2 = w.norm() * w.norm();
  const double dn = 2.0 * inner(w, hw).real();
  return 2.0 * (std::conj(c) * dc).real() * nw2 - std::norm(c) * dn;
}

}  // namespace

const char* to_string(PhaseConvention c) {
  return c == PhaseConvention::literal ? "literal" : "flipped_quarter_turn";
}

double minimal_time(const PureState& initial, const PureState& final_state, double omega) {
  check_omega(omega);
  if (!initial.is_normalized() || !final_state.is_normalized()) {
    throw DomainError(kModule, "boundary states must be normalized");
  }
  return 2.0 / omega * ray_angle(initial, final_state);
}

OptimalHamiltonianSpec optimal_hamiltonian(const PureState& target, double omega) {
  check_omega(omega);
  if (target.dim() != 2) throw DomainError(kModule, "target must be a qubit state");
  if (!target.is_normalized()) throw DomainError(kModule, "target must be normalized");
  const cplx a = target[0];
  const cplx b = target[1];
  if (std::abs(b) <= 1e-12) {
    throw TrivialTargetError(kModule, "target coincides with the initial state; tau = 0 and H is not unique");
  }
  const PureState initial{1.0, 0.0};
  const double tau = minimal_time(initial, target, omega);
  const double s = omega * std::arg(a) / (2.0 * std::asin(std::min(std::abs(b), 1.0)));
  for (PhaseConvention conv : {PhaseConvention::flipped_quarter_turn, PhaseConvention::literal}) {
    const double quarter = conv == PhaseConvention::literal ? -0.5 * std::numbers::pi : 0.5 * std::numbers::pi;
    const double theta = wrap_angle(std::arg(b) - std::arg(a) + quarter);
    CMat H = hamiltonian_from(omega, s, theta);
    if (fidelity(expm(H, tau) * initial, target) >= kPropagationFidelity) {
      return OptimalHamiltonianSpec{omega, s, theta, H, conv};
    }
  }
  throw DomainError(kModule, "no phase convention passes the propagation check");
}

BrachistochroneResult solve_brachistochrone(const PureState& target, double omega) {
  OptimalHamiltonianSpec spec = optimal_hamiltonian(target, omega);
  const double tau = minimal_time(PureState{1.0, 0.0}, target, omega);
  return BrachistochroneResult{tau, target[0], std::move(spec)};
}

double default_scan_horizon(double omega) {
  check_omega(omega);
  return 4.0 * std::numbers::pi / omega;
}

std::optional<double> first_passage_scan(const CMat& H, const PureState& initial,
                                         const PureState& final_state, double t_max, int steps) {
  if (!H.is_finite()) throw DomainError(kModule, "non-finite Hamiltonian");
  if (H.dim() != initial.dim() || H.dim() != final_state.dim()) {
    throw DomainError(kModule, "dimension mismatch between Hamiltonian and states");
  }
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw DomainError(kModule, "t_max must be positive");
  if (steps < 1000) throw DomainError(kModule, "first-passage scan needs at least 1000 steps");

  auto state_at = [&](double t) { return expm(H, t) * initial; };
  auto reached = [&](const PureState& w) { return fidelity(w, final_state) >= kFirstPassageFidelity; };

  PureState w = initial;
  double prev_slope = overlap_slope(H, w, final_state);
  if (prev_slope <= 0.0 && reached(w)) return 0.0;

  const double dt = t_max / steps;
  const CMat step = expm(H, dt);
  for (int k = 1; k <= steps; ++k) {
    const double t = k * dt;
    // Re-anchor periodically so that stepping drift stays at roundoff level.
    w = (k % 256 == 0) ? state_at(t) : step * w;
    const double slope = overlap_slope(H, w, final_state);
    if (prev_slope > 0.0 && slope <= 0.0) {
      double lo = t - dt;
      double hi = t;
      for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (overlap_slope(H, state_at(mid), final_state) > 0.0) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      const double peak = 0.5 * (lo + hi);
      if (reached(state_at(peak))) return peak;
    }
    prev_slope = slope;
  }
  return std::nullopt;
}

}  // namespace tachys
