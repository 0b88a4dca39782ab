#pragma once

#include <optional>

#include "tachys/smallmat.hpp"

namespace tachys {

// Sign of the quarter-turn term in the off-diagonal phase
// theta = arg(b) - arg(a) -/+ pi/2: literal is minus, flipped is plus.
// optimal_hamiltonian tries flipped first and keeps the first convention
// that passes the propagation check.
enum class PhaseConvention { literal, flipped_quarter_turn };

const char* to_string(PhaseConvention c);

// H = [[s, (w/2) e^{-i theta}], [(w/2) e^{i theta}, s]], hbar = 1.
struct OptimalHamiltonianSpec {
  double omega = 0.0;
  double s = 0.0;
  double theta = 0.0;  // in (-pi, pi]
  CMat H{2};
  PhaseConvention convention = PhaseConvention::flipped_quarter_turn;
};

struct BrachistochroneResult {
  double tau = 0.0;
  cplx overlap_a;
  OptimalHamiltonianSpec spec;
};

// Time-optimal Hermitian Hamiltonian with gap omega driving (1, 0) to
// `target` (up to global phase) in the minimal time. Throws
// TrivialTargetError when target ~ (1, 0) and DomainError for omega <= 0 or a
// non-normalized target.
OptimalHamiltonianSpec optimal_hamiltonian(const PureState& target, double omega);

BrachistochroneResult solve_brachistochrone(const PureState& target, double omega);

// (2 / omega) arccos |<initial|final>|.
double minimal_time(const PureState& initial, const PureState& final_state, double omega);

inline constexpr int kDefaultScanSteps = 10000;
inline constexpr double kFirstPassageFidelity = 1.0 - 1e-8;

// 4 pi / omega bounds the revisit period of any 2x2 evolution with gap omega.
double default_scan_horizon(double omega);

// Earliest time t in [0, t_max] at which exp(-iHt) initial reaches `final`
// with fidelity >= 1 - 1e-8. The grid brackets each local maximum of the
// overlap; the maximum itself is located by bisection on the sign of the
// overlap derivative, to 1e-12 in t.
std::optional<double> first_passage_scan(const CMat& H, const PureState& initial,
                                         const PureState& final_state, double t_max,
                                         int steps = kDefaultScanSteps);

}  // namespace tachys
