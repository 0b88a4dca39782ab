#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tachys/smallmat.hpp"

namespace tachys {

// Non-orthogonal computational basis psi0 = (1, 0),
// psi1 = (cos(theta/2), -i sin(theta/2)), on one great circle of the Bloch
// sphere. theta = pi is the orthogonal case.
struct BlochBasis {
  double theta = 0.0;
  PureState psi0 = PureState(2);
  PureState psi1 = PureState(2);

  // <psi0|psi1> = cos(theta/2)
  double overlap() const { return inner(psi0, psi1).real(); }
};

// Throws DegenerateBasisError for theta == 0 and DomainError outside (0, pi].
BlochBasis make_bloch_basis(double theta);

inline constexpr const char* kInconclusive = "INCONCLUSIVE";

struct Povm {
  std::vector<CMat> effects;
  std::vector<std::string> labels;

  // || sum_k E_k - I ||_F
  double completeness_defect() const;
  double min_eigenvalue() const;
  std::vector<double> probabilities(const PureState& state) const;
};

// Three-outcome unambiguous discrimination of psi0 / psi1: outcome "0" never
// fires on psi1, "1" never on psi0, INCONCLUSIVE fires with probability
// cos(theta/2) on either.
Povm discrimination_povm(const BlochBasis& basis);

double inconclusive_probability(const Povm& povm, const PureState& state);

struct NotGateReport {
  CMat U{2};                  // exp(-iH tau) carrying psi0 to psi1
  double forward_tau = 0.0;   // theta / omega
  PureState image_of_psi1 = PureState(2); // U psi1 = (cos theta, -i sin theta)
  double roundtrip_fidelity = 0.0;  // |<psi0|U psi1>| = |cos theta|
  double not_tau = 0.0;       // both directions: U(2 tau) = -identity, so tau = pi / omega
  double orthogonal_tau = 0.0;
};

NotGateReport not_roundtrip(const BlochBasis& basis, double omega);

// |<psi1 psi1|psi0 psi1> - <psi1 psi0|psi0 psi1>| for the controlled-NOT
// assignment; zero only for orthogonal or identical states.
double cloning_defect(const BlochBasis& basis);

// State of the target register fed into the control-U gate.
//  - psi1: the register the gate is meant to flip (default). The channel is
//    then exactly p psi0 + (1-p) psi1 on input psi1.
//  - e1: the control basis vector itself; the mixture form generally fails
//    and control_u_channel reports the residual by throwing.
enum class AncillaPreparation { psi1, e1 };

const char* to_string(AncillaPreparation a);

struct ControlUReport {
  double p = 0.0;  // |<psi1|e1>|^2
  double q = 0.0;  // |<psi0|e0>|^2
  double lhs = 0.0;
  double rhs = 0.0;
  CMat output_from_psi1{2};
  CMat output_from_psi0{2};
  double residual = 0.0;  // largest deviation from the two mixture forms
  bool p_below_one = false;
  bool q_below_one = false;
  PureState e0 = PureState(2);
  PureState e1 = PureState(2);
  CMat U{2};
  AncillaPreparation ancilla = AncillaPreparation::psi1;
};

// Control-U channel eps[rho] = Tr_in(V (rho x sigma) V^dagger) with
// V = |e1><e1| x U + |e0><e0| x I. e1 sits at Bloch polar angle
// `e_basis_polar` on the great circle through psi0 and psi1; e0 is antipodal.
// U is the time-optimal evolution psi1 -> psi0 with gap omega.
ControlUReport control_u_channel(const BlochBasis& basis, double e_basis_polar, double omega = 1.0,
                                 AncillaPreparation ancilla = AncillaPreparation::psi1);

struct EfficiencyReport {
  double delta_t = 0.0;
  double delta_E = 0.0;
  double epsilon = 0.0;

  double bound() const { return 2.0 / delta_E * epsilon; }
  double slack() const { return delta_t - bound(); }
};

// Optimal evolution: delta_t = brachistochrone time, delta_E = omega,
// epsilon = arccos |<psi0|psi1>|.
EfficiencyReport efficiency_bound(const BlochBasis& basis, double omega);

// Same bookkeeping for an arbitrary Hermitian H, with delta_t from the
// first-passage scan. Empty when H never carries psi0 to psi1.
std::optional<EfficiencyReport> efficiency_of(const CMat& H, const BlochBasis& basis);

}  // namespace tachys
