#include "tachys/gates.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tachys/brachistochrone.hpp"
#include "tachys/errors.hpp"
#include "tachys/metric.hpp"

namespace tachys {

namespace {

constexpr const char* kModule = "gates";
constexpr double kDecompositionTolerance = 1e-8;

// Bloch-circle state at polar angle x: (cos(x/2), -i sin(x/2)).
PureState circle_state(double x) { return PureState{std::cos(0.5 * x), cplx(0.0, -std::sin(0.5 * x))}; }

CMat partial_trace_first(const CMat& m) {
  CMat out(2);
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l) out(k, l) = m(k, l) + m(2 + k, 2 + l);
  return out;
}

}  // namespace

BlochBasis make_bloch_basis(double theta) {
  if (!std::isfinite(theta)) throw DomainError(kModule, "theta must be finite");
  if (theta == 0.0) throw DegenerateBasisError(kModule, "theta = 0: basis states coincide");
  if (!(theta > 0.0) || theta > std::numbers::pi) throw DomainError(kModule, "theta must lie in (0, pi]");
  return BlochBasis{theta, PureState{1.0, 0.0}, circle_state(theta)};
}

double Povm::completeness_defect() const {
  CMat sum(2);
  for (const CMat& e : effects) sum += e;
  return (sum - CMat::identity(2)).frobenius_norm();
}

double Povm::min_eigenvalue() const {
  double lo = 1.0;
  for (const CMat& e : effects) lo = std::min(lo, herm_eig(e).values[0]);
  return lo;
}

std::vector<double> Povm::probabilities(const PureState& state) const {
  const CMat rho = state.normalized().projector();
  std::vector<double> p;
  p.reserve(effects.size());
  for (const CMat& e : effects) p.push_back((e * rho).trace().real());
  return p;
}

Povm discrimination_povm(const BlochBasis& basis) {
  const cplx a = basis.psi1[0];
  const cplx b = basis.psi1[1];
  const double scale = 1.0 / (1.0 + std::abs(a));
  // E0 = |v><v| with v = (b*, -a*), orthogonal to psi1; E1 = |1><1|, orthogonal to psi0.
  const PureState v{std::conj(b), -std::conj(a)};
  const CMat e0 = scale * v.projector();
  const CMat e1 = scale * CMat::diag({0.0, 1.0});
  const CMat e2 = CMat::identity(2) - e0 - e1;
  return Povm{{e0, e1, e2}, {"0", "1", kInconclusive}};
}

double inconclusive_probability(const Povm& povm, const PureState& state) {
  const auto it = std::find(povm.labels.begin(), povm.labels.end(), kInconclusive);
  if (it == povm.labels.end()) throw DomainError(kModule, "POVM has no inconclusive outcome");
  const CMat& e = povm.effects[static_cast<std::size_t>(it - povm.labels.begin())];
  return (e * state.normalized().projector()).trace().real();
}

NotGateReport not_roundtrip(const BlochBasis& basis, double omega) {
  if (!(omega > 0.0)) throw DomainError(kModule, "omega must be positive");
  const double c = std::cos(0.5 * basis.theta);
  const double s = std::sin(0.5 * basis.theta);
  NotGateReport r;
  r.U = CMat(2, {c, cplx(0.0, -s), cplx(0.0, -s), c});
  if (!same_ray(r.U * basis.psi0, basis.psi1, 1e-12)) throw DomainError(kModule, "U does not carry psi0 to psi1");
  r.forward_tau = minimal_time(basis.psi0, basis.psi1, omega);
  r.image_of_psi1 = r.U * basis.psi1;
  r.roundtrip_fidelity = fidelity(basis.psi0, r.image_of_psi1);
  // (w/2) * 2 tau = pi
  r.not_tau = std::numbers::pi / omega;
  r.orthogonal_tau = minimal_time(PureState{1.0, 0.0}, PureState{0.0, 1.0}, omega);
  return r;
}

double cloning_defect(const BlochBasis& basis) {
  const PureState& p0 = basis.psi0;
  const PureState& p1 = basis.psi1;
  // |psi1 psi1> -> |psi1 psi0>, |psi0 psi1> -> |psi0 psi1>
  const cplx before = inner(kron(p1, p1), kron(p0, p1));
  const cplx after = inner(kron(p1, p0), kron(p0, p1));
  return std::abs(before - after);
}

const char* to_string(AncillaPreparation a) { return a == AncillaPreparation::psi1 ? "psi1" : "e1"; }

ControlUReport control_u_channel(const BlochBasis& basis, double e_basis_polar, double omega,
                                 AncillaPreparation ancilla) {
  if (!std::isfinite(e_basis_polar)) throw DomainError(kModule, "e-basis polar angle must be finite");
  ControlUReport r;
  r.ancilla = ancilla;
  r.e1 = circle_state(e_basis_polar);
  r.e0 = circle_state(e_basis_polar + std::numbers::pi);

  // Time-optimal psi0 -> psi1 evolution, run backwards: psi1 -> psi0.
  const BrachistochroneResult forward = solve_brachistochrone(basis.psi1, omega);
  r.U = expm(forward.spec.H, forward.tau).adjoint();

  const CMat p_e1 = r.e1.projector();
  const CMat p_e0 = r.e0.projector();
  const CMat V = kron(p_e1, r.U) + kron(p_e0, CMat::identity(2));
  const CMat sigma = ancilla == AncillaPreparation::psi1 ? basis.psi1.projector() : p_e1;
  auto channel = [&](const CMat& rho) { return partial_trace_first(V * kron(rho, sigma) * V.adjoint()); };

  const CMat P0 = basis.psi0.projector();
  const CMat P1 = basis.psi1.projector();
  r.output_from_psi1 = channel(P1);
  r.output_from_psi0 = channel(P0);

  r.p = std::norm(inner(basis.psi1, r.e1));
  r.q = std::norm(inner(basis.psi0, r.e0));
  r.residual = std::max((r.output_from_psi1 - (r.p * P0 + (1.0 - r.p) * P1)).frobenius_norm(),
                        (r.output_from_psi0 - ((1.0 - r.q) * P0 + r.q * P1)).frobenius_norm());
  if (r.residual > kDecompositionTolerance) {
    throw ChannelDecompositionError(kModule, "channel output is not the p/q mixture of psi0 and psi1 (residual " +
                                                 std::to_string(r.residual) + ")",
                                    r.residual);
  }
  r.lhs = angle(r.e0, r.e1);
  r.rhs = std::acos(std::min(1.0, std::sqrt(r.p))) + angle(basis.psi0, basis.psi1) +
          std::acos(std::min(1.0, std::sqrt(r.q)));
  r.p_below_one = r.p < 1.0 - 1e-12;
  r.q_below_one = r.q < 1.0 - 1e-12;
  return r;
}

EfficiencyReport efficiency_bound(const BlochBasis& basis, double omega) {
  EfficiencyReport r;
  r.delta_E = omega;
  r.delta_t = minimal_time(basis.psi0, basis.psi1, omega);
  r.epsilon = angle(basis.psi0, basis.psi1);
  return r;
}

std::optional<EfficiencyReport> efficiency_of(const CMat& H, const BlochBasis& basis) {
  if (H.dim() != 2 || !H.is_hermitian(tol::hermitian)) throw DomainError(kModule, "H must be a Hermitian 2x2 matrix");
  const auto [e_hi, e_lo] = eig2(H);
  const double gap = std::abs(e_hi - e_lo);
  if (!(gap > 0.0)) throw DomainError(kModule, "H has a degenerate spectrum");
  const auto t = first_passage_scan(H, basis.psi0, basis.psi1, default_scan_horizon(gap));
  if (!t) return std::nullopt;
  return EfficiencyReport{*t, gap, angle(basis.psi0, basis.psi1)};
}

}  // namespace tachys
