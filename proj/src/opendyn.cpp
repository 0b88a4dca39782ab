#include "tachys/opendyn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "tachys/errors.hpp"

namespace tachys {

namespace {

constexpr const char* kModule = "opendyn";
constexpr double kAlignmentTolerance = 1e-10;
constexpr double kPropagationFidelity = 1.0 - 1e-8;

void check_density_matrix(const CMat& rho) {
  if (rho.dim() != 2) throw DomainError(kModule, "rho0 must be 2x2");
  if (!rho.is_finite() || !rho.is_hermitian(tol::hermitian)) throw DomainError(kModule, "rho0 must be Hermitian");
  if (std::abs(rho.trace() - 1.0) > 1e-10) throw DomainError(kModule, "rho0 must have unit trace");
  const double lo = herm_eig(0.5 * (rho + rho.adjoint())).values[0];
  if (lo < -1e-12) throw DomainError(kModule, "rho0 is not positive semi-definite (eigenvalue " + std::to_string(lo) + ")");
}

void check_normalized(const PureState& psi) {
  if (psi.dim() != 2 || !psi.is_normalized()) throw DomainError(kModule, "boundary states must be normalized qubit states");
}

}  // namespace

OpenSplit split(const CMat& H) {
  if (H.dim() != 2 || !H.is_finite()) throw DomainError(kModule, "split expects a finite 2x2 matrix");
  const CMat Hd = H.adjoint();
  OpenSplit s;
  s.H1 = 0.5 * (H + Hd);
  s.H2 = cplx(0.0, -0.5) * (H - Hd);
  const HermitianEigen e = herm_eig(s.H2);
  s.mu1 = e.values[1];
  s.mu2 = e.values[0];
  return s;
}

ShiftedGenerator shifted_generator(const CMat& H) {
  const double mu1 = split(H).mu1;
  return ShiftedGenerator{H - cplx(0.0, mu1) * CMat::identity(2), mu1};
}

EvolutionTrace evolve_semigroup(const CMat& H, const CMat& rho0, std::span<const double> times,
                                Generator generator) {
  check_density_matrix(rho0);
  const OpenSplit parts = split(H);
  const CMat G = generator == Generator::raw ? H : H - cplx(0.0, parts.mu1) * CMat::identity(2);
  const CMat G2 = generator == Generator::raw ? parts.H2 : parts.H2 - parts.mu1 * CMat::identity(2);

  EvolutionTrace out;
  out.generator = generator;
  out.mu1 = parts.mu1;
  out.times.assign(times.begin(), times.end());
  out.rho.reserve(times.size());
  for (double t : times) {
    if (!std::isfinite(t)) throw DomainError(kModule, "non-finite time");
    const CMat U = expm(G, t);
    const CMat rho = U * rho0 * U.adjoint();
    out.trace_values.push_back(rho.trace().real());
    out.trace_slopes.push_back(2.0 * (G2 * rho).trace().real());
    out.k_values.push_back(std::exp(-2.0 * parts.mu1 * t));
    out.rho.push_back(rho);
  }
  return out;
}

MappedBoundary mapped_boundary_states(const Metric& metric, const PureState& psi_i, const PureState& psi_f) {
  check_normalized(psi_i);
  check_normalized(psi_f);
  auto map = [&](const PureState& psi) {
    const double n2 = metric.form(psi, psi).real();
    if (!(n2 > 1e-14)) throw MetricDegeneracyError(kModule, "eta-norm of a boundary state vanishes", n2);
    return (1.0 / std::sqrt(n2)) * (metric.sqrt_eta() * psi);
  };
  MappedBoundary m;
  m.psi_i = map(psi_i);
  m.psi_f = map(psi_f);
  m.a_prime = std::min(1.0, std::abs(inner(m.psi_i, m.psi_f)));
  return m;
}

AlignedHamiltonian aligned_hamiltonian(const Metric& metric, double omega, const PureState& psi_i,
                                       const PureState& psi_f) {
  if (!(omega > 0.0) || !std::isfinite(omega)) throw DomainError(kModule, "omega must be positive");
  const MappedBoundary mb = mapped_boundary_states(metric, psi_i, psi_f);
  const PureState& qi = mb.psi_i;
  const PureState& qf = mb.psi_f;

  // W = [psi_i', psi_i'^perp]; for the (f, g) metric and the orthogonal pair
  // this is (1 g; g* -1)/sqrt(1 + gg*).
  const PureState perp{std::conj(qi[1]), -std::conj(qi[0])};
  const CMat W(2, {qi[0], perp[0], qi[1], perp[1]});
  const cplx w1 = inner(qi, qf);
  const cplx w2 = inner(perp, qf);

  // First condition: mapped psi_i' has a real positive first entry.
  const double gamma1 = std::arg(inner(qi, qi));
  // Second: relative phase of the mapped psi_f' components is -pi/2.
  const double gamma2 = std::abs(w2) > 1e-15
                            ? std::remainder(std::arg(w2) - std::arg(w1) + gamma1 + 0.5 * std::numbers::pi,
                                             2.0 * std::numbers::pi)
                            : 0.0;
  const CMat U = W * CMat::diag({std::exp(kI * gamma1), std::exp(kI * gamma2)});

  const double a = std::abs(w1);
  const double b = std::abs(w2);
  const PureState normal_i = U.adjoint() * qi;
  const PureState normal_f = U.adjoint() * qf;
  const PureState want_f{a, cplx(0.0, -b)};
  const cplx ov = inner(want_f, normal_f);
  const cplx phase = std::abs(ov) > 0.0 ? ov / std::abs(ov) : cplx(1.0);
  const double residual = std::max((normal_i - PureState{1.0, 0.0}).norm(), (normal_f - phase * want_f).norm());
  if (residual > kAlignmentTolerance) {
    throw AlignmentError(kModule, "phase alignment residual " + std::to_string(residual), residual);
  }

  const CMat h_prime(2, {0.0, 0.5 * omega, 0.5 * omega, 0.0});
  CMat h = U * h_prime * U.adjoint();
  h = 0.5 * (h + h.adjoint());
  QuasiHamiltonian qh = quasi_hamiltonian(h, metric, omega);
  const double tau = 2.0 / omega * std::atan2(b, a);

  const double reach = fidelity(expm(qh.H, tau) * psi_i, psi_f);
  if (reach < kPropagationFidelity) {
    throw AlignmentError(kModule, "aligned Hamiltonian misses the target (1 - fidelity = " + std::to_string(1.0 - reach) + ")",
                         1.0 - reach);
  }
  return AlignedHamiltonian{std::move(qh), U, gamma1, gamma2, tau, mb};
}

double energy_gap_sq(const CMat& H) {
  const CMat H1 = split(H).H1;
  const cplx tr = H1.trace();
  return (tr * tr - 4.0 * H1.det()).real();
}

double dissipative_factor(double f) {
  if (!(f > 0.0)) throw DomainError(kModule, "f must be positive");
  return std::exp(-(1.0 / f + f)) / f;
}

DissipationScanRow dissipation_row(double f, double omega, double proximity) {
  if (!(f > 0.0) || !std::isfinite(f)) throw DomainError(kModule, "f must be positive");
  if (!(proximity > 0.0)) throw DomainError(kModule, "proximity must be positive");
  DissipationScanRow row;
  row.f = f;
  row.g = std::sqrt(std::max(0.0, f - proximity));
  row.proximity = f - row.g * row.g;
  row.d_factor = dissipative_factor(f);

  const Metric metric = make_metric_fg(f, row.g);
  const PureState psi_i{1.0, 0.0};
  const PureState psi_f{0.0, 1.0};
  const AlignedHamiltonian al = aligned_hamiltonian(metric, omega, psi_i, psi_f);
  row.gap_sq = energy_gap_sq(al.qh.H);
  row.a_prime = al.mapped.a_prime;
  row.tau = al.tau;
  const PureState out = expm(shifted_generator(al.qh.H).H, al.tau) * psi_i;
  row.d_factor_finite = out.norm() * out.norm();
  return row;
}

std::vector<DissipationScanRow> dissipation_scan(std::span<const double> f_grid, double omega, double proximity) {
  std::vector<DissipationScanRow> rows;
  rows.reserve(f_grid.size());
  for (double f : f_grid) rows.push_back(dissipation_row(f, omega, proximity));
  return rows;
}

}  // namespace tachys
