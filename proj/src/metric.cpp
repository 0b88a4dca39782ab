#include "tachys/metric.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tachys/errors.hpp"

namespace tachys {

namespace {

constexpr const char* kModule = "metric";

void require_qubit(const CMat& m, const char* what) {
  if (m.dim() != 2) throw DomainError(kModule, std::string(what) + " must be 2x2");
}

CMat checked_inverse(const CMat& m) {
  const double scale = std::max(m.frobenius_norm(), 1e-300);
  const double d = std::abs(m.det());
  if (!(d > 1e-14 * std::pow(scale, m.dim()))) throw DomainError(kModule, "eta is singular");
  return m.inverse();
}

}  // namespace

const char* to_string(MetricNormalization n) {
  switch (n) {
    case MetricNormalization::as_given: return "as_given";
    case MetricNormalization::unit_corner: return "unit_corner";
    case MetricNormalization::unit_determinant: return "unit_determinant";
  }
  return "unknown";
}

Metric::Metric(CMat eta, CMat sqrt_eta, CMat inv_sqrt_eta, MetricNormalization n)
    : eta_(std::move(eta)),
      sqrt_eta_(std::move(sqrt_eta)),
      inv_sqrt_eta_(std::move(inv_sqrt_eta)),
      normalization_(n) {}

Metric Metric::from_eta(const CMat& eta) {
  require_qubit(eta, "eta");
  if (!eta.is_finite()) throw DomainError(kModule, "eta has non-finite entries");
  if (!eta.is_hermitian(tol::hermitian)) throw DomainError(kModule, "eta must be Hermitian");
  const CMat sym = 0.5 * (eta + eta.adjoint());
  const double lo = herm_eig(sym).values[0];
  if (!(lo > tol::positive_floor)) {
    throw MetricDegeneracyError(kModule, "eta is not positive definite (min eigenvalue " + std::to_string(lo) + ")",
                                lo);
  }
  CMat root = herm_sqrt(sym);
  CMat inv_root = root.inverse();
  return Metric(sym, root, inv_root, MetricNormalization::as_given);
}

Metric Metric::diagonal(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError(kModule, "lambda must be positive");
  Metric m(CMat::diag({1.0, lambda * lambda}), CMat::diag({1.0, lambda}), CMat::diag({1.0, 1.0 / lambda}),
           MetricNormalization::unit_corner);
  m.lambda_ = lambda;
  return m;
}

Metric Metric::from_fg(double f, cplx g) {
  if (!std::isfinite(f) || !std::isfinite(g.real()) || !std::isfinite(g.imag())) {
    throw DomainError(kModule, "f and g must be finite");
  }
  const double gap = f - std::norm(g);
  if (!(gap > tol::positive_floor)) {
    throw MetricDegeneracyError(kModule, "f - |g|^2 = " + std::to_string(gap) + " is not positive", gap);
  }
  const CMat root(2, {1.0, g, std::conj(g), f});
  const CMat inv_root = (1.0 / gap) * CMat(2, {f, -g, -std::conj(g), 1.0});
  Metric m(root * root, root, inv_root, MetricNormalization::unit_corner);
  m.f_ = f;
  m.g_ = g;
  return m;
}

Metric Metric::scaled(double alpha) const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError(kModule, "scale factor must be positive");
  if (alpha == 1.0) return *this;
  const double root = std::sqrt(alpha);
  return Metric(alpha * eta_, root * sqrt_eta_, (1.0 / root) * inv_sqrt_eta_, MetricNormalization::as_given);
}

Metric Metric::with_unit_determinant() const {
  const double d = det();
  if (!(d > 0.0)) throw MetricDegeneracyError(kModule, "det eta is not positive", d);
  Metric m = scaled(1.0 / std::sqrt(d));
  m.normalization_ = MetricNormalization::unit_determinant;
  return m;
}

Metric Metric::conjugated(const CMat& unitary) const {
  require_qubit(unitary, "basis");
  if ((unitary.adjoint() * unitary - CMat::identity(2)).frobenius_norm() > 1e-10) {
    throw DomainError(kModule, "basis change must be unitary");
  }
  const CMat ud = unitary.adjoint();
  return Metric(ud * eta_ * unitary, ud * sqrt_eta_ * unitary, ud * inv_sqrt_eta_ * unitary, normalization_);
}

cplx Metric::form(const PureState& u, const PureState& v) const { return inner(u, eta_ * v); }

Metric make_metric_diag(double lambda) { return Metric::diagonal(lambda); }

Metric make_metric_fg(double f, cplx g) { return Metric::from_fg(f, g); }

QuasiHamiltonian quasi_hamiltonian(const CMat& h, const Metric& metric, double omega) {
  require_qubit(h, "h");
  if (!(omega > 0.0) || !std::isfinite(omega)) throw DomainError(kModule, "omega must be positive");
  if (!h.is_hermitian(tol::hermitian)) throw DomainError(kModule, "h must be Hermitian");
  const HermitianEigen e = herm_eig(h);
  const double gap = e.values[1] - e.values[0];
  if (std::abs(gap - omega) > 1e-10 * std::max(1.0, omega)) {
    throw DomainError(kModule, "spectral gap of h (" + std::to_string(gap) + ") differs from omega");
  }
  CMat H = metric.inv_sqrt_eta() * h * metric.sqrt_eta();
  return QuasiHamiltonian{h, metric, H, omega};
}

double pseudo_hermiticity_defect(const CMat& H, const CMat& eta) {
  if (H.dim() != eta.dim()) throw DomainError(kModule, "dimension mismatch");
  const CMat inv = checked_inverse(eta);
  return (H.adjoint() - eta * H * inv).frobenius_norm();
}

double angle(const PureState& u, const PureState& v) { return ray_angle(u, v); }

double eta_angle(const PureState& u, const PureState& v, const Metric& metric) {
  const double nu = metric.form(u, u).real();
  const double nv = metric.form(v, v).real();
  if (!(nu >= 1e-14) || !(nv >= 1e-14)) {
    throw MetricDegeneracyError(kModule, "eta-norm of a boundary state vanishes", std::min(nu, nv));
  }
  const double radicand = std::clamp(std::norm(metric.form(u, v)) / (nu * nv), 0.0, 1.0);
  return std::acos(std::sqrt(radicand));
}

double transition_defect(std::span<const double> times, std::span<const CMat> eta_path,
                         std::span<const CMat> H_path) {
  const std::size_t n = times.size();
  if (n < 3) throw DomainError(kModule, "transition_defect needs at least 3 samples");
  if (eta_path.size() != n || H_path.size() != n) throw DomainError(kModule, "path lengths differ");
  for (std::size_t k = 1; k < n; ++k) {
    if (!(times[k] > times[k - 1])) throw DomainError(kModule, "sample times must increase strictly");
  }
  std::vector<CMat> inv;
  inv.reserve(n);
  for (const CMat& e : eta_path) inv.push_back(checked_inverse(e));
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const CMat d_inv = (1.0 / (times[k + 1] - times[k - 1])) * (inv[k + 1] - inv[k - 1]);
    const CMat& eta = eta_path[k];
    const CMat& H = H_path[k];
    const CMat residual = H.adjoint() - (eta * H * inv[k] - kI * (eta * d_inv));
    worst = std::max(worst, residual.frobenius_norm());
  }
  return worst;
}

}  // namespace tachys
