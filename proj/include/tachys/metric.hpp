#pragma once

#include <optional>
#include <span>
#include <vector>

#include "tachys/smallmat.hpp"

namespace tachys {

// Which overall scale a metric carries. Metrics are only defined up to a
// positive factor; the constructors that pick one record it here.
enum class MetricNormalization {
  as_given,          // caller-supplied eta, untouched
  unit_corner,       // eta_11 = 1 (diagonal form) or (eta^{1/2})_11 = 1 (f, g form)
  unit_determinant,  // det eta = 1, required by the dilation
};

const char* to_string(MetricNormalization n);

// Positive-definite Hermitian 2x2 metric with cached square roots.
class Metric {
 public:
  // General positive-definite eta. Throws MetricDegeneracyError otherwise.
  static Metric from_eta(const CMat& eta);
  // eta = diag(1, lambda^2).
  static Metric diagonal(double lambda);
  // eta^{1/2} = [[1, g], [conj(g), f]], admissible iff f - |g|^2 > 1e-12.
  static Metric from_fg(double f, cplx g);

  const CMat& eta() const noexcept { return eta_; }
  const CMat& sqrt_eta() const noexcept { return sqrt_eta_; }
  const CMat& inv_sqrt_eta() const noexcept { return inv_sqrt_eta_; }
  CMat inverse() const { return inv_sqrt_eta_ * inv_sqrt_eta_; }
  double det() const { return eta_.det().real(); }

  std::optional<double> lambda_diag() const noexcept { return lambda_; }
  std::optional<double> f() const noexcept { return f_; }
  std::optional<cplx> g() const noexcept { return g_; }
  MetricNormalization normalization() const noexcept { return normalization_; }

  // alpha * eta for alpha > 0. Parameterization fields are dropped unless
  // alpha == 1.
  Metric scaled(double alpha) const;
  Metric with_unit_determinant() const;
  // Representation of the same metric in the orthonormal basis given by the
  // columns of `unitary`, i.e. U^dagger eta U.
  Metric conjugated(const CMat& unitary) const;

  // <u|eta|v>
  cplx form(const PureState& u, const PureState& v) const;

 private:
  Metric(CMat eta, CMat sqrt_eta, CMat inv_sqrt_eta, MetricNormalization n);

  CMat eta_;
  CMat sqrt_eta_;
  CMat inv_sqrt_eta_;
  std::optional<double> lambda_;
  std::optional<double> f_;
  std::optional<cplx> g_;
  MetricNormalization normalization_;
};

Metric make_metric_diag(double lambda);
Metric make_metric_fg(double f, cplx g);

// H = eta^{-1/2} h eta^{1/2} with h Hermitian of gap omega.
struct QuasiHamiltonian {
  CMat h{2};
  Metric metric;
  CMat H{2};
  double omega = 0.0;
};

QuasiHamiltonian quasi_hamiltonian(const CMat& h, const Metric& metric, double omega);

// || H^dagger - eta H eta^{-1} ||_F
double pseudo_hermiticity_defect(const CMat& H, const CMat& eta);

// arccos |<u|v>| in [0, pi/2].
double angle(const PureState& u, const PureState& v);

// Angle between u and v in the inner product induced by the metric.
double eta_angle(const PureState& u, const PureState& v, const Metric& metric);

// Largest residual over interior samples of
//   H^dagger(t) - [eta H eta^{-1} - i eta d(eta^{-1})/dt],
// with the derivative by central differences on the (possibly non-uniform)
// time grid. Zero certifies that the evolution preserves the eta(t)-norm.
double transition_defect(std::span<const double> times, std::span<const CMat> eta_path,
                         std::span<const CMat> H_path);

}  // namespace tachys
