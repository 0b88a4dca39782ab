#include "tachys/dilation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tachys/errors.hpp"

namespace tachys {

namespace {

constexpr const char* kModule = "dilation";

}  // namespace

DilationModel build_dilation(const CMat& h, const Metric& metric, double omega) {
  if (h.dim() != 2 || !h.is_finite()) throw DomainError(kModule, "h must be a finite 2x2 matrix");
  if (!(omega > 0.0) || !std::isfinite(omega)) throw DomainError(kModule, "omega must be positive");
  if (!h.is_hermitian(tol::hermitian)) throw DomainError(kModule, "h must be Hermitian");
  const double scale = std::max(1.0, omega);
  if (std::abs(h.trace()) > 1e-10 * scale) throw DomainError(kModule, "h must be traceless");
  const HermitianEigen eig = herm_eig(h);
  if (std::abs((eig.values[1] - eig.values[0]) - omega) > 1e-10 * scale) {
    throw DomainError(kModule, "spectral gap of h differs from omega");
  }
  const double det = metric.det();
  if (!(det > 1e-12)) throw MetricDegeneracyError(kModule, "det eta = " + std::to_string(det) + " is degenerate", det);

  // Columns |e+>, |e->.
  const CMat basis(2, {eig.vectors(0, 1), eig.vectors(0, 0), eig.vectors(1, 1), eig.vectors(1, 0)});
  const Metric eta = metric.with_unit_determinant().conjugated(basis);

  const CMat energies = CMat::diag({0.5 * omega, -0.5 * omega});
  const CMat& root = eta.sqrt_eta();
  const CMat& inv_root = eta.inv_sqrt_eta();
  const CMat H = inv_root * energies * root;
  const CMat Hd = H.adjoint();
  const CMat inv_eta = eta.inverse();

  const double fnorm = 1.0 / std::sqrt(eta.eta().trace().real());
  const CMat V = fnorm * CMat::from_blocks(inv_root, root, root, -1.0 * inv_root);
  const CMat diag_block = H * inv_eta + eta.eta() * H;
  const CMat Hbig = (fnorm * fnorm) * CMat::from_blocks(diag_block, H - Hd, Hd - H, diag_block);

  // Columns of eta^{-1/2} (eta^{1/2}) are eigenvectors of H (H^dagger).
  const double rel = std::max(1.0, H.frobenius_norm()) * std::max(1.0, root.frobenius_norm());
  const double defect = std::max((H * inv_root - inv_root * energies).frobenius_norm(),
                                 (Hd * root - root * energies).frobenius_norm());
  if (defect > 1e-10 * rel) {
    throw DomainError(kModule, "eigen-relations of the dilated model fail (defect " + std::to_string(defect) + ")");
  }
  return DilationModel{eta, basis, H, V, Hbig, fnorm, omega};
}

DilatedState evolve_dilated(const DilationModel& model, const PureState& psi_i, double t) {
  if (psi_i.dim() != 2 || !psi_i.is_normalized()) throw DomainError(kModule, "psi_i must be a normalized qubit state");
  const PureState psi_e = model.to_eigenbasis(psi_i);
  const PureState chi_e = model.eta.eta() * psi_e;
  const PureState phi_i{psi_e[0], psi_e[1], chi_e[0], chi_e[1]};
  const PureState phi = expm(model.Hbig, t) * phi_i;
  DilatedState out;
  out.phi = phi;
  out.psi = model.from_eigenbasis(PureState{phi[0], phi[1]});
  out.chi = model.from_eigenbasis(PureState{phi[2], phi[3]});
  return out;
}

double visibility_ratio(const Metric& metric, const PureState& psi) {
  if (psi.dim() != 2) throw DomainError(kModule, "psi must be a qubit state");
  const PureState chi = metric.eta() * psi;
  if (!(chi.norm() > 0.0)) throw DomainError(kModule, "hidden component vanishes");
  return (psi.norm() * psi.norm()) / (chi.norm() * chi.norm());
}

}  // namespace tachys
