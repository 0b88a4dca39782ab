#pragma once

#include "tachys/metric.hpp"
#include "tachys/smallmat.hpp"

namespace tachys {

// Four-dimensional Hermitian model whose restriction to the observed block
// reproduces exp(-iHt) for H = eta^{-1/2} h eta^{1/2}.
//
// Every 2x2 matrix stored here is written in the orthonormal eigenbasis
// {|e+>, |e->} of h, so h itself is diag(w/2, -w/2). `basis` holds those
// eigenvectors as columns in the caller's (computational) basis and converts
// between the two.
struct DilationModel {
  Metric eta;    // det eta = 1, eigenbasis representation
  CMat basis{2};   // columns |e+>, |e->
  CMat H{2};       // eta^{-1/2} diag(w/2, -w/2) eta^{1/2}
  CMat V{4};       // fnorm [[eta^{-1/2}, eta^{1/2}], [eta^{1/2}, -eta^{-1/2}]]
  CMat Hbig{4};    // fnorm^2 [[H eta^{-1} + eta H, H - H^+], [H^+ - H, H eta^{-1} + eta H]]
  double fnorm = 0.0;  // 1 / sqrt(Tr eta)
  double omega = 0.0;

  CMat to_eigenbasis(const CMat& m) const { return basis.adjoint() * m * basis; }
  CMat from_eigenbasis(const CMat& m) const { return basis * m * basis.adjoint(); }
  PureState to_eigenbasis(const PureState& v) const { return basis.adjoint() * v; }
  PureState from_eigenbasis(const PureState& v) const { return basis * v; }
};

// h: Hermitian, traceless, gap omega, in the computational basis. The metric
// is rescaled to unit determinant. Throws MetricDegeneracyError when
// det eta <= 1e-12 before rescaling.
DilationModel build_dilation(const CMat& h, const Metric& metric, double omega);

struct DilatedState {
  PureState phi = PureState(4);  // (psi(t); chi(t)) in the eigenbasis representation
  PureState psi = PureState(2);  // observed part, computational basis
  PureState chi = PureState(2);  // unobserved part, computational basis
};

// Evolves phi_i = (psi_i; eta psi_i) under exp(-i Hbig t).
DilatedState evolve_dilated(const DilationModel& model, const PureState& psi_i, double t);

// <psi|psi> / <chi|chi> with chi = eta psi, for the metric as given.
double visibility_ratio(const Metric& metric, const PureState& psi);

}  // namespace tachys
