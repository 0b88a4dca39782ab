#pragma once

#include <span>
#include <vector>

#include "tachys/metric.hpp"
#include "tachys/smallmat.hpp"

namespace tachys {

// H = H1 + i H2 with both parts Hermitian; mu1 >= mu2 are the eigenvalues of H2.
struct OpenSplit {
  CMat H1{2};
  CMat H2{2};
  double mu1 = 0.0;
  double mu2 = 0.0;
};

OpenSplit split(const CMat& H);

// Generator used by evolve_semigroup: the bare non-Hermitian H, or
// H' = H - i mu1 I, which never increases the trace.
enum class Generator { raw, shifted };

struct EvolutionTrace {
  Generator generator = Generator::raw;
  double mu1 = 0.0;  // from split(H) of the unshifted generator
  std::vector<double> times;
  std::vector<CMat> rho;
  std::vector<double> trace_values;
  // d Tr(rho)/dt = 2 Tr(H2 rho), evaluated with the generator's own H2.
  std::vector<double> trace_slopes;
  // exp(-2 mu1 t): rho_shifted(t) = k(t) rho_raw(t).
  std::vector<double> k_values;
};

// rho(t) = exp(-iGt) rho0 exp(+iG^dagger t) in closed form at every grid
// time, with G = H or H'. rho0 must be a density matrix.
EvolutionTrace evolve_semigroup(const CMat& H, const CMat& rho0, std::span<const double> times,
                                Generator generator = Generator::raw);

struct ShiftedGenerator {
  CMat H{2};
  double mu1 = 0.0;
};

// Minimal global dissipative term: H' = H - i mu1 I.
ShiftedGenerator shifted_generator(const CMat& H);

struct MappedBoundary {
  PureState psi_i = PureState(2);
  PureState psi_f = PureState(2);
  double a_prime = 0.0;  // |<psi_i'|psi_f'>|
};

// psi' = eta^{1/2} psi / sqrt(<psi|eta|psi>): the Hermitian picture of the
// boundary states.
MappedBoundary mapped_boundary_states(const Metric& metric, const PureState& psi_i, const PureState& psi_f);

struct AlignedHamiltonian {
  QuasiHamiltonian qh;
  CMat frame{2};  // U, with U^dagger psi_i' = (1, 0) and U^dagger psi_f' ~ (a', -i b')
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double tau = 0.0;
  MappedBoundary mapped;
};

// Quasi-Hermitian Hamiltonian eta^{-1/2} U h' U^dagger eta^{1/2}, with
// h' = [[0, w/2], [w/2, 0]], that carries psi_i to psi_f in
// tau = (2/w) arccos |a'|. Throws AlignmentError when the phase solve or the
// propagation check misses its tolerance.
AlignedHamiltonian aligned_hamiltonian(const Metric& metric, double omega, const PureState& psi_i,
                                       const PureState& psi_f);

// (Tr H1)^2 - 4 det H1, the squared eigenvalue gap of the Hermitian part.
double energy_gap_sq(const CMat& H);

// Closed-form limit of the dissipative factor, (1/f) exp(-(1/f + f)).
double dissipative_factor(double f);

struct DissipationScanRow {
  double f = 0.0;
  double g = 0.0;          // real g on the approach path
  double proximity = 0.0;  // f - g^2
  double d_factor = 0.0;   // closed form
  double gap_sq = 0.0;
  double a_prime = 0.0;
  double tau = 0.0;
  // Revelation probability at finite (g, f): |exp(-iH'tau) psi_i|^2 for the
  // orthogonal pair psi_i = (1,0), psi_f = (0,1).
  double d_factor_finite = 0.0;
};

DissipationScanRow dissipation_row(double f, double omega, double proximity);

// One row per f, in grid order, approached along real g with f - g^2 = proximity.
std::vector<DissipationScanRow> dissipation_scan(std::span<const double> f_grid, double omega,
                                                 double proximity = 1e-6);

}  // namespace tachys
