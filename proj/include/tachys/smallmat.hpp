#pragma once

// Dense complex linear algebra for the two operator sizes this library needs:
// qubit operators (dim 2) and their dilations / two-qubit products (dim 4).

#include <array>
#include <complex>
#include <initializer_list>
#include <span>
#include <utility>

namespace tachys {

using cplx = std::complex<double>;

inline constexpr cplx kI{0.0, 1.0};

namespace tol {
inline constexpr double hermitian = 1e-10;
inline constexpr double positive_floor = 1e-12;
inline constexpr double state_equality = 1e-10;
inline constexpr double normalized = 1e-10;
}  // namespace tol

class CMat {
 public:
  static constexpr int kMaxDim = 4;

  // Zero matrix of the given dimension (2 or 4).
  explicit CMat(int dim = 2);
  // Row-major entries; throws DomainError on wrong count or non-finite entries.
  CMat(int dim, std::initializer_list<cplx> row_major);
  CMat(int dim, std::span<const cplx> row_major);

  static CMat identity(int dim);
  static CMat diag(std::initializer_list<cplx> d);
  static CMat from_blocks(const CMat& a, const CMat& b, const CMat& c, const CMat& d);

  int dim() const noexcept { return dim_; }
  cplx operator()(int r, int c) const noexcept { return a_[r * kMaxDim + c]; }
  cplx& operator()(int r, int c) noexcept { return a_[r * kMaxDim + c]; }

  CMat block(int r0, int c0) const;  // 2x2 block of a 4x4 matrix
  CMat adjoint() const;
  cplx trace() const;
  cplx det() const;
  double frobenius_norm() const;
  double one_norm() const;
  bool is_finite() const;
  bool is_hermitian(double tol = tol::hermitian) const;
  // Frobenius norm of M - M^dagger.
  double hermiticity_defect() const;
  CMat inverse() const;

  CMat& operator+=(const CMat& o);
  CMat& operator-=(const CMat& o);
  CMat& operator*=(cplx s);

  friend CMat operator+(CMat a, const CMat& b) { return a += b; }
  friend CMat operator-(CMat a, const CMat& b) { return a -= b; }
  friend CMat operator*(CMat a, cplx s) { return a *= s; }
  friend CMat operator*(cplx s, CMat a) { return a *= s; }
  friend CMat operator*(const CMat& a, const CMat& b);

 private:
  int dim_;
  std::array<cplx, kMaxDim * kMaxDim> a_{};
};

CMat kron(const CMat& a, const CMat& b);

class PureState {
 public:
  explicit PureState(int dim = 2);
  PureState(std::initializer_list<cplx> amplitudes);
  explicit PureState(std::span<const cplx> amplitudes);

  int dim() const noexcept { return dim_; }
  cplx operator[](int i) const noexcept { return v_[i]; }
  double norm() const noexcept { return norm_; }
  bool is_normalized(double tol = tol::normalized) const noexcept;
  PureState normalized() const;
  // |psi><psi| (unnormalized if the state is).
  CMat projector() const;

  friend PureState operator*(const CMat& m, const PureState& v);
  friend PureState operator*(cplx s, const PureState& v);
  friend PureState operator+(const PureState& a, const PureState& b);
  friend PureState operator-(const PureState& a, const PureState& b);

 private:
  void refresh_norm();

  int dim_;
  double norm_ = 0.0;
  std::array<cplx, CMat::kMaxDim> v_{};
};

PureState kron(const PureState& a, const PureState& b);

// <u|v>
cplx inner(const PureState& u, const PureState& v);
// |<u|v>| / (|u| |v|)
double fidelity(const PureState& u, const PureState& v);
// arccos |<u|v>| / (|u| |v|) in [0, pi/2], evaluated as an atan2 of the
// perpendicular and parallel parts so it stays accurate near 0 and pi/2.
double ray_angle(const PureState& u, const PureState& v);
// Phase-insensitive ray equality.
bool same_ray(const PureState& u, const PureState& v, double tol = tol::state_equality);

// exp(-i M t). Closed-form Pauli decomposition for dim 2; Hermitian
// eigendecomposition or Pade-13 scaling and squaring for dim 4.
CMat expm(const CMat& m, double t);
// exp(A) for a general matrix via scaling and squaring.
CMat exp_general(const CMat& a);

struct HermitianEigen {
  // Ascending eigenvalues and the matching orthonormal eigenvectors as columns.
  std::array<double, CMat::kMaxDim> values{};
  CMat vectors;
};
HermitianEigen herm_eig(const CMat& m);

// Principal square root of a Hermitian positive-definite matrix.
CMat herm_sqrt(const CMat& p);

// Both eigenvalues of a 2x2 matrix from its trace and determinant, ordered by
// descending real part, ties by descending imaginary part.
std::pair<cplx, cplx> eig2(const CMat& m);

// Pauli matrices; index 0 is the identity.
CMat pauli(int k);

}  // namespace tachys
