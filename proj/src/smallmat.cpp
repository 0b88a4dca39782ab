#include "tachys/smallmat.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tachys/errors.hpp"

namespace tachys {

namespace {

constexpr const char* kModule = "smallmat";

void check_dim(int dim) {
  if (dim != 2 && dim != 4) {
    throw DomainError(kModule, "dimension must be 2 or 4, got " + std::to_string(dim));
  }
}

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Gauss-Jordan elimination with partial pivoting; returns the inverse and
// accumulates the determinant.
CMat gauss_jordan(const CMat& m, cplx* det_out) {
  const int n = m.dim();
  CMat a = m;
  CMat inv = CMat::identity(n);
  cplx det = 1.0;
  const double scale = std::max(m.one_norm(), 1e-300);
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
    }
    if (std::abs(a(piv, col)) <= 1e-300 * scale) {
      if (det_out) {
        *det_out = 0.0;
        return inv;
      }
      throw DomainError(kModule, "matrix is singular");
    }
    if (piv != col) {
      for (int c = 0; c < n; ++c) {
        std::swap(a(col, c), a(piv, c));
        std::swap(inv(col, c), inv(piv, c));
      }
      det = -det;
    }
    const cplx p = a(col, col);
    det *= p;
    for (int c = 0; c < n; ++c) {
      a(col, c) /= p;
      inv(col, c) /= p;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const cplx factor = a(r, col);
      if (factor == cplx{}) continue;
      for (int c = 0; c < n; ++c) {
        a(r, c) -= factor * a(col, c);
        inv(r, c) -= factor * inv(col, c);
      }
    }
  }
  if (det_out) *det_out = det;
  return inv;
}

// sin(z)/z, accurate near zero.
cplx sinc(cplx z) {
  if (std::abs(z) < 1e-3) {
    const cplx z2 = z * z;
    return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
  }
  return std::sin(z) / z;
}

CMat expm2(const CMat& m, double t) {
  const cplx m0 = 0.5 * (m(0, 0) + m(1, 1));
  const cplx mx = 0.5 * (m(0, 1) + m(1, 0));
  const cplx my = 0.5 * kI * (m(0, 1) - m(1, 0));
  const cplx mz = 0.5 * (m(0, 0) - m(1, 1));
  // cos(kt) and sin(kt)/k are even in k, so the branch of the root is irrelevant.
  const cplx k = std::sqrt(mx * mx + my * my + mz * mz);
  const cplx c = std::cos(k * t);
  const cplx s = t * sinc(k * t);
  const cplx phase = std::exp(-kI * m0 * t);
  // cos(kt) I - i sin(kt)/k (m . sigma)
  const cplx a00 = c - kI * s * mz;
  const cplx a11 = c + kI * s * mz;
  const cplx a01 = -kI * s * (mx - kI * my);
  const cplx a10 = -kI * s * (mx + kI * my);
  CMat r(2);
  r(0, 0) = phase * a00;
  r(0, 1) = phase * a01;
  r(1, 0) = phase * a10;
  r(1, 1) = phase * a11;
  return r;
}

// Cyclic Jacobi for complex Hermitian matrices.
HermitianEigen jacobi(const CMat& m) {
  const int n = m.dim();
  CMat a = m;
  CMat v = CMat::identity(n);
  const double scale = std::max(m.frobenius_norm(), 1e-300);
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    if (std::sqrt(off) <= 1e-17 * scale) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double r = std::abs(a(p, q));
        if (r <= 1e-300) continue;
        const cplx ph = a(p, q) / r;  // e^{i phi}
        // Rotate the (p,q) plane by G = diag-phase * real rotation so that
        // entry (p,q) vanishes.
        const double theta = (a(q, q).real() - a(p, p).real()) / (2.0 * r);
        const double tt = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(tt * tt + 1.0);
        const double s = tt * c;
        // Columns p and q of G.
        const cplx gpp = c, gqp = -s * std::conj(ph);
        const cplx gpq = s, gqq = c * std::conj(ph);
        // A <- A G
        for (int k = 0; k < n; ++k) {
          const cplx akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * gpp + akq * gqp;
          a(k, q) = akp * gpq + akq * gqq;
          const cplx vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * gpp + vkq * gqp;
          v(k, q) = vkp * gpq + vkq * gqq;
        }
        // A <- G^dagger A
        for (int k = 0; k < n; ++k) {
          const cplx apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(gpp) * apk + std::conj(gqp) * aqk;
          a(q, k) = std::conj(gpq) * apk + std::conj(gqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
      }
    }
  }
  HermitianEigen out;
  std::array<int, CMat::kMaxDim> order{0, 1, 2, 3};
  std::sort(order.begin(), order.begin() + n,
            [&](int x, int y) { return a(x, x).real() < a(y, y).real(); });
  out.vectors = CMat(n);
  for (int j = 0; j < n; ++j) {
    out.values[j] = a(order[j], order[j]).real();
    for (int k = 0; k < n; ++k) out.vectors(k, j) = v(k, order[j]);
  }
  return out;
}

HermitianEigen herm_eig2(const CMat& m) {
  const double a = m(0, 0).real();
  const double d = m(1, 1).real();
  const cplx b = 0.5 * (m(0, 1) + std::conj(m(1, 0)));
  const double mean = 0.5 * (a + d);
  const double half = 0.5 * (a - d);
  const double r = std::hypot(half, std::abs(b));
  HermitianEigen out;
  out.vectors = CMat(2);
  out.values[0] = mean - r;
  out.values[1] = mean + r;
  if (std::abs(b) <= 1e-300) {
    const bool swap = a > d;
    out.values[0] = swap ? d : a;
    out.values[1] = swap ? a : d;
    out.vectors(0, swap ? 1 : 0) = 1.0;
    out.vectors(1, swap ? 0 : 1) = 1.0;
    return out;
  }
  for (int j = 0; j < 2; ++j) {
    const double lam = out.values[j];
    // Two candidate eigenvectors; keep the better conditioned one.
    cplx u0 = b, u1 = lam - a;
    cplx w0 = lam - d, w1 = std::conj(b);
    const double nu = std::sqrt(std::norm(u0) + std::norm(u1));
    const double nw = std::sqrt(std::norm(w0) + std::norm(w1));
    if (nw > nu) {
      u0 = w0 / nw;
      u1 = w1 / nw;
    } else {
      u0 /= nu;
      u1 /= nu;
    }
    out.vectors(0, j) = u0;
    out.vectors(1, j) = u1;
  }
  return out;
}

// Pade-13 scaling and squaring (Higham 2005).
CMat pade13(const CMat& a_in) {
  static constexpr double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                 1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                 670442572800.0,      33522128640.0,       1323241920.0,
                                 40840800.0,          960960.0,            16380.0,
                                 182.0,               1.0};
  constexpr double theta13 = 5.371920351148152;
  const int n = a_in.dim();
  const double norm1 = a_in.one_norm();
  int s = 0;
  if (norm1 > theta13) s = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
  const CMat a = a_in * cplx(std::ldexp(1.0, -s));
  const CMat id = CMat::identity(n);
  const CMat a2 = a * a;
  const CMat a4 = a2 * a2;
  const CMat a6 = a4 * a2;
  const CMat u = a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 +
                      b[3] * a2 + b[1] * id);
  const CMat v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 +
                 b[2] * a2 + b[0] * id;
  CMat r = (v - u).inverse() * (v + u);
  for (int k = 0; k < s; ++k) r = r * r;
  return r;
}

}  // namespace

CMat::CMat(int dim) : dim_(dim) { check_dim(dim); }

CMat::CMat(int dim, std::initializer_list<cplx> row_major)
    : CMat(dim, std::span<const cplx>(row_major.begin(), row_major.size())) {}

CMat::CMat(int dim, std::span<const cplx> row_major) : dim_(dim) {
  check_dim(dim);
  if (row_major.size() != static_cast<std::size_t>(dim * dim)) {
    throw DomainError(kModule, "expected " + std::to_string(dim * dim) + " entries, got " +
                                   std::to_string(row_major.size()));
  }
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) {
      const cplx z = row_major[r * dim + c];
      if (!finite(z)) throw DomainError(kModule, "non-finite matrix entry");
      (*this)(r, c) = z;
    }
  }
}

CMat CMat::identity(int dim) {
  CMat m(dim);
  for (int k = 0; k < dim; ++k) m(k, k) = 1.0;
  return m;
}

CMat CMat::diag(std::initializer_list<cplx> d) {
  CMat m(static_cast<int>(d.size()));
  int k = 0;
  for (cplx z : d) {
    if (!finite(z)) throw DomainError(kModule, "non-finite matrix entry");
    m(k, k) = z;
    ++k;
  }
  return m;
}

CMat CMat::from_blocks(const CMat& a, const CMat& b, const CMat& c, const CMat& d) {
  for (const CMat* blk : {&a, &b, &c, &d}) {
    if (blk->dim() != 2) throw DomainError(kModule, "blocks must be 2x2");
  }
  CMat m(4);
  for (int r = 0; r < 2; ++r) {
    for (int col = 0; col < 2; ++col) {
      m(r, col) = a(r, col);
      m(r, col + 2) = b(r, col);
      m(r + 2, col) = c(r, col);
      m(r + 2, col + 2) = d(r, col);
    }
  }
  return m;
}

CMat CMat::block(int r0, int c0) const {
  if (dim_ != 4) throw DomainError(kModule, "block() requires a 4x4 matrix");
  CMat b(2);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) b(r, c) = (*this)(r0 + r, c0 + c);
  return b;
}

CMat CMat::adjoint() const {
  CMat m(dim_);
  for (int r = 0; r < dim_; ++r)
    for (int c = 0; c < dim_; ++c) m(r, c) = std::conj((*this)(c, r));
  return m;
}

cplx CMat::trace() const {
  cplx t = 0.0;
  for (int k = 0; k < dim_; ++k) t += (*this)(k, k);
  return t;
}

cplx CMat::det() const {
  if (dim_ == 2) return (*this)(0, 0) * (*this)(1, 1) - (*this)(0, 1) * (*this)(1, 0);
  cplx d = 0.0;
  gauss_jordan(*this, &d);
  return d;
}

double CMat::frobenius_norm() const {
  double s = 0.0;
  for (int r = 0; r < dim_; ++r)
    for (int c = 0; c < dim_; ++c) s += std::norm((*this)(r, c));
  return std::sqrt(s);
}

double CMat::one_norm() const {
  double best = 0.0;
  for (int c = 0; c < dim_; ++c) {
    double s = 0.0;
    for (int r = 0; r < dim_; ++r) s += std::abs((*this)(r, c));
    best = std::max(best, s);
  }
  return best;
}

bool CMat::is_finite() const {
  for (int r = 0; r < dim_; ++r)
    for (int c = 0; c < dim_; ++c)
      if (!finite((*this)(r, c))) return false;
  return true;
}

double CMat::hermiticity_defect() const { return (*this - adjoint()).frobenius_norm(); }

bool CMat::is_hermitian(double tol) const { return hermiticity_defect() <= tol; }

CMat CMat::inverse() const {
  if (dim_ == 2) {
    const cplx d = det();
    const double scale = std::max(std::norm((*this)(0, 0)) + std::norm((*this)(1, 1)) +
                                      std::norm((*this)(0, 1)) + std::norm((*this)(1, 0)),
                                  1e-300);
    if (std::abs(d) <= 1e-300 * scale) throw DomainError(kModule, "matrix is singular");
    CMat m(2);
    m(0, 0) = (*this)(1, 1) / d;
    m(0, 1) = -(*this)(0, 1) / d;
    m(1, 0) = -(*this)(1, 0) / d;
    m(1, 1) = (*this)(0, 0) / d;
    return m;
  }
  return gauss_jordan(*this, nullptr);
}

CMat& CMat::operator+=(const CMat& o) {
  if (o.dim_ != dim_) throw DomainError(kModule, "dimension mismatch");
  for (int r = 0; r < dim_; ++r)
    for (int c = 0; c < dim_; ++c) (*this)(r, c) += o(r, c);
  return *this;
}

CMat& CMat::operator-=(const CMat& o) {
  if (o.dim_ != dim_) throw DomainError(kModule, "dimension mismatch");
  for (int r = 0; r < dim_; ++r)
    for (int c = 0; c < dim_; ++c) (*this)(r, c) -= o(r, c);
  return *this;
}

CMat& CMat::operator*=(cplx s) {
  for (int r = 0; r < dim_; ++r)
    for (int c = 0; c < dim_; ++c) (*this)(r, c) *= s;
  return *this;
}

CMat operator*(const CMat& a, const CMat& b) {
  if (a.dim_ != b.dim_) throw DomainError(kModule, "dimension mismatch");
  const int n = a.dim_;
  CMat m(n);
  for (int r = 0; r < n; ++r)
    for (int k = 0; k < n; ++k) {
      const cplx ark = a(r, k);
      for (int c = 0; c < n; ++c) m(r, c) += ark * b(k, c);
    }
  return m;
}

CMat kron(const CMat& a, const CMat& b) {
  if (a.dim() != 2 || b.dim() != 2) throw DomainError(kModule, "kron expects two 2x2 factors");
  CMat m(4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) m(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
  return m;
}

PureState::PureState(int dim) : dim_(dim) { check_dim(dim); }

PureState::PureState(std::initializer_list<cplx> amplitudes)
    : PureState(std::span<const cplx>(amplitudes.begin(), amplitudes.size())) {}

PureState::PureState(std::span<const cplx> amplitudes) : dim_(static_cast<int>(amplitudes.size())) {
  check_dim(dim_);
  for (int k = 0; k < dim_; ++k) {
    if (!finite(amplitudes[k])) throw DomainError(kModule, "non-finite amplitude");
    v_[k] = amplitudes[k];
  }
  refresh_norm();
}

void PureState::refresh_norm() {
  double s = 0.0;
  for (int k = 0; k < dim_; ++k) s += std::norm(v_[k]);
  norm_ = std::sqrt(s);
}

bool PureState::is_normalized(double tol) const noexcept { return std::abs(norm_ - 1.0) <= tol; }

PureState PureState::normalized() const {
  if (norm_ <= 0.0) throw DomainError(kModule, "cannot normalize the zero vector");
  return (1.0 / norm_) * *this;
}

CMat PureState::projector() const {
  CMat p(dim_);
  for (int r = 0; r < dim_; ++r)
    for (int c = 0; c < dim_; ++c) p(r, c) = v_[r] * std::conj(v_[c]);
  return p;
}

PureState operator*(const CMat& m, const PureState& v) {
  if (m.dim() != v.dim_) throw DomainError(kModule, "dimension mismatch");
  PureState out(v.dim_);
  for (int r = 0; r < v.dim_; ++r) {
    cplx s = 0.0;
    for (int c = 0; c < v.dim_; ++c) s += m(r, c) * v.v_[c];
    out.v_[r] = s;
  }
  out.refresh_norm();
  return out;
}

PureState operator*(cplx s, const PureState& v) {
  PureState out = v;
  for (int k = 0; k < v.dim_; ++k) out.v_[k] *= s;
  out.refresh_norm();
  return out;
}

PureState operator+(const PureState& a, const PureState& b) {
  if (a.dim_ != b.dim_) throw DomainError(kModule, "dimension mismatch");
  PureState out = a;
  for (int k = 0; k < a.dim_; ++k) out.v_[k] += b.v_[k];
  out.refresh_norm();
  return out;
}

PureState operator-(const PureState& a, const PureState& b) { return a + cplx(-1.0) * b; }

PureState kron(const PureState& a, const PureState& b) {
  if (a.dim() != 2 || b.dim() != 2) throw DomainError(kModule, "kron expects two qubit states");
  return PureState{a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]};
}

cplx inner(const PureState& u, const PureState& v) {
  if (u.dim() != v.dim()) throw DomainError(kModule, "dimension mismatch");
  cplx s = 0.0;
  for (int k = 0; k < u.dim(); ++k) s += std::conj(u[k]) * v[k];
  return s;
}

double fidelity(const PureState& u, const PureState& v) {
  const double denom = u.norm() * v.norm();
  if (denom <= 0.0) throw DomainError(kModule, "fidelity of a zero vector");
  return std::min(1.0, std::abs(inner(u, v)) / denom);
}

double ray_angle(const PureState& u, const PureState& v) {
  if (u.dim() != v.dim()) throw DomainError(kModule, "dimension mismatch");
  if (u.norm() <= 0.0 || v.norm() <= 0.0) throw DomainError(kModule, "angle of a zero vector");
  const PureState un = u.normalized();
  const PureState vn = v.normalized();
  const cplx along = inner(un, vn);
  const double across = (vn - along * un).norm();
  return std::atan2(across, std::abs(along));
}

bool same_ray(const PureState& u, const PureState& v, double tol) {
  return fidelity(u, v) >= 1.0 - tol;
}

CMat exp_general(const CMat& a) {
  if (!a.is_finite()) throw DomainError(kModule, "exp of a non-finite matrix");
  return pade13(a);
}

CMat expm(const CMat& m, double t) {
  if (!m.is_finite() || !std::isfinite(t)) throw DomainError(kModule, "expm of a non-finite input");
  if (m.dim() == 2) return expm2(m, t);
  const double scale = std::max(1.0, m.frobenius_norm());
  if (m.hermiticity_defect() <= 1e-13 * scale) {
    const HermitianEigen e = herm_eig(0.5 * (m + m.adjoint()));
    CMat r(4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        cplx s = 0.0;
        for (int k = 0; k < 4; ++k)
          s += e.vectors(i, k) * std::exp(-kI * e.values[k] * t) * std::conj(e.vectors(j, k));
        r(i, j) = s;
      }
    return r;
  }
  return pade13(m * cplx(0.0, -t));
}

HermitianEigen herm_eig(const CMat& m) {
  if (!m.is_finite()) throw DomainError(kModule, "eigendecomposition of a non-finite matrix");
  if (!m.is_hermitian(tol::hermitian * std::max(1.0, m.frobenius_norm()))) {
    throw DomainError(kModule, "herm_eig expects a Hermitian matrix");
  }
  return m.dim() == 2 ? herm_eig2(m) : jacobi(m);
}

CMat herm_sqrt(const CMat& p) {
  if (!p.is_finite()) throw DomainError(kModule, "herm_sqrt of a non-finite matrix");
  if (!p.is_hermitian(tol::hermitian)) throw DomainError(kModule, "herm_sqrt expects a Hermitian matrix");
  const HermitianEigen e = herm_eig(0.5 * (p + p.adjoint()));
  const double lo = e.values[0];
  if (!(lo > tol::positive_floor)) {
    throw MetricDegeneracyError(kModule, "matrix is not positive definite (min eigenvalue " +
                                             std::to_string(lo) + ")",
                                lo);
  }
  const int n = p.dim();
  CMat s(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      cplx acc = 0.0;
      for (int k = 0; k < n; ++k)
        acc += e.vectors(i, k) * std::sqrt(e.values[k]) * std::conj(e.vectors(j, k));
      s(i, j) = acc;
    }
  // Exact Hermitian symmetry of the result.
  return 0.5 * (s + s.adjoint());
}

std::pair<cplx, cplx> eig2(const CMat& m) {
  if (m.dim() != 2) throw DomainError(kModule, "eig2 expects a 2x2 matrix");
  const cplx tr = m.trace();
  const cplx root = std::sqrt(tr * tr - 4.0 * m.det());
  cplx e1 = 0.5 * (tr + root);
  cplx e2 = 0.5 * (tr - root);
  const bool first = e1.real() > e2.real() || (e1.real() == e2.real() && e1.imag() >= e2.imag());
  if (!first) std::swap(e1, e2);
  return {e1, e2};
}

CMat pauli(int k) {
  switch (k) {
    case 0: return CMat(2, {1.0, 0.0, 0.0, 1.0});
    case 1: return CMat(2, {0.0, 1.0, 1.0, 0.0});
    case 2: return CMat(2, {0.0, -kI, kI, 0.0});
    case 3: return CMat(2, {1.0, 0.0, 0.0, -1.0});
    default: throw DomainError(kModule, "Pauli index must be 0..3");
  }
}

}  // namespace tachys
