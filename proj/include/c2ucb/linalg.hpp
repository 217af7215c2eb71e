#pragma once

// Deterministic dense kernels for small symmetric matrices: Cholesky,
// cyclic Jacobi eigenvalues, determinant identities. Determinants are
// carried as log-determinants throughout.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "c2ucb/errors.hpp"
#include "c2ucb/matrix.hpp"

namespace c2ucb {

inline constexpr double kSymmetryTol = 1e-12;
inline constexpr double kPdPivotTol = 1e-12;  // relative to max diagonal entry

namespace detail {

// Lower-triangular Cholesky factor of a symmetric matrix. A pivot at or
// below kPdPivotTol * max(diag) rejects the matrix.
inline Matrix cholesky_lower(const Matrix& a) {
  const std::size_t n = a.rows();
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, a(i, i));
  const double cutoff = kPdPivotTol * max_diag;
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = a(j, j);
    for (std::size_t k = 0; k < j; ++k) s -= l(j, k) * l(j, k);
    if (!(s > cutoff) || max_diag <= 0.0)
      throw NotPositiveDefinite("Cholesky pivot below tolerance");
    l(j, j) = std::sqrt(s);
    for (std::size_t i = j + 1; i < n; ++i) {
      double t = a(i, j);
      for (std::size_t k = 0; k < j; ++k) t -= l(i, k) * l(j, k);
      l(i, j) = t / l(j, j);
    }
  }
  return l;
}

inline double logdet_from_chol(const Matrix& l) {
  double s = 0.0;
  for (std::size_t i = 0; i < l.rows(); ++i) s += std::log(l(i, i));
  return 2.0 * s;
}

// Solve L LT x = b in place of a copy of b.
inline Vector chol_solve(const Matrix& l, Vector b) {
  const std::size_t n = l.rows();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < i; ++k) b[i] -= l(i, k) * b[k];
    b[i] /= l(i, i);
  }
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t k = i + 1; k < n; ++k) b[i] -= l(k, i) * b[k];
    b[i] /= l(i, i);
  }
  return b;
}

// Determinant of a small general square matrix by LU with partial pivoting.
inline double lu_det(Matrix m) {
  const std::size_t n = m.rows();
  if (n != m.cols()) throw DimensionMismatch("lu_det needs a square matrix");
  double det = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(m(r, c)) > std::abs(m(piv, c))) piv = r;
    if (m(piv, c) == 0.0) return 0.0;
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(piv, j), m(c, j));
      det = -det;
    }
    det *= m(c, c);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = m(r, c) / m(c, c);
      for (std::size_t j = c; j < n; ++j) m(r, j) -= f * m(c, j);
    }
  }
  return det;
}

}  // namespace detail

// Real symmetric positive definite matrix with cached Cholesky factor and
// log-determinant. Immutable after construction.
class PosDefMatrix {
 public:
  explicit PosDefMatrix(Matrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols() || entries_.rows() == 0)
      throw DimensionMismatch("PosDefMatrix needs a square nonempty matrix");
    if (!entries_.is_symmetric(kSymmetryTol))
      throw NonSymmetric("entries not symmetric within 1e-12");
    chol_ = detail::cholesky_lower(entries_);
    logdet_ = detail::logdet_from_chol(chol_);
  }

  static PosDefMatrix scaled_identity(std::size_t d, double s) {
    return PosDefMatrix(Matrix::scaled_identity(d, s));
  }

  std::size_t dim() const { return entries_.rows(); }
  const Matrix& entries() const { return entries_; }
  const Matrix& chol() const { return chol_; }
  double logdet() const { return logdet_; }
  double det() const { return std::exp(logdet_); }

  Vector solve(const Vector& b) const {
    if (b.size() != dim()) throw DimensionMismatch("solve rhs length");
    return detail::chol_solve(chol_, b);
  }

  // Column-by-column solve: returns A^-1 B.
  Matrix solve(const Matrix& b) const {
    if (b.rows() != dim()) throw DimensionMismatch("solve rhs rows");
    Matrix x(b.rows(), b.cols());
    Vector col(dim());
    for (std::size_t j = 0; j < b.cols(); ++j) {
      for (std::size_t i = 0; i < dim(); ++i) col[i] = b(i, j);
      Vector sol = detail::chol_solve(chol_, col);
      for (std::size_t i = 0; i < dim(); ++i) x(i, j) = sol[i];
    }
    return x;
  }

 private:
  Matrix entries_;
  Matrix chol_;
  double logdet_ = 0.0;
};

struct SymEigen {
  std::vector<double> values;  // ascending
  Matrix vectors;              // columns match values
};

// Cyclic Jacobi rotations with a fixed sweep order, iterated until the
// off-diagonal Frobenius norm drops below 1e-14 * ||A||_F.
inline SymEigen eig_sym(const Matrix& a_in) {
  const std::size_t n = a_in.rows();
  if (n != a_in.cols()) throw DimensionMismatch("eig_sym needs square input");
  if (!a_in.is_symmetric(kSymmetryTol))
    throw NonSymmetric("eig_sym input not symmetric within 1e-12");
  Matrix a = a_in.symmetrized();
  Matrix q = Matrix::identity(n);
  const double norm_a = a.frobenius_norm();
  const double threshold = 1e-14 * norm_a;

  auto offdiag = [&a, n]() {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  for (int sweep = 0; sweep < 100 && offdiag() > threshold; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t qq = p + 1; qq < n; ++qq) {
        const double apq = a(p, qq);
        if (apq == 0.0) continue;
        const double theta = (a(qq, qq) - a(p, p)) / (2.0 * apq);
        double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t i = 0; i < n; ++i) {
          const double aip = a(i, p), aiq = a(i, qq);
          a(i, p) = c * aip - s * aiq;
          a(i, qq) = s * aip + c * aiq;
        }
        for (std::size_t j = 0; j < n; ++j) {
          const double apj = a(p, j), aqj = a(qq, j);
          a(p, j) = c * apj - s * aqj;
          a(qq, j) = s * apj + c * aqj;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double qip = q(i, p), qiq = q(i, qq);
          q(i, p) = c * qip - s * qiq;
          q(i, qq) = s * qip + c * qiq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&a](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
  SymEigen out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = a(order[j], order[j]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = q(i, order[j]);
  }
  return out;
}

inline std::vector<double> eigvals_sym(const Matrix& a) {
  return eig_sym(a).values;
}

// Eigenvalues of I + A from eigenvalues of A.
inline std::vector<double> shift_identity_eigs(std::vector<double> eigs) {
  for (double& v : eigs) v += 1.0;
  return eigs;
}

// det(A + B C^T) via det(I_m + C^T A^-1 B) * det(A). The d x d sum is never
// formed.
inline double gmdl_det(const PosDefMatrix& a, const Matrix& b,
                       const Matrix& c) {
  if (b.rows() != a.dim() || c.rows() != a.dim() || b.cols() != c.cols())
    throw DimensionMismatch("gmdl_det operand shapes");
  const std::size_t m = b.cols();
  const Matrix inner = c.transposed() * a.solve(b);
  Matrix id_plus(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      id_plus(i, j) = (i == j ? 1.0 : 0.0) + inner(i, j);
  return detail::lu_det(id_plus) * a.det();
}

// ||x||^2_M with M = ainv, i.e. x^T ainv x.
inline double mahalanobis_sq(const Vector& x, const PosDefMatrix& ainv) {
  if (x.size() != ainv.dim()) throw DimensionMismatch("mahalanobis_sq length");
  return dot(x, ainv.entries() * x);
}

inline PosDefMatrix sym_inverse(const PosDefMatrix& a) {
  Matrix inv = a.solve(Matrix::identity(a.dim()));
  return PosDefMatrix(inv.symmetrized());
}

// The ordered context matrix X_t of one round: columns indexed by strictly
// increasing arm ids, each column norm-capped.
struct RoundContexts {
  std::size_t dim = 0;
  std::vector<int> arm_ids;
  std::vector<Vector> columns;

  RoundContexts(std::size_t d, std::vector<int> ids, std::vector<Vector> cols,
                double max_context_norm = 1.0)
      : dim(d), arm_ids(std::move(ids)), columns(std::move(cols)) {
    if (columns.empty()) throw EmptySuperArm("round has no played arms");
    if (arm_ids.size() != columns.size())
      throw InvalidContexts("arm_ids/columns length mismatch");
    for (std::size_t i = 1; i < arm_ids.size(); ++i)
      if (arm_ids[i] <= arm_ids[i - 1])
        throw InvalidContexts("arm_ids must be strictly increasing");
    for (const Vector& x : columns) {
      if (x.size() != dim) throw DimensionMismatch("context column dimension");
      if (norm2(x) > max_context_norm + 1e-12)
        throw InvalidContexts("context norm exceeds max_context_norm");
    }
  }

  std::size_t size() const { return columns.size(); }

  Matrix as_matrix() const { return Matrix::from_columns(columns); }
};

}  // namespace c2ucb
