#ifndef PELLABEL_LINALG_HPP
#define PELLABEL_LINALG_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "pellabel/errors.hpp"

// Small dense linear algebra used by the canonical-polynomial system,
// the Chebyshev least-squares fit and the inverse solver's Newton step.
// Sizes here are tiny (a few dozen rows at most), so plain O(n^3)
// routines with partial pivoting are all we need.

namespace pellabel {
namespace linalg {

template <typename Real>
class Mat {
 public:
  Mat() : rows_(0), cols_(0) {}
  Mat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, Real(0)) {}

  Real& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
  const Real& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

 private:
  int rows_, cols_;
  std::vector<Real> a_;
};

/// LU factorization with partial pivoting, kept for repeated solves.
template <typename Real>
struct Lu {
  Mat<Real> lu;
  std::vector<int> piv;
  bool singular = false;
};

template <typename Real>
Lu<Real> lu_factor(Mat<Real> m) {
  const int n = m.rows();
  Lu<Real> f{std::move(m), std::vector<int>(n), false};
  for (int i = 0; i < n; ++i) f.piv[i] = i;
  for (int k = 0; k < n; ++k) {
    int p = k;
    Real best = std::abs(f.lu(k, k));
    for (int i = k + 1; i < n; ++i) {
      Real v = std::abs(f.lu(i, k));
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (!(best > Real(0))) {
      f.singular = true;
      return f;
    }
    if (p != k) {
      std::swap(f.piv[k], f.piv[p]);
      for (int j = 0; j < n; ++j) std::swap(f.lu(k, j), f.lu(p, j));
    }
    for (int i = k + 1; i < n; ++i) {
      f.lu(i, k) /= f.lu(k, k);
      Real lik = f.lu(i, k);
      for (int j = k + 1; j < n; ++j) f.lu(i, j) -= lik * f.lu(k, j);
    }
  }
  return f;
}

template <typename Real>
std::vector<Real> lu_solve(const Lu<Real>& f, const std::vector<Real>& b) {
  const int n = f.lu.rows();
  std::vector<Real> x(n);
  for (int i = 0; i < n; ++i) x[i] = b[f.piv[i]];
  for (int i = 1; i < n; ++i) {
    Real s = x[i];
    for (int j = 0; j < i; ++j) s -= f.lu(i, j) * x[j];
    x[i] = s;
  }
  for (int i = n - 1; i >= 0; --i) {
    Real s = x[i];
    for (int j = i + 1; j < n; ++j) s -= f.lu(i, j) * x[j];
    x[i] = s / f.lu(i, i);
  }
  return x;
}

/// Solve M x = b by partial-pivot elimination. Throws on a singular matrix.
template <typename Real>
std::vector<Real> solve(const Mat<Real>& m, const std::vector<Real>& b) {
  Lu<Real> f = lu_factor(m);
  if (f.singular) throw linalg_error("singular linear system");
  return lu_solve(f, b);
}

template <typename Real>
Real norm_1(const Mat<Real>& m) {
  Real best = 0;
  for (int j = 0; j < m.cols(); ++j) {
    Real s = 0;
    for (int i = 0; i < m.rows(); ++i) s += std::abs(m(i, j));
    best = std::max(best, s);
  }
  return best;
}

/// 1-norm condition number via the explicit inverse; fine at these sizes.
/// Returns +inf for a singular matrix.
template <typename Real>
Real condition_1(const Mat<Real>& m) {
  const int n = m.rows();
  if (n == 0) return Real(1);
  Lu<Real> f = lu_factor(m);
  if (f.singular) return std::numeric_limits<Real>::infinity();
  Real inv_norm = 0;
  std::vector<Real> e(n, Real(0));
  for (int j = 0; j < n; ++j) {
    e[j] = Real(1);
    std::vector<Real> col = lu_solve(f, e);
    e[j] = Real(0);
    Real s = 0;
    for (Real v : col) s += std::abs(v);
    inv_norm = std::max(inv_norm, s);
  }
  return norm_1(m) * inv_norm;
}

/// Least squares min ||A x - b||_2 by Householder QR (A is m x n, m >= n).
/// Throws on rank deficiency.
template <typename Real>
std::vector<Real> lstsq(Mat<Real> a, std::vector<Real> b) {
  const int m = a.rows(), n = a.cols();
  if (m < n) throw linalg_error("least squares needs at least as many rows as columns");
  std::vector<Real> rdiag(n);
  for (int k = 0; k < n; ++k) {
    Real norm = 0;
    for (int i = k; i < m; ++i) norm += a(i, k) * a(i, k);
    norm = std::sqrt(norm);
    if (!(norm > Real(0))) throw linalg_error("rank-deficient least-squares system");
    // Reflector with the sign chosen so the pivot entry never cancels.
    if (a(k, k) < 0) norm = -norm;
    for (int i = k; i < m; ++i) a(i, k) /= norm;
    a(k, k) += Real(1);
    for (int j = k + 1; j < n; ++j) {
      Real s = 0;
      for (int i = k; i < m; ++i) s += a(i, k) * a(i, j);
      s = -s / a(k, k);
      for (int i = k; i < m; ++i) a(i, j) += s * a(i, k);
    }
    Real s = 0;
    for (int i = k; i < m; ++i) s += a(i, k) * b[i];
    s = -s / a(k, k);
    for (int i = k; i < m; ++i) b[i] += s * a(i, k);
    rdiag[k] = -norm;
  }
  std::vector<Real> x(n);
  for (int i = n - 1; i >= 0; --i) {
    Real s = b[i];
    for (int j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
    if (rdiag[i] == Real(0)) throw linalg_error("rank-deficient least-squares system");
    x[i] = s / rdiag[i];
  }
  return x;
}

}  // namespace linalg
}  // namespace pellabel

#endif
