#ifndef PELLABEL_POLY_HPP
#define PELLABEL_POLY_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <utility>
#include <vector>

#include "pellabel/errors.hpp"
#include "pellabel/linalg.hpp"

namespace pellabel {

/// Coefficients below this magnitude are treated as zero when trimming the
/// leading coefficient, so roundoff never inflates the degree.
inline constexpr double kDeflationThreshold = 1e-300;

/// Dense univariate polynomial with real coefficients stored in ascending
/// degree order. Value type: all operations return fresh polynomials.
template <typename Real>
class Poly {
 public:
  Poly() : c_{Real(0)} {}
  Poly(std::initializer_list<Real> coeffs) : c_(coeffs) { normalize(); }
  explicit Poly(std::vector<Real> coeffs) : c_(std::move(coeffs)) { normalize(); }

  static Poly constant(Real v) { return Poly(std::vector<Real>{v}); }
  static Poly identity() { return Poly(std::vector<Real>{Real(0), Real(1)}); }

  /// Monic polynomial with exactly the given real roots (with multiplicity).
  static Poly from_roots(const std::vector<Real>& roots) {
    std::vector<Real> c{Real(1)};
    for (Real r : roots) {
      c.push_back(Real(0));
      for (size_t i = c.size() - 1; i > 0; --i) c[i] = c[i - 1] - r * c[i];
      c[0] *= -r;
    }
    return Poly(std::move(c));
  }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.size() == 1 && c_[0] == Real(0); }
  const std::vector<Real>& coeffs() const { return c_; }
  Real lead() const { return c_.back(); }

  /// Coefficient of x^i; zero beyond the degree.
  Real operator[](int i) const {
    return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[static_cast<size_t>(i)] : Real(0);
  }

  /// Horner evaluation.
  Real operator()(Real x) const {
    Real y = c_.back();
    for (size_t i = c_.size() - 1; i-- > 0;) y = y * x + c_[i];
    return y;
  }

  Poly derivative() const {
    if (c_.size() == 1) return Poly();
    std::vector<Real> d(c_.size() - 1);
    for (size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * Real(i);
    return Poly(std::move(d));
  }

  /// p(-x).
  Poly reflected() const {
    std::vector<Real> d(c_);
    for (size_t i = 1; i < d.size(); i += 2) d[i] = -d[i];
    return Poly(std::move(d));
  }

  /// Composition with an affine map: p(alpha * x + beta).
  Poly compose_affine(Real alpha, Real beta) const {
    Poly result = Poly::constant(c_.back());
    Poly arg({beta, alpha});
    for (size_t i = c_.size() - 1; i-- > 0;) result = result * arg + Poly::constant(c_[i]);
    return result;
  }

  Poly operator-() const {
    std::vector<Real> d(c_);
    for (Real& v : d) v = -v;
    return Poly(std::move(d));
  }

  friend Poly operator+(const Poly& p, const Poly& q) {
    std::vector<Real> c(std::max(p.c_.size(), q.c_.size()), Real(0));
    for (size_t i = 0; i < p.c_.size(); ++i) c[i] += p.c_[i];
    for (size_t i = 0; i < q.c_.size(); ++i) c[i] += q.c_[i];
    return Poly(std::move(c));
  }

  friend Poly operator-(const Poly& p, const Poly& q) {
    std::vector<Real> c(std::max(p.c_.size(), q.c_.size()), Real(0));
    for (size_t i = 0; i < p.c_.size(); ++i) c[i] += p.c_[i];
    for (size_t i = 0; i < q.c_.size(); ++i) c[i] -= q.c_[i];
    return Poly(std::move(c));
  }

  friend Poly operator*(const Poly& p, const Poly& q) {
    if (p.is_zero() || q.is_zero()) return Poly();
    std::vector<Real> c(p.c_.size() + q.c_.size() - 1, Real(0));
    for (size_t i = 0; i < p.c_.size(); ++i)
      for (size_t j = 0; j < q.c_.size(); ++j) c[i + j] += p.c_[i] * q.c_[j];
    return Poly(std::move(c));
  }

  friend Poly operator*(const Poly& p, Real s) {
    std::vector<Real> c(p.c_);
    for (Real& v : c) v *= s;
    return Poly(std::move(c));
  }
  friend Poly operator*(Real s, const Poly& p) { return p * s; }

 private:
  void normalize() {
    if (c_.empty()) c_.push_back(Real(0));
    while (c_.size() > 1 && std::abs(c_.back()) <= Real(kDeflationThreshold)) c_.pop_back();
  }

  std::vector<Real> c_;
};

/// Quotient and remainder with degree(rem) < degree(q). Throws on a zero divisor.
template <typename Real>
std::pair<Poly<Real>, Poly<Real>> divrem(const Poly<Real>& p, const Poly<Real>& q) {
  if (q.is_zero()) throw validation_error("polynomial division by zero");
  if (p.degree() < q.degree()) return {Poly<Real>(), p};
  std::vector<Real> rem(p.coeffs());
  const int dq = q.degree();
  std::vector<Real> quot(static_cast<size_t>(p.degree() - dq) + 1, Real(0));
  for (int k = p.degree() - dq; k >= 0; --k) {
    Real f = rem[static_cast<size_t>(k + dq)] / q.lead();
    quot[static_cast<size_t>(k)] = f;
    for (int j = 0; j <= dq; ++j) rem[static_cast<size_t>(k + j)] -= f * q[j];
  }
  rem.resize(static_cast<size_t>(std::max(dq, 1)));
  return {Poly<Real>(std::move(quot)), Poly<Real>(std::move(rem))};
}

struct RootScanOptions {
  double tol = 1e-13;       // bisection stops at width * tol
  int grid_per_degree = 64; // sign-grid density
};

/// Simple real roots of p inside [lo, hi], ascending, found by sign-change
/// bracketing on a dense grid followed by bisection.
template <typename Real>
std::vector<Real> roots_in_interval(const Poly<Real>& p, Real lo, Real hi,
                                    RootScanOptions opt = {}) {
  if (!(lo < hi)) throw validation_error("roots_in_interval: lo must be below hi");
  if (p.is_zero()) throw validation_error("roots_in_interval: zero polynomial");
  const int n = std::max(64, opt.grid_per_degree * std::max(1, p.degree()));
  const Real width = hi - lo;
  const Real target = width * Real(opt.tol);
  std::vector<Real> roots;
  Real x_prev = lo;
  Real f_prev = p(lo);
  for (int k = 1; k <= n; ++k) {
    Real x = lo + width * Real(k) / Real(n);
    if (k == n) x = hi;
    Real f = p(x);
    if (f_prev == Real(0)) {
      if (roots.empty() || x_prev - roots.back() > target) roots.push_back(x_prev);
    } else if (f != Real(0) && ((f_prev < 0) != (f < 0))) {
      Real a = x_prev, b = x, fa = f_prev;
      int iter = 0;
      while (b - a > target) {
        if (++iter > 200)
          throw solver_error("bisection_stall", "root bracket failed to shrink", double(b - a), iter);
        Real m = (a + b) / 2;
        if (m <= a || m >= b) break;  // hit floating-point resolution
        Real fm = p(m);
        if (fm == Real(0)) {
          a = b = m;
          break;
        }
        if ((fa < 0) != (fm < 0)) {
          b = m;
        } else {
          a = m;
          fa = fm;
        }
      }
      roots.push_back((a + b) / 2);
    }
    x_prev = x;
    f_prev = f;
  }
  if (f_prev == Real(0)) {
    if (roots.empty() || hi - roots.back() > target) roots.push_back(hi);
  }
  return roots;
}

template <typename Real>
struct FitResult {
  Poly<Real> p;
  Real residual;  // max |p(x_i) - y_i| over the samples
};

namespace detail {

template <typename Work>
FitResult<Work> fit_impl(const std::vector<std::pair<Work, Work>>& samples, int degree) {
  const int n = degree + 1;
  const int m = static_cast<int>(samples.size());
  Work lo = samples[0].first, hi = samples[0].first;
  for (const auto& s : samples) {
    lo = std::min(lo, s.first);
    hi = std::max(hi, s.first);
  }
  if (!(hi > lo)) throw linalg_error("fit: samples do not span an interval");
  const Work mid = (lo + hi) / 2, half = (hi - lo) / 2;

  linalg::Mat<Work> a(m, n);
  std::vector<Work> b(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) {
    const Work t = (samples[static_cast<size_t>(i)].first - mid) / half;
    Work tk_prev = Work(1), tk = t;
    a(i, 0) = Work(1);
    if (n > 1) a(i, 1) = t;
    for (int k = 2; k < n; ++k) {
      Work next = 2 * t * tk - tk_prev;
      a(i, k) = next;
      tk_prev = tk;
      tk = next;
    }
    b[static_cast<size_t>(i)] = samples[static_cast<size_t>(i)].second;
  }
  std::vector<Work> alpha = linalg::lstsq(a, b);

  // Residual in the Chebyshev representation (well conditioned to evaluate).
  Work residual = 0;
  for (int i = 0; i < m; ++i) {
    const Work t = (samples[static_cast<size_t>(i)].first - mid) / half;
    Work tk_prev = Work(1), tk = t, acc = alpha[0];
    if (n > 1) acc += alpha[1] * t;
    for (int k = 2; k < n; ++k) {
      Work next = 2 * t * tk - tk_prev;
      acc += alpha[static_cast<size_t>(k)] * next;
      tk_prev = tk;
      tk = next;
    }
    residual = std::max(residual, std::abs(acc - samples[static_cast<size_t>(i)].second));
  }

  // Convert sum alpha_k T_k((x - mid)/half) to monomial coefficients.
  Poly<Work> tk_prev_p = Poly<Work>::constant(Work(1));
  Poly<Work> tmap({-mid / half, Work(1) / half});
  Poly<Work> tk_p = tmap;
  Poly<Work> result = Poly<Work>::constant(alpha[0]);
  if (n > 1) result = result + alpha[1] * tk_p;
  for (int k = 2; k < n; ++k) {
    Poly<Work> next = Work(2) * (tmap * tk_p) - tk_prev_p;
    result = result + alpha[static_cast<size_t>(k)] * next;
    tk_prev_p = tk_p;
    tk_p = next;
  }
  return {result, residual};
}

}  // namespace detail

/// Least-squares polynomial fit of the given degree, computed in a Chebyshev
/// basis of the samples' enclosing interval and converted back to monomial
/// coefficients. The conversion to the monomial basis loses roughly
/// (1+sqrt 2)^degree in absolute accuracy, so the whole fit runs in extended
/// precision when Real is binary64. Throws on rank deficiency.
template <typename Real>
FitResult<Real> fit(const std::vector<std::pair<Real, Real>>& samples, int degree) {
  if (degree < 0) throw validation_error("fit: negative degree");
  if (static_cast<int>(samples.size()) < degree + 1)
    throw validation_error("fit: needs at least degree+1 samples");
  using Work = std::conditional_t<std::is_same_v<Real, double>, long double, Real>;
  if constexpr (std::is_same_v<Work, Real>) {
    return detail::fit_impl<Real>(samples, degree);
  } else {
    std::vector<std::pair<Work, Work>> wide;
    wide.reserve(samples.size());
    for (const auto& s : samples) wide.emplace_back(Work(s.first), Work(s.second));
    FitResult<Work> res = detail::fit_impl<Work>(wide, degree);
    std::vector<Real> c(res.p.coeffs().begin(), res.p.coeffs().end());
    return {Poly<Real>(std::move(c)), Real(res.residual)};
  }
}

}  // namespace pellabel

#endif
