#ifndef PELLABEL_QUADRATURE_HPP
#define PELLABEL_QUADRATURE_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <unordered_map>
#include <vector>

#include "pellabel/errors.hpp"
#include "pellabel/poly.hpp"

// Integrals of numerator(x)/sqrt(|D(x)|) between branch points of D.
// Where both endpoints are simple roots of D, the cosine substitution turns
// the inverse-square-root singularities into the Gauss-Chebyshev weight;
// where only one endpoint is singular, x = lo + t^2 regularizes it and
// Gauss-Legendre takes over. Both rules double their node count until two
// successive values agree.
//
// Near-degenerate curves put other roots of D arbitrarily close to the
// integration interval, which stalls both Gauss rules and makes naive
// |x - root| evaluation cancel catastrophically. When the caller supplies
// the root list, distances are therefore formed from exact offsets, and a
// tanh-sinh rule (whose cost grows only logarithmically in the root
// proximity) picks up whatever the primary ladder cannot finish.

namespace pellabel {

enum class IntervalKind { band, gap, half_gap };

/// An integration interval [lo, hi] whose endpoints are simple roots of the
/// divisor polynomial D; weight_poly is D with the factors (x-lo)(x-hi)
/// divided out, so it has no roots inside [lo, hi]. divisor_roots, when
/// known, enables the robust rooted evaluation paths.
template <typename Real>
struct SingularInterval {
  Real lo;
  Real hi;
  Poly<Real> weight_poly;
  IntervalKind kind;
  std::vector<Real> divisor_roots;  // all roots of D; empty when unknown

  /// Deflates (x-lo)(x-hi) out of D. lo and hi must be roots of D.
  static SingularInterval from_divisor(const Poly<Real>& d, Real lo, Real hi,
                                       IntervalKind kind) {
    if (!(lo < hi)) throw validation_error("singular interval needs lo < hi");
    Poly<Real> w = deflate_root(d, lo);
    w = deflate_root(w, hi);
    return SingularInterval{lo, hi, std::move(w), kind, {}};
  }

  /// Exact construction from the known root list of D.
  static SingularInterval from_roots(const std::vector<Real>& roots, Real lo, Real hi,
                                     IntervalKind kind) {
    if (!(lo < hi)) throw validation_error("singular interval needs lo < hi");
    std::vector<Real> others;
    bool saw_lo = false, saw_hi = false;
    for (Real e : roots) {
      if (e == lo && !saw_lo) {
        saw_lo = true;
      } else if (e == hi && !saw_hi) {
        saw_hi = true;
      } else {
        others.push_back(e);
      }
    }
    if (!saw_lo || !saw_hi)
      throw validation_error("interval endpoints must be roots of the divisor");
    return SingularInterval{lo, hi, Poly<Real>::from_roots(others), kind, roots};
  }

  static Poly<Real> deflate_root(const Poly<Real>& p, Real root) {
    // Synthetic division by (x - root); the remainder must be negligible.
    const auto& c = p.coeffs();
    const size_t n = c.size();
    if (n < 2) throw validation_error("cannot deflate a constant polynomial");
    std::vector<Real> q(n - 1);
    Real carry = c[n - 1];
    for (size_t i = n - 1; i-- > 0;) {
      q[i] = carry;
      carry = c[i] + root * carry;
    }
    Real scale = 0;
    for (Real v : c) scale = std::max(scale, std::abs(v));
    Real local = std::max(Real(1), std::abs(root));
    Real bound = scale * std::pow(local, Real(p.degree()));
    if (std::abs(carry) > bound * Real(1e-9))
      throw validation_error("deflation point is not a root of the divisor polynomial");
    return Poly<Real>(std::move(q));
  }
};

template <typename Real>
struct QuadResult {
  Real value = 0;
  bool converged = false;
  Real achieved_tol = std::numeric_limits<Real>::infinity();
  int nodes = 0;
};

struct QuadOptions {
  int initial_nodes = 16;
  double rel_tol = 1e-12;
  int max_nodes = 1 << 16;
};

namespace detail {

template <typename Real>
struct GaussLegendreRule {
  std::vector<Real> nodes;  // on (-1, 1)
  std::vector<Real> weights;
};

/// Gauss-Legendre nodes/weights by Newton iteration on the Legendre
/// recurrence; O(n^2), so the ladder above caps its use. Cached per thread.
template <typename Real>
const GaussLegendreRule<Real>& gauss_legendre(int n) {
  thread_local std::unordered_map<int, GaussLegendreRule<Real>> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  GaussLegendreRule<Real> rule;
  rule.nodes.resize(static_cast<size_t>(n));
  rule.weights.resize(static_cast<size_t>(n));
  const Real pi = std::numbers::pi_v<Real>;
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    Real x = std::cos(pi * (Real(i) + Real(0.75)) / (Real(n) + Real(0.5)));
    Real dp = 0;
    for (int pass = 0; pass < 100; ++pass) {
      Real p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        Real p2 = ((2 * Real(k) - 1) * x * p1 - (Real(k) - 1) * p0) / Real(k);
        p0 = p1;
        p1 = p2;
      }
      dp = Real(n) * (x * p1 - p0) / (x * x - 1);
      Real dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) <= std::numeric_limits<Real>::epsilon() * 4) break;
    }
    Real p0 = 1, p1 = x;
    for (int k = 2; k <= n; ++k) {
      Real p2 = ((2 * Real(k) - 1) * x * p1 - (Real(k) - 1) * p0) / Real(k);
      p0 = p1;
      p1 = p2;
    }
    dp = Real(n) * (x * p1 - p0) / (x * x - 1);
    Real w = Real(2) / ((1 - x * x) * dp * dp);
    rule.nodes[static_cast<size_t>(i)] = -x;
    rule.weights[static_cast<size_t>(i)] = w;
    rule.nodes[static_cast<size_t>(n - 1 - i)] = x;
    rule.weights[static_cast<size_t>(n - 1 - i)] = w;
  }
  auto [pos, inserted] = cache.emplace(n, std::move(rule));
  (void)inserted;
  return pos->second;
}

/// Compensated accumulator: keeps the summation roundoff at a few eps of the
/// term magnitude sum regardless of the node count, which lets near-zero
/// integrals (vanishing gap periods) pass the convergence floor.
template <typename Real>
struct KahanSum {
  Real sum = 0;
  Real carry = 0;
  Real l1 = 0;

  void add(Real term) {
    l1 += std::abs(term);
    const Real y = term - carry;
    const Real t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

/// Convergence test for the doubling ladder: relative agreement, with an
/// absolute floor tied to the roundoff level of the quadrature sum.
template <typename Real>
bool agreed(Real v_new, Real v_old, Real l1, double rel_tol, Real* achieved) {
  const Real diff = std::abs(v_new - v_old);
  const Real floor_ = Real(64) * std::numeric_limits<Real>::epsilon() * l1;
  *achieved = diff / std::max(std::abs(v_new), Real(std::numeric_limits<Real>::min()));
  return diff <= std::max(Real(rel_tol) * std::abs(v_new), floor_);
}

/// sqrt of the product of |x - e| over the divisor roots, with each distance
/// assembled from an exact endpoint offset plus the node's distance to that
/// endpoint. d_lo and d_hi are the (nonnegative) distances of x to lo and hi.
template <typename Real>
Real rooted_weight_sqrt(const std::vector<Real>& roots, Real lo, Real hi, Real d_lo, Real d_hi) {
  Real prod = 1;
  bool saw_lo = false, saw_hi = false;
  for (Real e : roots) {
    Real dist;
    if (e == lo && !saw_lo) {
      saw_lo = true;
      dist = d_lo;
    } else if (e == hi && !saw_hi) {
      saw_hi = true;
      dist = d_hi;
    } else if (e <= lo) {
      dist = (lo - e) + d_lo;
    } else {
      dist = (e - hi) + d_hi;  // roots never sit strictly inside the interval
    }
    prod *= dist;
  }
  return std::sqrt(std::abs(prod));
}

/// Tanh-sinh rule for numerator(x)/sqrt(prod |x - e|) over [lo, hi], with lo
/// and/or hi allowed to be roots. Node distances to the endpoints are carried
/// in closed form, so clustering never cancels. The level ladder reuses the
/// same convergence test as the Gauss rules.
template <typename Real>
QuadResult<Real> tanh_sinh_rooted(const Poly<Real>& numerator, const std::vector<Real>& roots,
                                  Real lo, Real hi, double rel_tol) {
  const Real pi_half = std::numbers::pi_v<Real> / 2;
  const Real rho = (hi - lo) / 2, mid = (lo + hi) / 2;
  QuadResult<Real> out;
  Real prev = std::numeric_limits<Real>::quiet_NaN();
  for (Real h = Real(0.5); h >= Real(1.0 / 4096); h /= 2) {
    KahanSum<Real> acc;
    int nodes = 0;
    for (int side = 0; side < 2; ++side) {
      // side 0: k = 0, 1, 2, ... (u >= 0); side 1: k = -1, -2, ... (u < 0)
      int negligible = 0;
      for (int k = side == 0 ? 0 : 1;; ++k) {
        const Real u = (side == 0 ? Real(k) : Real(-k)) * h;
        if (std::abs(u) > Real(7)) break;
        const Real w_arg = pi_half * std::sinh(u);
        const Real aw = std::abs(w_arg);
        const Real em = std::exp(-2 * aw);
        const Real d_far = 2 * rho * em / (1 + em);      // distance to the endpoint u runs toward
        const Real d_near = 2 * rho / (1 + em);          // distance to the other endpoint
        const Real sech2 = 4 * em / ((1 + em) * (1 + em));
        const Real weight = h * rho * pi_half * std::cosh(u) * sech2;
        if (!(weight > 0) || !(d_far > 0)) break;
        const Real d_lo = w_arg >= 0 ? d_near : d_far;
        const Real d_hi = w_arg >= 0 ? d_far : d_near;
        const Real x = mid + (w_arg >= 0 ? rho - d_hi : d_lo - rho);
        const Real term =
            weight * numerator(x) / rooted_weight_sqrt(roots, lo, hi, d_lo, d_hi);
        acc.add(term);
        ++nodes;
        if (std::abs(term) <
            std::numeric_limits<Real>::epsilon() * Real(0.01) * (acc.l1 + Real(1e-300))) {
          if (++negligible >= 3) break;
        } else {
          negligible = 0;
        }
      }
    }
    out.value = acc.sum;
    out.nodes = nodes;
    if (!std::isnan(prev) && agreed(acc.sum, prev, acc.l1, rel_tol, &out.achieved_tol)) {
      out.converged = true;
      return out;
    }
    prev = acc.sum;
  }
  return out;
}

}  // namespace detail

/// Integral of numerator(x)/sqrt(|D(x)|) over an interval whose two endpoints
/// are simple roots of D. Substituting x = m + rho*cos(theta) absorbs the
/// endpoint singularities into the Gauss-Chebyshev weight:
///   (pi/N) * sum numerator(x_k)/sqrt(|weight_poly(x_k)|),
///   x_k = m + rho*cos((2k-1)pi/2N).
/// With a known root list the weight uses exact distances and a tanh-sinh
/// fallback finishes geometries the ladder cannot.
template <typename Real>
QuadResult<Real> integrate_endpoint_singular(const Poly<Real>& numerator,
                                             const SingularInterval<Real>& iv,
                                             QuadOptions opt = {}) {
  if (iv.kind == IntervalKind::half_gap)
    throw validation_error("endpoint-singular rule requires band or gap intervals");
  const Real pi = std::numbers::pi_v<Real>;
  const Real m = (iv.lo + iv.hi) / 2;
  const Real rho = (iv.hi - iv.lo) / 2;
  const bool rooted = !iv.divisor_roots.empty();
  int n = std::max(8, opt.initial_nodes);
  QuadResult<Real> out;
  Real prev = std::numeric_limits<Real>::quiet_NaN();
  while (n <= opt.max_nodes) {
    detail::KahanSum<Real> acc;
    for (int k = 1; k <= n; ++k) {
      const Real theta = (2 * Real(k) - 1) * pi / (2 * Real(n));
      const Real x = m + rho * std::cos(theta);
      Real w_sqrt;
      if (rooted) {
        const Real ch = std::cos(theta / 2), sh = std::sin(theta / 2);
        // x - lo = 2 rho cos^2(theta/2), hi - x = 2 rho sin^2(theta/2): the
        // interval's own root factors cancel against the Chebyshev weight, so
        // only the outside roots contribute here.
        w_sqrt = detail::rooted_weight_sqrt(iv.divisor_roots, iv.lo, iv.hi,
                                            2 * rho * ch * ch, 2 * rho * sh * sh) /
                 (rho * std::sin(theta));
      } else {
        w_sqrt = std::sqrt(std::abs(iv.weight_poly(x)));
      }
      acc.add(numerator(x) / w_sqrt);
    }
    const Real value = pi / Real(n) * acc.sum;
    out.value = value;
    out.nodes = n;
    if (!std::isnan(prev) &&
        detail::agreed(value, prev, pi / Real(n) * acc.l1, opt.rel_tol, &out.achieved_tol)) {
      out.converged = true;
      return out;
    }
    prev = value;
    n *= 2;
  }
  if (rooted) {
    QuadResult<Real> ts =
        detail::tanh_sinh_rooted(numerator, iv.divisor_roots, iv.lo, iv.hi, opt.rel_tol);
    if (ts.converged) return ts;
  }
  return out;  // flagged estimate: converged stays false
}

namespace detail {

/// Shared core of the half-singular rules: Gauss-Legendre on the
/// t^2-regularized integrand, with an optional rooted weight path.
/// sign = +1 integrates from the singular endpoint rightward (x = s + t^2),
/// sign = -1 leftward (x = s - t^2).
template <typename Real>
QuadResult<Real> half_singular_core(const Poly<Real>& numerator, const Poly<Real>& w,
                                    const std::vector<Real>* roots, Real s, Real other, int sign,
                                    QuadOptions opt) {
  const Real len = sign > 0 ? other - s : s - other;
  const Real t_end = std::sqrt(len);
  const Real lo = sign > 0 ? s : other, hi = sign > 0 ? other : s;
  // Node generation is O(n^2); past this the tanh-sinh fallback is cheaper.
  const int gl_cap = std::min(opt.max_nodes, 8192);
  int n = std::max(8, opt.initial_nodes);
  QuadResult<Real> out;
  Real prev = std::numeric_limits<Real>::quiet_NaN();
  while (n <= gl_cap) {
    const auto& rule = gauss_legendre<Real>(n);
    KahanSum<Real> acc;
    for (int k = 0; k < n; ++k) {
      const Real t = t_end * (rule.nodes[static_cast<size_t>(k)] + 1) / 2;
      const Real x = s + Real(sign) * t * t;
      Real w_sqrt;
      if (roots != nullptr) {
        // Distance to the singular endpoint is exactly t^2; to the regular
        // endpoint it is len - t^2 = (t_end - t)(t_end + t), cancellation-free.
        const Real d_sing = t * t;
        const Real d_reg = (t_end - t) * (t_end + t);
        const Real d_lo = sign > 0 ? d_sing : d_reg;
        const Real d_hi = sign > 0 ? d_reg : d_sing;
        // The regular endpoint is not a root, so its unit factor is divided
        // back out; the singular endpoint's sqrt(t^2) = t cancels explicitly.
        w_sqrt = rooted_weight_sqrt(*roots, lo, hi, d_lo, d_hi) / t;
      } else {
        w_sqrt = std::sqrt(std::abs(w(x)));
      }
      acc.add(rule.weights[static_cast<size_t>(k)] * 2 * numerator(x) / w_sqrt);
    }
    const Real value = t_end / 2 * acc.sum;
    out.value = value;
    out.nodes = n;
    if (!std::isnan(prev) &&
        agreed(value, prev, t_end / 2 * acc.l1, opt.rel_tol, &out.achieved_tol)) {
      out.converged = true;
      return out;
    }
    prev = value;
    n *= 2;
  }
  if (roots != nullptr) {
    QuadResult<Real> ts = tanh_sinh_rooted(numerator, *roots, lo, hi, opt.rel_tol);
    if (ts.converged) return ts;
  }
  return out;
}

}  // namespace detail

/// Integral of numerator(x)/sqrt(|D(x)|) over [lo, hi] where lo is a simple
/// root of D and D has no roots in (lo, hi]. The substitution x = lo + t^2
/// regularizes the integrand; Gauss-Legendre with node doubling finishes it.
template <typename Real>
QuadResult<Real> integrate_half_singular(const Poly<Real>& numerator, Real lo, Real hi,
                                         const Poly<Real>& d, QuadOptions opt = {}) {
  if (!(lo < hi)) throw validation_error("half-singular integral needs lo < hi");
  Poly<Real> w = SingularInterval<Real>::deflate_root(d, lo);
  const std::vector<Real>* no_roots = nullptr;
  return detail::half_singular_core(numerator, w, no_roots, lo, hi, +1, opt);
}

/// Mirror image of integrate_half_singular: the singular endpoint is hi.
template <typename Real>
QuadResult<Real> integrate_half_singular_hi(const Poly<Real>& numerator, Real lo, Real hi,
                                            const Poly<Real>& d, QuadOptions opt = {}) {
  if (!(lo < hi)) throw validation_error("half-singular integral needs lo < hi");
  Poly<Real> w = SingularInterval<Real>::deflate_root(d, hi);
  const std::vector<Real>* no_roots = nullptr;
  return detail::half_singular_core(numerator, w, no_roots, hi, lo, -1, opt);
}

/// Rooted variants: the root list of D enables exact-distance weights and the
/// tanh-sinh fallback. The singular endpoint must appear among the roots; the
/// regular endpoint must not.
template <typename Real>
QuadResult<Real> integrate_half_singular(const Poly<Real>& numerator, Real lo, Real hi,
                                         const std::vector<Real>& divisor_roots,
                                         QuadOptions opt = {}) {
  if (!(lo < hi)) throw validation_error("half-singular integral needs lo < hi");
  return detail::half_singular_core(numerator, Poly<Real>(), &divisor_roots, lo, hi, +1, opt);
}

template <typename Real>
QuadResult<Real> integrate_half_singular_hi(const Poly<Real>& numerator, Real lo, Real hi,
                                            const std::vector<Real>& divisor_roots,
                                            QuadOptions opt = {}) {
  if (!(lo < hi)) throw validation_error("half-singular integral needs lo < hi");
  return detail::half_singular_core(numerator, Poly<Real>(), &divisor_roots, hi, lo, -1, opt);
}

}  // namespace pellabel

#endif
