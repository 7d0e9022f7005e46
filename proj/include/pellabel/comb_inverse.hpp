#ifndef PELLABEL_COMB_INVERSE_HPP
#define PELLABEL_COMB_INVERSE_HPP

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pellabel/canonical.hpp"
#include "pellabel/curve.hpp"
#include "pellabel/errors.hpp"
#include "pellabel/linalg.hpp"
#include "pellabel/pell.hpp"
#include "pellabel/poly.hpp"
#include "pellabel/quadrature.hpp"

// Inverse direction: a comb (half-strip of height r*pi with g slits at
// ordinates q_j*pi and lengths h_j) determines a curve whose canonical
// differential realizes it. The conformal map itself is never evaluated;
// the parameter problem is posed directly on the period constraints
//   gap integrals of R vanish,  r|eta_j|/pi = r_j,  r*lambda_j/pi = h_j,
// and solved by damped Newton with continuation in the tooth lengths.

namespace pellabel {

/// Combinatorial target of the inverse problem.
template <typename Real>
struct Comb {
  int r = 1;
  std::vector<int> q;   // ascending tooth ordinates, in [1, r-1]
  std::vector<Real> h;  // positive tooth lengths

  Comb() = default;
  Comb(int r_, std::vector<int> q_, std::vector<Real> h_)
      : r(r_), q(std::move(q_)), h(std::move(h_)) {
    validate();
  }

  int genus() const { return static_cast<int>(q.size()); }

  /// r_j = q_{j+1} - q_j with q_0 = 0, q_{g+1} = r.
  std::vector<int> r_vector() const {
    std::vector<int> rv;
    int prev = 0;
    for (int qi : q) {
      rv.push_back(qi - prev);
      prev = qi;
    }
    rv.push_back(r - prev);
    return rv;
  }

  void validate() const {
    if (r < 1) throw validation_error("comb: degree r must be positive");
    if (q.size() != h.size()) throw validation_error("comb: q and h must have equal length");
    int prev = 0;
    for (int qi : q) {
      if (qi <= prev || qi >= r)
        throw validation_error("comb: tooth ordinates must be strictly ascending in [1, r-1]");
      prev = qi;
    }
    for (Real hi : h)
      if (!(hi > Real(0))) throw validation_error("comb: tooth lengths must be positive");
  }
};

template <typename Real>
struct InverseSolveResult {
  CurveConfig<Real> curve;       // normalized: a_0 = 0, b_g = 1
  std::vector<Real> gap_roots;   // c_j
  int iterations = 0;
  Real final_residual = 0;
  std::vector<Real> continuation_path;  // residual at the end of each stage
};

struct InverseOptions {
  int max_iter = 80;
  double tol = 1e-11;
  int continuation_steps = 8;
  double s0 = 0.05;
  // Wide teeth squeeze the bands, which pushes weight roots against the gap
  // intervals and slows the endpoint rule; a higher cap absorbs that.
  QuadOptions quad{16, 1e-12, 1 << 18};
};

namespace detail {

/// Unknown layout: [b_0, a_1, b_1, ..., b_{g-1}, a_g | c_1, ..., c_g].
/// The full ordering chain a_0 < b_0 < c_1 < a_1 < ... < c_g < a_g < b_g
/// interleaves every unknown between its neighbors.
template <typename Real>
std::vector<Real> ordering_chain(const std::vector<Real>& u, int g) {
  std::vector<Real> chain;
  chain.reserve(static_cast<size_t>(3 * g + 2));
  chain.push_back(Real(0));
  chain.push_back(u[0]);  // b_0
  for (int j = 1; j <= g; ++j) {
    chain.push_back(u[static_cast<size_t>(2 * g + j - 1)]);  // c_j
    chain.push_back(u[static_cast<size_t>(2 * j - 1)]);      // a_j
    if (j < g) chain.push_back(u[static_cast<size_t>(2 * j)]);  // b_j
  }
  chain.push_back(Real(1));  // b_g
  return chain;
}

template <typename Real>
bool ordering_valid(const std::vector<Real>& u, int g, Real margin) {
  const std::vector<Real> chain = ordering_chain(u, g);
  for (size_t i = 1; i < chain.size(); ++i)
    if (!(chain[i] - chain[i - 1] > margin)) return false;
  return true;
}

template <typename Real>
std::vector<Real> endpoints_of(const std::vector<Real>& u, int g) {
  std::vector<Real> e;
  e.reserve(static_cast<size_t>(2 * g + 2));
  e.push_back(Real(0));
  for (int i = 0; i < 2 * g; ++i) e.push_back(u[static_cast<size_t>(i)]);
  e.push_back(Real(1));
  return e;
}

}  // namespace detail

/// Scaled constraint residuals at a candidate configuration. Entries:
///   [0, g)    gap integrals of prod(x - c_k), times r/pi;
///   [g, 2g)   r|eta_j|/pi - r_j for bands j = 0..g-1 (the last band is
///             implied by the residue identity);
///   [2g, 3g)  r*lambda_j/pi - h_j.
/// Throws on ordering violations; the Newton driver rejects such steps.
template <typename Real>
std::vector<Real> residual_system(const std::vector<Real>& unknowns, const Comb<Real>& comb,
                                  QuadOptions opt = {}) {
  const int g = comb.genus();
  if (static_cast<int>(unknowns.size()) != 3 * g)
    throw validation_error("residual_system: expected 3g unknowns");
  if (!detail::ordering_valid(unknowns, g, Real(1e-12)))
    throw validation_error("residual_system: candidate violates the endpoint ordering");

  const Real pi = std::numbers::pi_v<Real>;
  const Real scale = Real(comb.r) / pi;
  const std::vector<int> rv = comb.r_vector();
  const CurveConfig<Real> curve(detail::endpoints_of(unknowns, g), Real(1e-13));
  const std::vector<Real>& e = curve.endpoints();
  const std::vector<Real> roots(unknowns.begin() + 2 * g, unknowns.end());
  const Poly<Real> r_hat = Poly<Real>::from_roots(roots);

  std::vector<Real> res(static_cast<size_t>(3 * g));
  for (int j = 1; j <= g; ++j) {
    const auto iv =
        SingularInterval<Real>::from_roots(e, curve.gap_lo(j), curve.gap_hi(j), IntervalKind::gap);
    res[static_cast<size_t>(j - 1)] =
        scale * detail::checked_value(integrate_endpoint_singular(r_hat, iv, opt), "gap residual");
  }
  for (int j = 0; j < g; ++j) {
    const auto iv = SingularInterval<Real>::from_roots(e, curve.band_lo(j), curve.band_hi(j),
                                                       IntervalKind::band);
    const Real eta = std::abs(
        detail::checked_value(integrate_endpoint_singular(r_hat, iv, opt), "band residual"));
    res[static_cast<size_t>(g + j)] = scale * eta - Real(rv[static_cast<size_t>(j)]);
  }
  for (int j = 1; j <= g; ++j) {
    const Real lam = std::abs(detail::checked_value(
        integrate_half_singular(r_hat, curve.gap_lo(j), roots[static_cast<size_t>(j - 1)], e, opt),
        "flat residual"));
    res[static_cast<size_t>(2 * g + j - 1)] = scale * lam - comb.h[static_cast<size_t>(j - 1)];
  }
  return res;
}

namespace detail {

template <typename Real>
Real inf_norm(const std::vector<Real>& v) {
  Real m = 0;
  for (Real x : v) m = std::max(m, std::abs(x));
  return m;
}

/// Damped Newton with a central finite-difference Jacobian. Steps are
/// backtracked (halving, floor 2^-20) until the ordering holds and the
/// residual norm decreases.
template <typename Real>
struct NewtonOutcome {
  std::vector<Real> x;
  Real residual_norm;
  int iterations;
};

template <typename Real>
NewtonOutcome<Real> newton_stage(std::vector<Real> x, const Comb<Real>& comb, Real tol,
                                 int max_iter, QuadOptions quad) {
  const int g = comb.genus();
  const int n = 3 * g;
  std::vector<Real> res = residual_system(x, comb, quad);
  Real norm = inf_norm(res);
  int iter = 0;
  while (norm >= tol && iter < max_iter) {
    ++iter;
    // Central-difference Jacobian; the step stays inside the ordering chain
    // a_0 < b_0 < c_1 < a_1 < ... < c_g < a_g < b_g.
    linalg::Mat<Real> jac(n, n);
    auto at = [&](int idx) { return x[static_cast<size_t>(idx)]; };
    for (int i = 0; i < n; ++i) {
      Real lo, hi;
      if (i < 2 * g && i % 2 == 0) {  // b_j, j = i/2
        const int j = i / 2;
        lo = j == 0 ? Real(0) : at(2 * j - 1);  // a_j
        hi = at(2 * g + j);                     // c_{j+1}
      } else if (i < 2 * g) {  // a_j, j = (i+1)/2
        const int j = (i + 1) / 2;
        lo = at(2 * g + j - 1);                 // c_j
        hi = j == g ? Real(1) : at(2 * j);      // b_j
      } else {  // c_j, j = i - 2g + 1
        const int j = i - 2 * g + 1;
        lo = at(2 * (j - 1));                   // b_{j-1}
        hi = at(2 * j - 1);                     // a_j
      }
      const Real xi = at(i);
      Real step = Real(1e-6) * std::max(Real(1), std::abs(xi));
      step = std::min(step, Real(0.25) * std::min(xi - lo, hi - xi));
      std::vector<Real> xp = x, xm = x;
      xp[static_cast<size_t>(i)] += step;
      xm[static_cast<size_t>(i)] -= step;
      const std::vector<Real> rp = residual_system(xp, comb, quad);
      const std::vector<Real> rm = residual_system(xm, comb, quad);
      for (int k = 0; k < n; ++k)
        jac(k, i) = (rp[static_cast<size_t>(k)] - rm[static_cast<size_t>(k)]) / (2 * step);
    }
    std::vector<Real> neg(res.size());
    for (size_t k = 0; k < res.size(); ++k) neg[k] = -res[k];
    std::vector<Real> delta = linalg::solve(jac, neg);

    Real t = 1;
    bool accepted = false;
    while (t >= Real(std::ldexp(1.0, -20))) {
      std::vector<Real> xn(x.size());
      for (size_t k = 0; k < x.size(); ++k) xn[k] = x[k] + t * delta[k];
      if (ordering_valid(xn, g, Real(1e-9))) {
        try {
          std::vector<Real> rn = residual_system(xn, comb, quad);
          const Real nn = inf_norm(rn);
          if (nn < norm) {
            x = std::move(xn);
            res = std::move(rn);
            norm = nn;
            accepted = true;
            break;
          }
        } catch (const quadrature_error&) {
          // Trial point too extreme for the node cap: shorten the step.
        }
      }
      t /= 2;
    }
    if (!accepted)
      throw solver_error("newton_stagnation",
                         "Newton stagnated at residual " + std::to_string(double(norm)) +
                             " after " + std::to_string(iter) + " iterations",
                         double(norm), iter);
  }
  if (norm >= tol)
    throw solver_error("newton_stagnation",
                       "Newton did not reach the tolerance; best residual " +
                           std::to_string(double(norm)),
                       double(norm), iter);
  return {std::move(x), norm, iter};
}

/// Equally spaced initial configuration: band widths proportional to r_j,
/// gap widths one unit each, gap roots at gap midpoints.
template <typename Real>
std::vector<Real> initial_guess(const Comb<Real>& comb) {
  const int g = comb.genus();
  const std::vector<int> rv = comb.r_vector();
  const Real unit = Real(1) / Real(comb.r + g);
  std::vector<Real> endpoints;  // interior endpoints b_0, a_1, ..., a_g
  std::vector<Real> roots;
  Real pos = 0;
  for (int j = 0; j <= g; ++j) {
    pos += Real(rv[static_cast<size_t>(j)]) * unit;  // band j
    if (j < g) {
      endpoints.push_back(pos);               // b_j
      roots.push_back(pos + unit / 2);        // c_{j+1}
      pos += unit;                            // gap j+1
      endpoints.push_back(pos);               // a_{j+1}
    }
  }
  std::vector<Real> u = std::move(endpoints);
  u.insert(u.end(), roots.begin(), roots.end());
  return u;
}

}  // namespace detail

/// Solves the parameter problem for a comb. Continuation scales the tooth
/// lengths geometrically from s0 * h up to h, warm-starting each stage; an
/// explicit warm start skips the continuation when it already converges.
template <typename Real>
InverseSolveResult<Real> solve(const Comb<Real>& comb, InverseOptions opt = {},
                               const std::vector<Real>* warm_start = nullptr) {
  comb.validate();
  const int g = comb.genus();
  if (g == 0) {
    return InverseSolveResult<Real>{CurveConfig<Real>({Real(0), Real(1)}), {}, 0, Real(0), {}};
  }

  if (warm_start != nullptr) {
    try {
      detail::NewtonOutcome<Real> out = detail::newton_stage(
          *warm_start, comb, Real(opt.tol), opt.max_iter, opt.quad);
      std::vector<Real> roots(out.x.begin() + 2 * g, out.x.end());
      return InverseSolveResult<Real>{CurveConfig<Real>(detail::endpoints_of(out.x, g)),
                                      std::move(roots), out.iterations, out.residual_norm,
                                      {out.residual_norm}};
    } catch (const solver_error&) {
      // fall through to full continuation
    }
  }

  const int steps = std::max(1, opt.continuation_steps);
  std::vector<Real> x = detail::initial_guess(comb);
  std::vector<Real> path;
  int total_iter = 0;
  Real final_norm = 0;
  for (int k = 0; k < steps; ++k) {
    const Real s = steps == 1 ? Real(1)
                              : Real(opt.s0) * std::pow(Real(1) / Real(opt.s0),
                                                        Real(k) / Real(steps - 1));
    Comb<Real> staged = comb;
    for (Real& hv : staged.h) hv *= s;
    detail::NewtonOutcome<Real> out =
        detail::newton_stage(std::move(x), staged, Real(opt.tol), opt.max_iter, opt.quad);
    x = std::move(out.x);
    total_iter += out.iterations;
    final_norm = out.residual_norm;
    path.push_back(out.residual_norm);
  }
  std::vector<Real> roots(x.begin() + 2 * g, x.end());
  return InverseSolveResult<Real>{CurveConfig<Real>(detail::endpoints_of(x, g)), std::move(roots),
                                  total_iter, final_norm, std::move(path)};
}

template <typename Real>
struct SweepVerdict {
  int g = 0;
  int r = 0;
  bool possible = false;
  std::vector<int> partition;  // the witness partition (1, ..., 1, r-g)
  std::optional<InverseSolveResult<Real>> witness;
  std::optional<PellVerdict<Real>> forward;
  std::string reason;
};

/// Constructive existence check: for r > g builds the witness comb with
/// partition (1, ..., 1, r-g) and unit tooth lengths, solves it, and verifies
/// the forward round-trip. For r <= g, g+1 positive integers cannot sum to r,
/// so the verdict is immediate and nothing is solved.
template <typename Real>
SweepVerdict<Real> existence_sweep(int g, int r, InverseOptions opt = {}) {
  if (g < 0 || r < 1) throw validation_error("existence sweep needs g >= 0, r >= 1");
  SweepVerdict<Real> verdict;
  verdict.g = g;
  verdict.r = r;
  if (r <= g) {
    verdict.possible = false;
    verdict.reason = "a partition of " + std::to_string(r) + " into " + std::to_string(g + 1) +
                     " positive integers does not exist";
    return verdict;
  }
  verdict.possible = true;
  std::vector<int> partition(static_cast<size_t>(g), 1);
  partition.push_back(r - g);
  verdict.partition = partition;

  std::vector<int> q;
  for (int i = 1; i <= g; ++i) q.push_back(i);
  Comb<Real> comb(r, std::move(q), std::vector<Real>(static_cast<size_t>(g), Real(1)));
  InverseSolveResult<Real> solved = solve(comb, opt);

  const CanonicalData<Real> data = canonical(solved.curve, opt.quad);
  PellVerdict<Real> fwd = detect(solved.curve, data, r);
  if (!fwd.solvable || !fwd.degree || *fwd.degree != r || fwd.r_vector != partition)
    throw solver_error("roundtrip_mismatch",
                       "witness curve does not reproduce the requested degree and partition",
                       double(solved.final_residual), solved.iterations);
  verdict.witness = std::move(solved);
  verdict.forward = std::move(fwd);
  return verdict;
}

}  // namespace pellabel

#endif
