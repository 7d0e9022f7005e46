#ifndef PELLABEL_CANONICAL_HPP
#define PELLABEL_CANONICAL_HPP

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "pellabel/curve.hpp"
#include "pellabel/errors.hpp"
#include "pellabel/linalg.hpp"
#include "pellabel/poly.hpp"
#include "pellabel/quadrature.hpp"

// The canonical polynomial R of a curve is the unique monic degree-g
// polynomial whose integrals R/sqrt|D| over every gap vanish; R/y dx is then
// the third-kind differential with residues -1, +1 at the two points at
// infinity. This header computes R, its gap roots, the band periods |eta_j|,
// the flat half-periods lambda_j, and the residue-identity defect.

namespace pellabel {

template <typename Real>
struct CanonicalData {
  Poly<Real> R;                 // monic, degree g
  std::vector<Real> gap_roots;  // c_j, one strictly inside each gap
  std::vector<Real> eta_abs;    // |eta_j| per band, g+1 values
  std::vector<Real> lambda;     // flat half-periods per gap, g values
  Real residue_defect = 0;      // min over sign vectors of |sum +-|eta_j| - pi|
  Real condition = 1;           // 1-norm condition estimate of the linear system
};

namespace detail {

template <typename Real>
Real checked_value(const QuadResult<Real>& q, const char* what) {
  if (!q.converged)
    throw quadrature_error(std::string(what) + " did not converge at the node cap",
                           double(q.achieved_tol));
  return q.value;
}

/// Moment matrix of the gap constraints and its right-hand side; solving it
/// yields the non-leading coefficients of R.
template <typename Real>
struct CanonicalSystem {
  linalg::Mat<Real> m;     // m(j,i) = integral of x^i / sqrt|D| over gap j+1
  std::vector<Real> rhs;   // -integral of x^g / sqrt|D| over gap j+1
};

template <typename Real>
CanonicalSystem<Real> canonical_system(const CurveConfig<Real>& curve, QuadOptions opt) {
  const int g = curve.genus();
  CanonicalSystem<Real> sys{linalg::Mat<Real>(g, g), std::vector<Real>(static_cast<size_t>(g))};
  for (int j = 1; j <= g; ++j) {
    const auto iv = SingularInterval<Real>::from_roots(curve.endpoints(), curve.gap_lo(j),
                                                       curve.gap_hi(j), IntervalKind::gap);
    Poly<Real> mono = Poly<Real>::constant(Real(1));
    const Poly<Real> x = Poly<Real>::identity();
    for (int i = 0; i < g; ++i) {
      sys.m(j - 1, i) =
          checked_value(integrate_endpoint_singular(mono, iv, opt), "gap moment integral");
      mono = mono * x;
    }
    sys.rhs[static_cast<size_t>(j - 1)] =
        -checked_value(integrate_endpoint_singular(mono, iv, opt), "gap moment integral");
  }
  return sys;
}

template <typename Real>
struct CanonicalPoly {
  Poly<Real> R;
  Real condition;
};

template <typename Real>
CanonicalPoly<Real> canonical_polynomial_impl(const CurveConfig<Real>& curve, QuadOptions opt) {
  const int g = curve.genus();
  if (g == 0) return {Poly<Real>::constant(Real(1)), Real(1)};
  CanonicalSystem<Real> sys = canonical_system(curve, opt);
  const Real cond = linalg::condition_1(sys.m);
  if (!(cond < Real(1e12)))
    throw linalg_error("canonical system is ill conditioned (estimate " +
                       std::to_string(double(cond)) + ")");
  std::vector<Real> u = linalg::solve(sys.m, sys.rhs);
  u.push_back(Real(1));  // monic leading coefficient
  return {Poly<Real>(std::move(u)), cond};
}

}  // namespace detail

/// The unique monic degree-g polynomial with vanishing gap integrals.
/// Returns the constant 1 for genus 0.
template <typename Real>
Poly<Real> canonical_polynomial(const CurveConfig<Real>& curve, QuadOptions opt = {}) {
  return detail::canonical_polynomial_impl(curve, opt).R;
}

namespace detail {

template <typename Real>
CanonicalData<Real> periods_impl(const CurveConfig<Real>& curve, const Poly<Real>& r_poly,
                                 Real condition, QuadOptions opt) {
  const int g = curve.genus();
  CanonicalData<Real> data;
  data.R = r_poly;
  data.condition = condition;

  for (int j = 0; j <= g; ++j) {
    const auto iv = SingularInterval<Real>::from_roots(curve.endpoints(), curve.band_lo(j),
                                                       curve.band_hi(j), IntervalKind::band);
    const Real v =
        detail::checked_value(integrate_endpoint_singular(r_poly, iv, opt), "band period");
    data.eta_abs.push_back(std::abs(v));
  }

  for (int j = 1; j <= g; ++j) {
    std::vector<Real> roots = roots_in_interval(r_poly, curve.gap_lo(j), curve.gap_hi(j));
    if (roots.size() != 1)
      throw solver_error("gap_root_count",
                         "canonical polynomial must have exactly one root per gap, found " +
                             std::to_string(roots.size()) + " in gap " + std::to_string(j),
                         double(roots.size()), 0);
    data.gap_roots.push_back(roots[0]);
    const Real lam = detail::checked_value(
        integrate_half_singular(r_poly, curve.gap_lo(j), roots[0], curve.endpoints(), opt),
        "flat period");
    data.lambda.push_back(std::abs(lam));
  }

  // Residue identity: some choice of signs makes the band periods sum to pi.
  const Real pi = std::numbers::pi_v<Real>;
  if (g + 1 > 24) throw validation_error("genus too large for the residue sign search");
  Real best = std::numeric_limits<Real>::infinity();
  for (unsigned mask = 0; mask < (1u << (g + 1)); ++mask) {
    Real s = 0;
    for (int j = 0; j <= g; ++j)
      s += (mask >> j & 1u) ? data.eta_abs[static_cast<size_t>(j)]
                            : -data.eta_abs[static_cast<size_t>(j)];
    best = std::min(best, std::abs(s - pi));
  }
  data.residue_defect = best;
  return data;
}

}  // namespace detail

/// Gap roots, band periods, flat half-periods and diagnostics for a curve
/// whose canonical polynomial is R.
template <typename Real>
CanonicalData<Real> periods(const CurveConfig<Real>& curve, const Poly<Real>& r_poly,
                            QuadOptions opt = {}) {
  const Real cond =
      curve.genus() == 0
          ? Real(1)
          : linalg::condition_1(detail::canonical_system(curve, opt).m);
  return detail::periods_impl(curve, r_poly, cond, opt);
}

/// One-call convenience: canonical polynomial plus all period data.
template <typename Real>
CanonicalData<Real> canonical(const CurveConfig<Real>& curve, QuadOptions opt = {}) {
  detail::CanonicalPoly<Real> cp = detail::canonical_polynomial_impl(curve, opt);
  return detail::periods_impl(curve, cp.R, cp.condition, opt);
}

}  // namespace pellabel

#endif
