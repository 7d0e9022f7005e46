#ifndef PELLABEL_PELL_HPP
#define PELLABEL_PELL_HPP

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pellabel/canonical.hpp"
#include "pellabel/curve.hpp"
#include "pellabel/errors.hpp"
#include "pellabel/poly.hpp"
#include "pellabel/quadrature.hpp"

// Solvability of P^2 - D Q^2 = c at degree r is equivalent to every
// r*|eta_j|/pi being a positive integer r_j; the r_j then sum to r and count
// the roots of P per band. Detection scans r, synthesis rebuilds P = cos(theta)
// from the accumulated phase theta' = r|R|/sqrt|D| and fits polynomials
// through the samples.

namespace pellabel {

template <typename Real>
struct PellVerdict {
  bool solvable = false;
  std::optional<int> degree;        // minimal (or requested) degree r
  std::vector<int> r_vector;        // per-band root counts r_j, sum r
  bool primitive = false;           // gcd of r_vector is 1
  std::vector<Real> certificate;    // per-band distance of r|eta_j|/pi to the integers
  int r_max = 0;
  Real tol = 0;
  std::string note;
};

template <typename Real>
struct PellSolution {
  // Sup-normalized form: max |P| = 1 on the bands, c = 1.
  Poly<Real> P;
  Poly<Real> Q;
  Real c = 1;
  // Monic form: divide by the leading coefficient of P, square it into c.
  Poly<Real> P_monic;
  Poly<Real> Q_monic;
  Real c_monic = 1;
  int degree = 0;
  std::vector<int> band_root_counts;
  Real residual = 0;            // max-norm of coeffs of P^2 - D Q^2 - c, relative to P^2
  Real fit_residual_P = 0;
  Real fit_residual_Q = 0;
  Real theta_endpoint_defect = 0;  // max_j | r|eta_j| - pi r_j |
  Real sup_defect = 0;             // max over a dense band grid of |P| - 1
};

template <typename Real>
struct PellCertificate {
  bool pass = false;
  Real residual = 0;               // relative coefficient residual of P^2 - D Q^2 - c
  Real logderiv_rel_err = 0;       // worst |theta'| vs r|R|/sqrt|D| mismatch
  Real division_rem = 0;           // remainder of (P^2 - c) / D, relative
  Real division_qq_err = 0;        // quotient vs Q^2, relative coefficient error
};

namespace detail {

template <typename Real>
Real rel_coeff_residual(const Poly<Real>& defect, const Poly<Real>& reference) {
  Real num = 0, den = 0;
  for (Real v : defect.coeffs()) num = std::max(num, std::abs(v));
  for (Real v : reference.coeffs()) den = std::max(den, std::abs(v));
  return num / std::max(den, Real(1e-300));
}

inline int gcd_of(const std::vector<int>& v) {
  int g = 0;
  for (int x : v) g = std::gcd(g, x);
  return g;
}

}  // namespace detail

/// Tests a single degree r: is r*|eta_j|/pi within tol of a positive integer
/// for every band?
template <typename Real>
PellVerdict<Real> detect_at(const CanonicalData<Real>& data, int r, Real tol = Real(1e-8)) {
  if (r < 1) throw validation_error("detect: degree must be positive");
  const Real pi = std::numbers::pi_v<Real>;
  PellVerdict<Real> verdict;
  verdict.r_max = r;
  verdict.tol = tol;
  bool ok = true;
  std::vector<int> ks;
  std::vector<Real> dist;
  for (Real eta : data.eta_abs) {
    const Real t = Real(r) * eta / pi;
    const Real k = std::round(t);
    dist.push_back(std::abs(t - k));
    ks.push_back(static_cast<int>(k));
    if (!(std::abs(t - k) < tol) || k < Real(1)) ok = false;
  }
  verdict.certificate = std::move(dist);
  if (ok) {
    verdict.solvable = true;
    verdict.degree = r;
    verdict.r_vector = std::move(ks);
    const int sum = std::accumulate(verdict.r_vector.begin(), verdict.r_vector.end(), 0);
    if (sum != r)
      throw solver_error("detect_inconsistent",
                         "band integers sum to " + std::to_string(sum) +
                             " instead of the degree " + std::to_string(r),
                         double(sum - r), 0);
    verdict.primitive = detail::gcd_of(verdict.r_vector) == 1;
  }
  return verdict;
}

/// Smallest degree r <= r_max at which the equation is solvable, with the
/// integer vector (r_j) and per-band distance certificate. Not finding one
/// is a valid verdict, not an error.
template <typename Real>
PellVerdict<Real> detect(const CurveConfig<Real>& curve, const CanonicalData<Real>& data,
                         int r_max = 200, Real tol = Real(1e-8)) {
  (void)curve;
  if (r_max < 1) throw validation_error("detect: r_max must be positive");
  Real best_dist = std::numeric_limits<Real>::infinity();
  std::vector<Real> best_cert;
  int best_r = 0;
  for (int r = 1; r <= r_max; ++r) {
    PellVerdict<Real> v = detect_at(data, r, tol);
    if (v.solvable) {
      v.r_max = r_max;
      return v;
    }
    Real worst = 0;
    for (Real dte : v.certificate) worst = std::max(worst, dte);
    if (worst < best_dist) {
      best_dist = worst;
      best_cert = v.certificate;
      best_r = r;
    }
  }
  PellVerdict<Real> verdict;
  verdict.solvable = false;
  verdict.r_max = r_max;
  verdict.tol = tol;
  verdict.certificate = std::move(best_cert);
  verdict.note = "no degree up to " + std::to_string(r_max) +
                 " certified; closest candidate r = " + std::to_string(best_r);
  return verdict;
}

namespace detail {

/// Accumulated phase at x inside band j, integrating from the nearest band
/// endpoint. abs_r is the polynomial agreeing with |R| on this band.
template <typename Real>
Real theta_at(const CurveConfig<Real>& curve, const Poly<Real>& abs_r, int j, int r, Real q_pi,
              Real band_eta, Real x, QuadOptions opt) {
  const Real a = curve.band_lo(j), b = curve.band_hi(j);
  if (x - a <= b - x) {
    const Real inc = checked_value(integrate_half_singular(abs_r, a, x, curve.endpoints(), opt),
                                   "phase integral");
    return q_pi + Real(r) * inc;
  }
  const Real dec = checked_value(integrate_half_singular_hi(abs_r, x, b, curve.endpoints(), opt),
                                 "phase integral");
  return q_pi + Real(r) * (band_eta - dec);
}

}  // namespace detail

struct SynthesizeOptions {
  QuadOptions quad{16, 1e-13, 1 << 16};
  double fit_tolerance = 1e-6;          // above this the verdict was a false positive
  double endpoint_tolerance = 1e-7;     // allowed |theta(b_j) - pi(q_j + r_j)|
  int extra_samples_per_band = 12;
};

/// Builds the explicit solution (P, Q, c) for a solvable verdict by sampling
/// P = cos(theta), Q = +-sin(theta)/sqrt(-D) over the bands and fitting.
template <typename Real>
PellSolution<Real> synthesize(const CurveConfig<Real>& curve, const CanonicalData<Real>& data,
                              const PellVerdict<Real>& verdict, SynthesizeOptions opt = {}) {
  if (!verdict.solvable || !verdict.degree)
    throw validation_error("synthesize requires a solvable verdict");
  const int g = curve.genus();
  const int r = *verdict.degree;
  const std::vector<int>& rv = verdict.r_vector;
  const Real pi = std::numbers::pi_v<Real>;
  const Poly<Real> d = curve.divisor_poly();

  PellSolution<Real> sol;
  sol.degree = r;

  // theta(b_j) must land on pi*(q_j + r_j); the defect is r|eta_j| - pi r_j.
  for (int j = 0; j <= g; ++j)
    sol.theta_endpoint_defect =
        std::max(sol.theta_endpoint_defect,
                 std::abs(Real(r) * data.eta_abs[static_cast<size_t>(j)] -
                          pi * Real(rv[static_cast<size_t>(j)])));
  if (sol.theta_endpoint_defect > Real(opt.endpoint_tolerance))
    throw solver_error("theta_endpoint_mismatch",
                       "band phase does not land on an integer multiple of pi",
                       double(sol.theta_endpoint_defect), 0);

  std::vector<std::pair<Real, Real>> p_samples;
  std::vector<std::pair<Real, Real>> q_samples;
  int q_offset = 0;  // q_j = sum of r_i below band j
  for (int j = 0; j <= g; ++j) {
    const Real a = curve.band_lo(j), b = curve.band_hi(j);
    const Real m = (a + b) / 2, rho = (b - a) / 2;
    const Real sigma = data.R(m) >= 0 ? Real(1) : Real(-1);
    const Poly<Real> abs_r = sigma * data.R;
    const int n = 4 * rv[static_cast<size_t>(j)] + opt.extra_samples_per_band;
    const Real q_pi = pi * Real(q_offset);
    for (int i = 1; i <= n; ++i) {
      const Real x = m - rho * std::cos((2 * Real(i) - 1) * pi / (2 * Real(n)));
      const Real theta = detail::theta_at(curve, abs_r, j, r, q_pi,
                                          data.eta_abs[static_cast<size_t>(j)], x, opt.quad);
      p_samples.emplace_back(x, std::cos(theta));
      q_samples.emplace_back(x, -sigma * std::sin(theta) / std::sqrt(std::abs(d(x))));
    }
    q_offset += rv[static_cast<size_t>(j)];
  }

  FitResult<Real> fit_p = fit(p_samples, r);
  FitResult<Real> fit_q = fit(q_samples, r - g - 1);
  sol.fit_residual_P = fit_p.residual;
  sol.fit_residual_Q = fit_q.residual;
  if (!(fit_p.residual < Real(opt.fit_tolerance)) || !(fit_q.residual < Real(opt.fit_tolerance)))
    throw solver_error("fit_residual",
                       "solution samples are not polynomial at the requested degree "
                       "(the verdict was a false positive at this tolerance)",
                       double(std::max(fit_p.residual, fit_q.residual)), 0);
  sol.P = fit_p.p;
  sol.Q = fit_q.p;
  sol.c = 1;

  // Normalize the polynomial to +1 at the rightmost branch point, which also
  // makes its leading coefficient positive.
  if (sol.P(curve.band_hi(g)) < 0) {
    sol.P = -sol.P;
    sol.Q = -sol.Q;
  }

  const Real lead = sol.P.lead();
  sol.P_monic = sol.P * (Real(1) / lead);
  sol.Q_monic = sol.Q * (Real(1) / lead);
  sol.c_monic = Real(1) / (lead * lead);

  sol.residual =
      detail::rel_coeff_residual(sol.P * sol.P - d * (sol.Q * sol.Q) - Poly<Real>::constant(sol.c),
                                 sol.P * sol.P);

  for (int j = 0; j <= g; ++j) {
    sol.band_root_counts.push_back(static_cast<int>(
        roots_in_interval(sol.P, curve.band_lo(j), curve.band_hi(j)).size()));
    // Sup-norm check on a dense band grid.
    const Real a = curve.band_lo(j), b = curve.band_hi(j);
    const int n = 200 * (rv[static_cast<size_t>(j)] + 1);
    for (int i = 0; i <= n; ++i) {
      const Real x = a + (b - a) * Real(i) / Real(n);
      sol.sup_defect = std::max(sol.sup_defect, std::abs(sol.P(x)) - Real(1));
    }
  }
  return sol;
}

struct VerifyOptions {
  QuadOptions quad{16, 1e-12, 1 << 16};
  double residual_tolerance = 1e-8;
  double logderiv_tolerance = 1e-6;
  int logderiv_points = 20;
};

/// Recomputes the polynomial residual, cross-checks Q against the division
/// route (P^2 - c)/D, and samples the phase-derivative identity
/// |theta'| = r |R| / sqrt|D| at interior band points.
template <typename Real>
PellCertificate<Real> verify(const CurveConfig<Real>& curve, const PellSolution<Real>& sol,
                             VerifyOptions opt = {}) {
  const int g = curve.genus();
  const Poly<Real> d = curve.divisor_poly();
  PellCertificate<Real> cert;

  const Poly<Real> p2 = sol.P * sol.P;
  cert.residual =
      detail::rel_coeff_residual(p2 - d * (sol.Q * sol.Q) - Poly<Real>::constant(sol.c), p2);

  // Independent route: divide P^2 - c by D and compare with Q^2.
  auto [quot, rem] = divrem(p2 - Poly<Real>::constant(sol.c), d);
  cert.division_rem = detail::rel_coeff_residual(rem, p2);
  cert.division_qq_err = detail::rel_coeff_residual(quot - sol.Q * sol.Q, sol.Q * sol.Q);

  // Phase-derivative identity, with theta recovered from arccos(P/sqrt(c))
  // by Richardson-extrapolated central differences.
  const CanonicalData<Real> data = canonical(curve, opt.quad);
  const int r = sol.degree;
  const Real sqrt_c = std::sqrt(sol.c);
  int checked = 0;
  const int per_band = std::max(1, opt.logderiv_points / (g + 1) + 1);
  for (int j = 0; j <= g && checked < opt.logderiv_points; ++j) {
    const Real a = curve.band_lo(j), b = curve.band_hi(j);
    const Real pi = std::numbers::pi_v<Real>;
    for (int i = 1; i <= 4 * per_band && checked < opt.logderiv_points; ++i) {
      const Real x = (a + b) / 2 - (b - a) / 2 * std::cos((2 * Real(i) - 1) * pi / (8 * Real(per_band)));
      if (std::abs(sol.P(x)) > Real(0.9) * sqrt_c) continue;
      const Real h = (b - a) * Real(1e-5);
      if (x - 2 * h <= a || x + 2 * h >= b) continue;
      auto theta = [&](Real t) { return std::acos(sol.P(t) / sqrt_c); };
      const Real d1 = (theta(x + h) - theta(x - h)) / (2 * h);
      const Real d2 = (theta(x + h / 2) - theta(x - h / 2)) / h;
      const Real deriv = std::abs((4 * d2 - d1) / 3);
      const Real expected = Real(r) * std::abs(data.R(x)) / std::sqrt(std::abs(d(x)));
      cert.logderiv_rel_err =
          std::max(cert.logderiv_rel_err, std::abs(deriv - expected) / std::abs(expected));
      ++checked;
    }
  }

  cert.pass = cert.residual < Real(opt.residual_tolerance) &&
              cert.logderiv_rel_err < Real(opt.logderiv_tolerance);
  return cert;
}

/// All ordered (g+1)-tuples of positive integers summing to r with gcd 1.
inline std::vector<std::vector<int>> enumerate_primitive_partitions(int r, int g) {
  if (r < 1 || g < 0) throw validation_error("partition enumeration needs r >= 1, g >= 0");
  std::vector<std::vector<int>> out;
  std::vector<int> cur(static_cast<size_t>(g) + 1);
  auto rec = [&](auto&& self, int pos, int remaining) -> void {
    const int slots = g + 1 - pos;
    if (slots == 1) {
      if (remaining >= 1) {
        cur[static_cast<size_t>(pos)] = remaining;
        if (detail::gcd_of(cur) == 1) out.push_back(cur);
      }
      return;
    }
    for (int v = 1; v <= remaining - (slots - 1); ++v) {
      cur[static_cast<size_t>(pos)] = v;
      self(self, pos + 1, remaining - v);
    }
  };
  rec(rec, 0, r);
  return out;
}

}  // namespace pellabel

#endif
