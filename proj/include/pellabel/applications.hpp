#ifndef PELLABEL_APPLICATIONS_HPP
#define PELLABEL_APPLICATIONS_HPP

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pellabel/canonical.hpp"
#include "pellabel/comb_inverse.hpp"
#include "pellabel/curve.hpp"
#include "pellabel/errors.hpp"
#include "pellabel/pell.hpp"

// Arithmetic gates layered on the solver: existence of primitive
// k-differentials with prescribed zero divisors on totally real hyperelliptic
// curves, torsion orders of the divisor class at infinity, and the numeric
// shadow of the shrinking-tooth degeneration.

namespace pellabel {

template <typename Real>
struct KDiffReport {
  int g = 0;
  int k = 0;
  bool exists_unique_zero = false;
  int required_degree = 0;                 // k(g-1)
  int zero_order = 0;                      // k(2g-2)
  std::pair<int, int> conjugate_range{0, 0};  // [(k+1)g - (k-1), 2k(g-1)]
  std::optional<InverseSolveResult<Real>> witness;
  std::string note;
};

/// Existence of a primitive k-differential with a single zero of order
/// k(2g-2) on a totally real hyperelliptic curve of genus g: true for every
/// (g, k) except (2, 2). When build_witness is set and the construction goes
/// through the degree-k(g-1) solution, the witness curve is attached.
template <typename Real>
KDiffReport<Real> kdiff_unique_zero(int g, int k, bool build_witness = false,
                                    InverseOptions opt = {}) {
  if (g < 2 || k < 1) throw validation_error("k-differential gate needs g >= 2, k >= 1");
  KDiffReport<Real> report;
  report.g = g;
  report.k = k;
  report.required_degree = k * (g - 1);
  report.zero_order = k * (2 * g - 2);
  report.conjugate_range = {(k + 1) * g - (k - 1), 2 * k * (g - 1)};
  report.exists_unique_zero = !(g == 2 && k == 2);
  if (!report.exists_unique_zero) {
    report.note = "no primitive quadratic differential with a single zero exists in genus 2";
    return report;
  }
  if (build_witness) {
    if (report.required_degree >= g + 1) {
      SweepVerdict<Real> sweep = existence_sweep<Real>(g, report.required_degree, opt);
      report.witness = std::move(sweep.witness);
    } else {
      // k = 1: the witness is the differential vanishing only over a branch
      // point, which needs no solver run.
      report.note = "order-" + std::to_string(report.zero_order) +
                    " zero sits over a branch point; no curve construction needed";
    }
  }
  return report;
}

/// Gate for k-differentials whose divisor n z + n' iota(z) is supported on a
/// conjugate pair: solvable iff (k+1)g - (k-1) <= n <= 2k(g-1).
inline bool kdiff_conjugate_range(int g, int k, int n) {
  if (g < 2 || k < 2) throw validation_error("conjugate-support gate needs g >= 2, k >= 2");
  return n >= (k + 1) * g - (k - 1) && n <= 2 * k * (g - 1);
}

/// Same gate with an optional witness: the solution degree r = n - k(g-1)
/// feeds the existence sweep.
template <typename Real>
KDiffReport<Real> kdiff_conjugate_report(int g, int k, int n, bool build_witness = false,
                                         InverseOptions opt = {}) {
  KDiffReport<Real> report;
  report.g = g;
  report.k = k;
  report.conjugate_range = {(k + 1) * g - (k - 1), 2 * k * (g - 1)};
  report.exists_unique_zero = kdiff_conjugate_range(g, k, n);
  report.required_degree = n - k * (g - 1);
  report.zero_order = n;
  if (report.exists_unique_zero && build_witness) {
    SweepVerdict<Real> sweep = existence_sweep<Real>(g, report.required_degree, opt);
    report.witness = std::move(sweep.witness);
  }
  return report;
}

template <typename Real>
struct TorsionReport {
  int genus = 0;
  int r_max = 0;
  bool jacobian_trivial = false;           // genus 0
  std::optional<int> divisor_order;        // order of the class at infinity, within r_max
  std::vector<int> candidate_point_orders; // {r, 2r} modulo a branch point
  bool forbidden_range_check = true;       // divisor order exceeds the genus
  std::string notes;
  PellVerdict<Real> verdict;
};

/// Torsion order of the divisor class of the two points at infinity, within
/// the search bound, and the candidate orders {r, 2r} of the corresponding
/// point modulo a branch point. The r-vs-2r ambiguity is surfaced, not
/// resolved: settling it needs the Abel-Jacobi map.
template <typename Real>
TorsionReport<Real> torsion_report(const CurveConfig<Real>& curve, int r_max = 200,
                                   QuadOptions opt = {}) {
  TorsionReport<Real> report;
  report.genus = curve.genus();
  report.r_max = r_max;
  const CanonicalData<Real> data = canonical(curve, opt);
  report.verdict = detect(curve, data, r_max);
  if (curve.genus() == 0) {
    report.jacobian_trivial = true;
    report.divisor_order = 1;
    report.candidate_point_orders = {1, 2};
    report.notes = "genus 0: the Jacobian is trivial and every degree r >= 1 is realized";
    return report;
  }
  if (report.verdict.solvable && report.verdict.degree) {
    const int r = *report.verdict.degree;
    report.divisor_order = r;
    report.candidate_point_orders = {r, 2 * r};
    report.forbidden_range_check = r > curve.genus();
    report.notes =
        "the point over infinity has order r or 2r modulo a branch point; "
        "distinguishing them is outside the period computation";
    if (r >= 3 && r <= 2 * curve.genus())
      report.notes += "; no primitive order lies in [3, 2g], which favors 2r";
  } else {
    report.notes = "no torsion detected up to the search bound";
  }
  return report;
}

template <typename Real>
struct DegenerationStep {
  Real h_value = 0;             // current length of the shrinking tooth
  InverseSolveResult<Real> result;
  Real min_endpoint_gap = 0;    // global minimum; unimodal along a family
  Real shrink_gap = 0;          // width of the gap being pinched; decreasing
  std::vector<int> r_vector;    // forward-verified per step
};

template <typename Real>
struct DegenerationFamily {
  std::vector<DegenerationStep<Real>> steps;
  bool completed = false;       // false when the solver gave out early
  std::string note;
};

/// Solves the comb with h[shrink_index] scaled by (1/2)^i for i = 0..steps-1,
/// warm-starting each member from the last: the numeric shadow of the
/// shrinking-tooth limit. Solver failure ends the family early with partial
/// results.
template <typename Real>
DegenerationFamily<Real> degeneration_family(const Comb<Real>& comb, int shrink_index, int steps,
                                             InverseOptions opt = {}) {
  if (shrink_index < 1 || shrink_index > comb.genus())
    throw validation_error("shrink index must name one of the comb's teeth");
  if (steps < 1) throw validation_error("degeneration needs at least one step");
  DegenerationFamily<Real> family;
  std::vector<Real> warm;
  for (int i = 0; i < steps; ++i) {
    Comb<Real> staged = comb;
    staged.h[static_cast<size_t>(shrink_index - 1)] *= std::pow(Real(0.5), Real(i));
    try {
      InverseSolveResult<Real> solved =
          solve(staged, opt, warm.empty() ? nullptr : &warm);
      const CanonicalData<Real> data = canonical(solved.curve, opt.quad);
      const PellVerdict<Real> fwd = detect(solved.curve, data, staged.r);
      if (!fwd.solvable || fwd.r_vector != staged.r_vector())
        throw solver_error("roundtrip_mismatch",
                           "degeneration member does not reproduce its comb",
                           double(solved.final_residual), solved.iterations);
      DegenerationStep<Real> step;
      step.h_value = staged.h[static_cast<size_t>(shrink_index - 1)];
      step.min_endpoint_gap = solved.curve.min_gap();
      step.shrink_gap =
          solved.curve.gap_hi(shrink_index) - solved.curve.gap_lo(shrink_index);
      step.r_vector = fwd.r_vector;
      warm.clear();
      for (size_t k = 1; k + 1 < solved.curve.endpoints().size(); ++k)
        warm.push_back(solved.curve.endpoints()[k]);
      warm.insert(warm.end(), solved.gap_roots.begin(), solved.gap_roots.end());
      step.result = std::move(solved);
      family.steps.push_back(std::move(step));
    } catch (const solver_error& e) {
      family.note = "stopped at step " + std::to_string(i) + ": " + e.what();
      return family;
    }
  }
  family.completed = true;
  return family;
}

}  // namespace pellabel

#endif
