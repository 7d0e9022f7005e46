#ifndef PELLABEL_JSON_IO_HPP
#define PELLABEL_JSON_IO_HPP

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pellabel/applications.hpp"
#include "pellabel/canonical.hpp"
#include "pellabel/comb_inverse.hpp"
#include "pellabel/curve.hpp"
#include "pellabel/errors.hpp"
#include "pellabel/pell.hpp"
#include "pellabel/poly.hpp"

// JSON schemas for every domain type. Curves serialize as flat ascending
// endpoint arrays, polynomials as ascending coefficient arrays; everything
// else is a plain object. Parsing is strict: unknown fields are rejected.

namespace pellabel {

using json = nlohmann::json;

namespace detail {

/// Rejects unknown fields; all listed keys may be absent.
inline void expect_keys_subset(const json& j, std::initializer_list<const char*> keys,
                               const char* what) {
  if (!j.is_object()) throw validation_error(std::string(what) + ": expected a JSON object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* k : keys)
      if (item.key() == k) {
        known = true;
        break;
      }
    if (!known)
      throw validation_error(std::string(what) + ": unknown field '" + item.key() + "'");
  }
}

/// Rejects unknown fields and requires every listed key.
inline void expect_keys(const json& j, std::initializer_list<const char*> keys,
                        const char* what) {
  expect_keys_subset(j, keys, what);
  for (const char* k : keys)
    if (!j.contains(k))
      throw validation_error(std::string(what) + ": missing field '" + k + "'");
}

template <typename Real>
std::vector<double> to_doubles(const std::vector<Real>& v) {
  return std::vector<double>(v.begin(), v.end());
}

template <typename Real>
std::vector<Real> from_doubles(const json& j, const char* what) {
  if (!j.is_array()) throw validation_error(std::string(what) + ": expected a JSON array");
  std::vector<Real> out;
  for (const auto& x : j) {
    if (!x.is_number()) throw validation_error(std::string(what) + ": expected numbers");
    out.push_back(Real(x.template get<double>()));
  }
  return out;
}

}  // namespace detail

template <typename Real>
void to_json(json& j, const Poly<Real>& p) {
  j = detail::to_doubles(p.coeffs());
}

template <typename Real>
void from_json(const json& j, Poly<Real>& p) {
  p = Poly<Real>(detail::from_doubles<Real>(j, "polynomial"));
}

template <typename Real>
void to_json(json& j, const CurveConfig<Real>& c) {
  j = detail::to_doubles(c.endpoints());
}

template <typename Real>
void from_json(const json& j, CurveConfig<Real>& c) {
  c = CurveConfig<Real>(detail::from_doubles<Real>(j, "curve"));
}

template <typename Real>
void to_json(json& j, const Comb<Real>& c) {
  j = json{{"r", c.r}, {"q", c.q}, {"h", detail::to_doubles(c.h)}};
}

template <typename Real>
void from_json(const json& j, Comb<Real>& c) {
  detail::expect_keys(j, {"r", "q", "h"}, "comb");
  c = Comb<Real>(j.at("r").get<int>(), j.at("q").get<std::vector<int>>(),
                 detail::from_doubles<Real>(j.at("h"), "comb.h"));
}

template <typename Real>
void to_json(json& j, const CanonicalData<Real>& d) {
  j = json{{"R", d.R},
           {"gap_roots", detail::to_doubles(d.gap_roots)},
           {"eta_abs", detail::to_doubles(d.eta_abs)},
           {"lambda", detail::to_doubles(d.lambda)},
           {"residue_defect", double(d.residue_defect)},
           {"condition", double(d.condition)}};
}

template <typename Real>
void from_json(const json& j, CanonicalData<Real>& d) {
  detail::expect_keys(j, {"R", "gap_roots", "eta_abs", "lambda", "residue_defect", "condition"},
                      "canonical data");
  d.R = j.at("R").get<Poly<Real>>();
  d.gap_roots = detail::from_doubles<Real>(j.at("gap_roots"), "gap_roots");
  d.eta_abs = detail::from_doubles<Real>(j.at("eta_abs"), "eta_abs");
  d.lambda = detail::from_doubles<Real>(j.at("lambda"), "lambda");
  d.residue_defect = Real(j.at("residue_defect").get<double>());
  d.condition = Real(j.at("condition").get<double>());
}

template <typename Real>
void to_json(json& j, const PellVerdict<Real>& v) {
  j = json{{"solvable", v.solvable},
           {"degree", v.degree ? json(*v.degree) : json(nullptr)},
           {"r_vector", v.r_vector},
           {"primitive", v.primitive},
           {"certificate", detail::to_doubles(v.certificate)},
           {"r_max", v.r_max},
           {"tol", double(v.tol)},
           {"note", v.note}};
}

template <typename Real>
void from_json(const json& j, PellVerdict<Real>& v) {
  detail::expect_keys(
      j, {"solvable", "degree", "r_vector", "primitive", "certificate", "r_max", "tol", "note"},
      "verdict");
  v.solvable = j.at("solvable").get<bool>();
  v.degree = j.at("degree").is_null() ? std::nullopt
                                      : std::optional<int>(j.at("degree").get<int>());
  v.r_vector = j.at("r_vector").get<std::vector<int>>();
  v.primitive = j.at("primitive").get<bool>();
  v.certificate = detail::from_doubles<Real>(j.at("certificate"), "certificate");
  v.r_max = j.at("r_max").get<int>();
  v.tol = Real(j.at("tol").get<double>());
  v.note = j.at("note").get<std::string>();
}

template <typename Real>
void to_json(json& j, const PellSolution<Real>& s) {
  j = json{{"degree", s.degree},
           {"P", s.P},
           {"Q", s.Q},
           {"c", double(s.c)},
           {"monic", json{{"P", s.P_monic}, {"Q", s.Q_monic}, {"c", double(s.c_monic)}}},
           {"band_root_counts", s.band_root_counts},
           {"residual", double(s.residual)},
           {"fit_residual_P", double(s.fit_residual_P)},
           {"fit_residual_Q", double(s.fit_residual_Q)},
           {"theta_endpoint_defect", double(s.theta_endpoint_defect)},
           {"sup_defect", double(s.sup_defect)}};
}

template <typename Real>
void from_json(const json& j, PellSolution<Real>& s) {
  detail::expect_keys(j,
                      {"degree", "P", "Q", "c", "monic", "band_root_counts", "residual",
                       "fit_residual_P", "fit_residual_Q", "theta_endpoint_defect", "sup_defect"},
                      "solution");
  detail::expect_keys(j.at("monic"), {"P", "Q", "c"}, "solution.monic");
  s.degree = j.at("degree").get<int>();
  s.P = j.at("P").get<Poly<Real>>();
  s.Q = j.at("Q").get<Poly<Real>>();
  s.c = Real(j.at("c").get<double>());
  s.P_monic = j.at("monic").at("P").get<Poly<Real>>();
  s.Q_monic = j.at("monic").at("Q").get<Poly<Real>>();
  s.c_monic = Real(j.at("monic").at("c").get<double>());
  s.band_root_counts = j.at("band_root_counts").get<std::vector<int>>();
  s.residual = Real(j.at("residual").get<double>());
  s.fit_residual_P = Real(j.at("fit_residual_P").get<double>());
  s.fit_residual_Q = Real(j.at("fit_residual_Q").get<double>());
  s.theta_endpoint_defect = Real(j.at("theta_endpoint_defect").get<double>());
  s.sup_defect = Real(j.at("sup_defect").get<double>());
}

template <typename Real>
void to_json(json& j, const PellCertificate<Real>& c) {
  j = json{{"pass", c.pass},
           {"residual", double(c.residual)},
           {"logderiv_rel_err", double(c.logderiv_rel_err)},
           {"division_rem", double(c.division_rem)},
           {"division_qq_err", double(c.division_qq_err)}};
}

template <typename Real>
void to_json(json& j, const InverseSolveResult<Real>& r) {
  j = json{{"curve", r.curve},
           {"gap_roots", detail::to_doubles(r.gap_roots)},
           {"iterations", r.iterations},
           {"final_residual", double(r.final_residual)},
           {"continuation_path", detail::to_doubles(r.continuation_path)}};
}

template <typename Real>
void from_json(const json& j, InverseSolveResult<Real>& r) {
  detail::expect_keys(j, {"curve", "gap_roots", "iterations", "final_residual",
                          "continuation_path"},
                      "inverse result");
  r.curve = j.at("curve").get<CurveConfig<Real>>();
  r.gap_roots = detail::from_doubles<Real>(j.at("gap_roots"), "gap_roots");
  r.iterations = j.at("iterations").get<int>();
  r.final_residual = Real(j.at("final_residual").get<double>());
  r.continuation_path = detail::from_doubles<Real>(j.at("continuation_path"), "continuation_path");
}

template <typename Real>
void to_json(json& j, const SweepVerdict<Real>& v) {
  j = json{{"g", v.g},
           {"r", v.r},
           {"possible", v.possible},
           {"partition", v.partition},
           {"witness", v.witness ? json(*v.witness) : json(nullptr)},
           {"forward", v.forward ? json(*v.forward) : json(nullptr)},
           {"reason", v.reason}};
}

template <typename Real>
void to_json(json& j, const KDiffReport<Real>& k) {
  j = json{{"g", k.g},
           {"k", k.k},
           {"exists_unique_zero", k.exists_unique_zero},
           {"required_degree", k.required_degree},
           {"zero_order", k.zero_order},
           {"conjugate_range", {k.conjugate_range.first, k.conjugate_range.second}},
           {"witness", k.witness ? json(*k.witness) : json(nullptr)},
           {"note", k.note}};
}

template <typename Real>
void to_json(json& j, const TorsionReport<Real>& t) {
  j = json{{"genus", t.genus},
           {"r_max", t.r_max},
           {"jacobian_trivial", t.jacobian_trivial},
           {"divisor_order", t.divisor_order ? json(*t.divisor_order) : json(nullptr)},
           {"candidate_point_orders", t.candidate_point_orders},
           {"forbidden_range_check", t.forbidden_range_check},
           {"notes", t.notes},
           {"verdict", t.verdict}};
}

template <typename Real>
void to_json(json& j, const DegenerationStep<Real>& s) {
  j = json{{"h_value", double(s.h_value)},
           {"result", s.result},
           {"min_endpoint_gap", double(s.min_endpoint_gap)},
           {"shrink_gap", double(s.shrink_gap)},
           {"r_vector", s.r_vector}};
}

template <typename Real>
void to_json(json& j, const DegenerationFamily<Real>& f) {
  j = json{{"steps", f.steps}, {"completed", f.completed}, {"note", f.note}};
}

}  // namespace pellabel

#endif
