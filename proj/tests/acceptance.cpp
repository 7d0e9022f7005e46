// Acceptance suite: end-to-end criteria with pinned tolerances, one pass/fail
// line each. Exits nonzero when any criterion fails. An optional argv[1]
// names the CLI binary, used by the byte-determinism criterion; without it
// that criterion falls back to library-level output comparison.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pellabel/json_io.hpp"
#include "pellabel/pellabel.hpp"

using pellabel::CanonicalData;
using pellabel::Comb;
using pellabel::CurveConfig;
using pellabel::PellSolution;
using pellabel::PellVerdict;
using pellabel::Poly;

namespace {

int g_failures = 0;

struct Criterion {
  int id;
  std::string name;
  std::function<bool(std::string&)> run;
};

void run_criterion(const Criterion& c) {
  std::string detail;
  bool ok = false;
  const auto start = std::chrono::steady_clock::now();
  try {
    ok = c.run(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("[%s] criterion %2d: %s (%.2fs)%s%s\n", ok ? "PASS" : "FAIL", c.id, c.name.c_str(),
              secs, detail.empty() ? "" : " -- ", detail.c_str());
  if (!ok) ++g_failures;
}

bool within(double value, double target, double tol) { return std::abs(value - target) <= tol; }

pellabel::CurveConfig<double> random_curve(std::mt19937& rng, int genus) {
  std::uniform_real_distribution<double> width(0.2, 1.0);
  std::uniform_real_distribution<double> start(-3.0, -2.0);
  std::vector<double> e;
  double pos = start(rng);
  e.push_back(pos);
  for (int i = 0; i < 2 * genus + 1; ++i) {
    pos += width(rng);
    e.push_back(pos);
  }
  return pellabel::CurveConfig<double>(std::move(e));
}

std::string cli_path;  // set from argv[1] when provided

bool run_cli(const std::string& args) {
  const std::string cmd = cli_path + " " + args;
  return std::system(cmd.c_str()) == 0;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// --- criteria -------------------------------------------------------------

bool chebyshev_recovery(std::string& detail) {
  const auto start = std::chrono::steady_clock::now();
  const CurveConfig<double> curve({-1.0, 1.0});
  const CanonicalData<double> data = pellabel::canonical(curve);
  const PellVerdict<double> verdict = pellabel::detect_at(data, 5);
  if (!verdict.solvable) {
    detail = "degree 5 not certified on the unit band";
    return false;
  }
  const PellSolution<double> sol = pellabel::synthesize(curve, data, verdict);
  const std::vector<double> t5{0.0, 5.0, 0.0, -20.0, 0.0, 16.0};
  for (int i = 0; i <= 5; ++i)
    if (!within(sol.P[i], t5[static_cast<size_t>(i)], 1e-9)) {
      detail = "coefficient " + std::to_string(i) + " off by " +
               std::to_string(sol.P[i] - t5[static_cast<size_t>(i)]);
      return false;
    }
  if (!(sol.residual < 1e-10)) {
    detail = "equation residual " + std::to_string(sol.residual);
    return false;
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs >= 1.0) {
    detail = "runtime " + std::to_string(secs) + "s exceeds 1s";
    return false;
  }
  return true;
}

bool genus1_closed_form(std::string& detail) {
  const CurveConfig<double> curve({-2.0, -1.0, 1.0, 2.0});
  const CanonicalData<double> data = pellabel::canonical(curve);
  if (!(within(data.R[1], 1.0, 1e-10) && std::abs(data.R[0]) < 1e-10)) {
    detail = "canonical polynomial is not x";
    return false;
  }
  const double half_pi = std::numbers::pi / 2;
  if (!within(data.eta_abs[0], half_pi, 1e-9) || !within(data.eta_abs[1], half_pi, 1e-9)) {
    detail = "imaginary periods differ from pi/2";
    return false;
  }
  const PellVerdict<double> verdict = pellabel::detect(curve, data, 10);
  if (!verdict.solvable || *verdict.degree != 2 || verdict.r_vector != std::vector<int>{1, 1}) {
    detail = "detection did not return r = 2 with partition (1,1)";
    return false;
  }
  const PellSolution<double> sol = pellabel::synthesize(curve, data, verdict);
  const bool monic_ok = within(sol.P_monic[2], 1.0, 1e-8) && within(sol.P_monic[1], 0.0, 1e-8) &&
                        within(sol.P_monic[0], -2.5, 1e-8) && sol.Q_monic.degree() == 0 &&
                        within(sol.Q_monic[0], 1.0, 1e-8) && within(sol.c_monic, 2.25, 1e-8);
  if (!monic_ok) {
    detail = "monic solution differs from (x^2 - 5/2, 1, 9/4)";
    return false;
  }
  return true;
}

bool residue_identity(std::string& detail) {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937 rng(1234);
  for (int genus = 1; genus <= 3; ++genus) {
    for (int trial = 0; trial < 50; ++trial) {
      const CurveConfig<double> curve = random_curve(rng, genus);
      const CanonicalData<double> data = pellabel::canonical(curve);
      if (!(data.residue_defect < 1e-8)) {
        detail = "residue defect " + std::to_string(data.residue_defect);
        return false;
      }
      if (static_cast<int>(data.gap_roots.size()) != genus) {
        detail = "gap root count mismatch";
        return false;
      }
      for (int j = 1; j <= genus; ++j)
        if (!(data.gap_roots[static_cast<size_t>(j - 1)] > curve.gap_lo(j) &&
              data.gap_roots[static_cast<size_t>(j - 1)] < curve.gap_hi(j))) {
          detail = "gap root escaped its gap";
          return false;
        }
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs >= 30.0) {
    detail = "runtime " + std::to_string(secs) + "s exceeds 30s";
    return false;
  }
  return true;
}

bool constructive_existence(std::string& detail) {
  const auto start = std::chrono::steady_clock::now();
  for (int genus = 1; genus <= 3; ++genus) {
    for (int r = genus + 1; r <= genus + 4; ++r) {
      const auto sweep = pellabel::existence_sweep<double>(genus, r);
      if (!sweep.possible || !sweep.witness || !sweep.forward) {
        detail = "sweep failed at g=" + std::to_string(genus) + ", r=" + std::to_string(r);
        return false;
      }
      if (*sweep.forward->degree != r || sweep.forward->r_vector != sweep.partition) {
        detail = "forward detection mismatch at g=" + std::to_string(genus) +
                 ", r=" + std::to_string(r);
        return false;
      }
      // Round-trip tooth lengths: the witness comb used h_j = 1.
      const CanonicalData<double> data = pellabel::canonical(sweep.witness->curve);
      for (double lam : data.lambda) {
        const double h_back = r * lam / std::numbers::pi;
        if (!within(h_back, 1.0, 1e-6)) {
          detail = "tooth length drifted to " + std::to_string(h_back);
          return false;
        }
      }
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs >= 60.0) {
    detail = "runtime " + std::to_string(secs) + "s exceeds 60s";
    return false;
  }
  return true;
}

bool impossibility_half(std::string& detail) {
  std::mt19937 rng(4321);
  for (int genus = 2; genus <= 3; ++genus) {
    for (int trial = 0; trial < 100; ++trial) {
      const CurveConfig<double> curve = random_curve(rng, genus);
      const CanonicalData<double> data = pellabel::canonical(curve);
      const PellVerdict<double> verdict = pellabel::detect(curve, data, genus);
      if (verdict.solvable) {
        detail = "detector certified r <= g on a random curve";
        return false;
      }
    }
  }
  // Pigeonhole verdict without solving.
  for (int genus = 2; genus <= 3; ++genus)
    for (int r = 1; r <= genus; ++r) {
      const auto sweep = pellabel::existence_sweep<double>(genus, r);
      if (sweep.possible || sweep.reason.empty()) {
        detail = "pigeonhole verdict missing for r <= g";
        return false;
      }
    }
  return true;
}

bool root_count_identity(std::string& detail) {
  struct Case {
    CurveConfig<double> curve;
    int r_max;
  };
  const std::vector<Case> cases{{CurveConfig<double>({-1.0, 1.0}), 7},
                                {CurveConfig<double>({-2.0, -1.0, 1.0, 2.0}), 10}};
  for (const auto& cs : cases) {
    const CanonicalData<double> data = pellabel::canonical(cs.curve);
    const PellVerdict<double> verdict = pellabel::detect(cs.curve, data, cs.r_max);
    const PellSolution<double> sol = pellabel::synthesize(cs.curve, data, verdict);
    if (sol.band_root_counts != verdict.r_vector) {
      detail = "root counts differ from the partition";
      return false;
    }
    const Poly<double> dp = sol.P.derivative();
    for (int j = 0; j <= cs.curve.genus(); ++j) {
      std::vector<double> ext{cs.curve.band_lo(j)};
      for (double t : pellabel::roots_in_interval(dp, cs.curve.band_lo(j), cs.curve.band_hi(j)))
        ext.push_back(t);
      ext.push_back(cs.curve.band_hi(j));
      if (static_cast<int>(ext.size()) !=
          verdict.r_vector[static_cast<size_t>(j)] + 1) {
        detail = "extremal point count off";
        return false;
      }
      double prev = 0;
      for (size_t i = 0; i < ext.size(); ++i) {
        const double val = sol.P(ext[i]);
        if (std::abs(std::abs(val) - 1.0) > 1e-7) {
          detail = "extremum misses the guide lines by " +
                   std::to_string(std::abs(std::abs(val) - 1.0));
          return false;
        }
        if (i > 0 && prev * val >= 0) {
          detail = "extrema do not alternate";
          return false;
        }
        prev = val;
      }
    }
  }
  // The degree-3 genus-2 witness exercises an asymmetric multi-band curve.
  const auto sweep = pellabel::existence_sweep<double>(2, 3);
  const CanonicalData<double> data = pellabel::canonical(sweep.witness->curve);
  const PellVerdict<double> verdict = pellabel::detect(sweep.witness->curve, data, 3);
  const PellSolution<double> sol = pellabel::synthesize(sweep.witness->curve, data, verdict);
  if (sol.band_root_counts != verdict.r_vector) {
    detail = "witness root counts differ from the partition";
    return false;
  }
  return true;
}

bool kdiff_gate(std::string& detail) {
  for (int g = 2; g <= 6; ++g)
    for (int k = 1; k <= 6; ++k) {
      const auto report = pellabel::kdiff_unique_zero<double>(g, k);
      const bool expected = !(g == 2 && k == 2);
      if (report.exists_unique_zero != expected) {
        detail = "gate wrong at g=" + std::to_string(g) + ", k=" + std::to_string(k);
        return false;
      }
    }
  const auto w23 = pellabel::kdiff_unique_zero<double>(2, 3, true);
  const auto w32 = pellabel::kdiff_unique_zero<double>(3, 2, true);
  if (!w23.witness || !w32.witness) {
    detail = "witness construction failed";
    return false;
  }
  return true;
}

bool torsion_consistency(std::string& detail) {
  const CurveConfig<double> curve({-2.0, -1.0, 1.0, 2.0});
  const auto report = pellabel::torsion_report(curve, 50);
  if (!report.divisor_order || *report.divisor_order != 2 ||
      report.candidate_point_orders != std::vector<int>{2, 4}) {
    detail = "genus-1 torsion report is wrong";
    return false;
  }
  std::mt19937 rng(99);
  for (int genus = 1; genus <= 3; ++genus) {
    for (int trial = 0; trial < 10; ++trial) {
      const auto rep = pellabel::torsion_report(random_curve(rng, genus), 30);
      if (rep.divisor_order && *rep.divisor_order >= 2 && *rep.divisor_order <= genus) {
        detail = "an order in [2, g] was reported";
        return false;
      }
    }
  }
  // Solvable witnesses of every tested genus also stay above the genus.
  for (int genus = 1; genus <= 3; ++genus) {
    const auto sweep = pellabel::existence_sweep<double>(genus, genus + 2);
    const auto rep = pellabel::torsion_report(sweep.witness->curve, 2 * genus + 4);
    if (!rep.divisor_order || *rep.divisor_order <= genus) {
      detail = "witness order not above the genus";
      return false;
    }
  }
  return true;
}

bool degeneration_family_criterion(std::string& detail) {
  const auto start = std::chrono::steady_clock::now();
  const Comb<double> comb(3, {1, 2}, {1.0, 1.0});
  const auto family = pellabel::degeneration_family(comb, 1, 6);
  if (!family.completed || family.steps.size() != 6) {
    detail = "family ended early: " + family.note;
    return false;
  }
  // The monotone gap along a pinching family is the width of the gap being
  // pinched; the global minimum switches features while the bands rebalance.
  double prev_gap = std::numeric_limits<double>::infinity();
  for (const auto& step : family.steps) {
    if (step.r_vector != std::vector<int>{1, 1, 1}) {
      detail = "partition drifted during the degeneration";
      return false;
    }
    if (!(step.shrink_gap < prev_gap)) {
      detail = "pinched gap is not strictly decreasing";
      return false;
    }
    prev_gap = step.shrink_gap;
  }
  if (!(family.steps.back().min_endpoint_gap == family.steps.back().shrink_gap)) {
    detail = "the pinched gap has not become the global minimum by the last step";
    return false;
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs >= 120.0) {
    detail = "runtime " + std::to_string(secs) + "s exceeds 120s";
    return false;
  }
  return true;
}

bool determinism(std::string& detail) {
  if (!cli_path.empty()) {
    const std::string quiet = " > /dev/null 2>&1";
    const bool ok =
        run_cli("forward --curve [-2,-1,1,2] --out det_a.json --render solution "
                "--render-prefix det_a" + quiet) &&
        run_cli("forward --curve [-2,-1,1,2] --out det_b.json --render solution "
                "--render-prefix det_b" + quiet) &&
        run_cli("inverse --r 3 --q 1,2 --h 1.0,1.0 --out det_ia.json --render comb,flat "
                "--render-prefix det_ia" + quiet) &&
        run_cli("inverse --r 3 --q 1,2 --h 1.0,1.0 --out det_ib.json --render comb,flat "
                "--render-prefix det_ib" + quiet);
    if (!ok) {
      detail = "CLI invocation failed";
      return false;
    }
    if (slurp("det_a.json") != slurp("det_b.json") || slurp("det_a.json").empty()) {
      detail = "forward JSON differs between runs";
      return false;
    }
    if (slurp("det_a_solution.svg") != slurp("det_b_solution.svg") ||
        slurp("det_a_solution.svg").empty()) {
      detail = "solution SVG differs between runs";
      return false;
    }
    if (slurp("det_ia.json") != slurp("det_ib.json") ||
        slurp("det_ia_comb.svg") != slurp("det_ib_comb.svg") ||
        slurp("det_ia_flat.svg") != slurp("det_ib_flat.svg")) {
      detail = "inverse outputs differ between runs";
      return false;
    }
    return true;
  }
  // Library-level fallback.
  const CurveConfig<double> curve({-2.0, -1.0, 1.0, 2.0});
  const pellabel::json a = pellabel::canonical(curve);
  const pellabel::json b = pellabel::canonical(curve);
  if (a.dump() != b.dump()) {
    detail = "canonical JSON differs";
    return false;
  }
  const Comb<double> comb(3, {1, 2}, {1.0, 1.0});
  if (pellabel::render_comb(comb) != pellabel::render_comb(comb)) {
    detail = "comb SVG differs";
    return false;
  }
  detail = "library-level only (no CLI path given)";
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) cli_path = argv[1];
  const std::vector<Criterion> criteria{
      {1, "degree-5 solution on the unit band is the Chebyshev polynomial", chebyshev_recovery},
      {2, "symmetric genus-1 curve: closed-form periods and solution", genus1_closed_form},
      {3, "residue identity and one gap root per gap on random curves", residue_identity},
      {4, "witness curves exist for every g < r <= g+4, with exact round-trip",
       constructive_existence},
      {5, "no degree at or below the genus is ever certified", impossibility_half},
      {6, "band root counts equal the partition; extrema equioscillate", root_count_identity},
      {7, "unique-zero gate is false exactly at (g,k) = (2,2)", kdiff_gate},
      {8, "torsion orders: genus-1 candidates {2,4}; never in [2,g]", torsion_consistency},
      {9, "tooth-shrinking family stays verified with closing gaps",
       degeneration_family_criterion},
      {10, "byte-identical JSON and SVG across repeated runs", determinism},
  };
  for (const auto& c : criteria) run_criterion(c);
  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all %d criteria passed\n", static_cast<int>(criteria.size()));
  return 0;
}
