// Command-line surface: forward/inverse Pell-Abel pipelines, torsion and
// k-differential reports, degeneration families, and SVG renderers.
//
// Exit codes: 0 success, 2 negative verdict (e.g. not solvable), 1 error.
// Errors are reported as JSON objects with machine-readable codes.
// PELL_ABEL_PRECISION=double|extended selects the working precision.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pellabel/json_io.hpp"
#include "pellabel/pellabel.hpp"
#include "pellabel/svg.hpp"

namespace {

struct Job {
  std::string command;
  std::string curve_text;  // JSON array of endpoints
  int comb_r = 0;
  std::vector<int> comb_q;
  std::vector<double> comb_h;
  std::vector<int> sweep;  // {g, r} when present
  int g = 0, k = 0;
  std::optional<int> n;
  bool witness = false;
  int r_max = 200;
  double tol = 1e-8;
  std::optional<int> degree;  // fixed degree for detection/synthesis
  bool no_synthesize = false;
  int shrink = 1;
  int steps = 6;
  int max_iter = 80;
  int continuation_steps = 8;
  double solver_tol = 1e-11;
  std::vector<std::string> renders;
  std::string render_prefix = "out";
  std::string out_path;
  std::string job_file;
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw pellabel::validation_error("cannot open output file " + path);
  f << text;
}

void emit(const Job& job, const nlohmann::json& result) {
  const std::string text = result.dump(2) + "\n";
  if (job.out_path.empty())
    std::cout << text;
  else
    write_text(job.out_path, text);
}

bool wants(const Job& job, const std::string& kind) {
  for (const auto& r : job.renders)
    if (r == kind) return true;
  return false;
}

template <typename Real>
pellabel::CurveConfig<Real> parse_curve(const Job& job) {
  if (job.curve_text.empty()) throw pellabel::validation_error("missing --curve");
  nlohmann::json j = nlohmann::json::parse(job.curve_text);
  return j.get<pellabel::CurveConfig<Real>>();
}

template <typename Real>
pellabel::Comb<Real> parse_comb(const Job& job) {
  return pellabel::Comb<Real>(job.comb_r, job.comb_q,
                              std::vector<Real>(job.comb_h.begin(), job.comb_h.end()));
}

template <typename Real>
pellabel::InverseOptions inverse_options(const Job& job) {
  pellabel::InverseOptions opt;
  opt.max_iter = job.max_iter;
  opt.tol = job.solver_tol;
  opt.continuation_steps = job.continuation_steps;
  return opt;
}

/// Comb of a solved curve: ordinates from the partition, lengths r*lambda/pi.
template <typename Real>
pellabel::Comb<Real> comb_of(const pellabel::CanonicalData<Real>& data,
                             const pellabel::PellVerdict<Real>& verdict) {
  std::vector<int> q;
  int acc = 0;
  for (size_t j = 0; j + 1 < verdict.r_vector.size(); ++j) {
    acc += verdict.r_vector[j];
    q.push_back(acc);
  }
  std::vector<Real> h;
  const Real pi = std::numbers::pi_v<Real>;
  for (Real lam : data.lambda) h.push_back(Real(*verdict.degree) * lam / pi);
  return pellabel::Comb<Real>(*verdict.degree, std::move(q), std::move(h));
}

template <typename Real>
void render_all(const Job& job, const pellabel::CurveConfig<Real>* curve,
                const pellabel::CanonicalData<Real>* data,
                const pellabel::PellVerdict<Real>* verdict,
                const pellabel::PellSolution<Real>* sol,
                const pellabel::Comb<Real>* comb) {
  std::optional<pellabel::Comb<Real>> derived;
  const pellabel::Comb<Real>* use_comb = comb;
  if (use_comb == nullptr && data != nullptr && verdict != nullptr && verdict->solvable)
    use_comb = &derived.emplace(comb_of(*data, *verdict));
  if (wants(job, "comb")) {
    if (use_comb == nullptr)
      throw pellabel::validation_error("comb render needs comb data or a solvable curve");
    write_text(job.render_prefix + "_comb.svg", pellabel::render_comb(*use_comb));
  }
  if (wants(job, "flat")) {
    if (use_comb == nullptr)
      throw pellabel::validation_error("flat render needs comb data or a solvable curve");
    write_text(job.render_prefix + "_flat.svg", pellabel::render_flat_surface(*use_comb));
  }
  if (wants(job, "quotient")) {
    if (use_comb == nullptr)
      throw pellabel::validation_error("quotient render needs comb data or a solvable curve");
    write_text(job.render_prefix + "_quotient.svg",
               pellabel::render_flat_surface(*use_comb, true));
  }
  if (wants(job, "solution")) {
    if (curve == nullptr || sol == nullptr)
      throw pellabel::validation_error("solution render needs a synthesized solution");
    write_text(job.render_prefix + "_solution.svg",
               pellabel::render_solution(*curve, *sol,
                                         data != nullptr ? &data->gap_roots : nullptr));
  }
}

template <typename Real>
int run_forward(const Job& job, bool solution_only) {
  const auto curve = parse_curve<Real>(job);
  const auto data = pellabel::canonical(curve);
  pellabel::PellVerdict<Real> verdict =
      job.degree ? pellabel::detect_at(data, *job.degree, Real(job.tol))
                 : pellabel::detect(curve, data, job.r_max, Real(job.tol));
  nlohmann::json out{{"curve", curve}, {"canonical", data}, {"verdict", verdict}};
  std::optional<pellabel::PellSolution<Real>> sol;
  if (verdict.solvable && !job.no_synthesize) {
    sol = pellabel::synthesize(curve, data, verdict);
    out["solution"] = *sol;
    out["certificate"] = pellabel::verify(curve, *sol);
  }
  render_all<Real>(job, &curve, &data, &verdict, sol ? &*sol : nullptr, nullptr);
  if (solution_only) {
    if (!sol) {
      emit(job, nlohmann::json{{"verdict", verdict}});
      return 2;
    }
    emit(job, nlohmann::json(*sol));
    return 0;
  }
  emit(job, out);
  return verdict.solvable ? 0 : 2;
}

template <typename Real>
int run_inverse(const Job& job) {
  if (!job.sweep.empty()) {
    const auto verdict =
        pellabel::existence_sweep<Real>(job.sweep[0], job.sweep[1], inverse_options<Real>(job));
    emit(job, nlohmann::json(verdict));
    return verdict.possible ? 0 : 2;
  }
  const auto comb = parse_comb<Real>(job);
  const auto result = pellabel::solve(comb, inverse_options<Real>(job));
  const auto data = pellabel::canonical(result.curve);
  const auto verdict = pellabel::detect(result.curve, data, comb.r);
  nlohmann::json out{{"comb", comb}, {"result", result}, {"forward", verdict}};
  std::optional<pellabel::PellSolution<Real>> sol;
  if (wants(job, "solution") && verdict.solvable)
    sol = pellabel::synthesize(result.curve, data, verdict);
  render_all<Real>(job, &result.curve, &data, &verdict, sol ? &*sol : nullptr, &comb);
  emit(job, out);
  return 0;
}

template <typename Real>
int run_torsion(const Job& job) {
  const auto curve = parse_curve<Real>(job);
  const auto report = pellabel::torsion_report(curve, job.r_max);
  emit(job, nlohmann::json(report));
  return (report.jacobian_trivial || report.divisor_order) ? 0 : 2;
}

template <typename Real>
int run_kdiff(const Job& job) {
  pellabel::KDiffReport<Real> report =
      job.n ? pellabel::kdiff_conjugate_report<Real>(job.g, job.k, *job.n, job.witness,
                                                     inverse_options<Real>(job))
            : pellabel::kdiff_unique_zero<Real>(job.g, job.k, job.witness,
                                                inverse_options<Real>(job));
  emit(job, nlohmann::json(report));
  return report.exists_unique_zero ? 0 : 2;
}

template <typename Real>
int run_degenerate(const Job& job) {
  const auto comb = parse_comb<Real>(job);
  const auto family =
      pellabel::degeneration_family(comb, job.shrink, job.steps, inverse_options<Real>(job));
  emit(job, nlohmann::json(family));
  return family.completed ? 0 : 1;
}

template <typename Real>
int run_render(const Job& job) {
  if (job.renders.empty()) throw pellabel::validation_error("render needs --render kinds");
  if (!job.curve_text.empty()) {
    return run_forward<Real>(job, false) == 1 ? 1 : 0;
  }
  const auto comb = parse_comb<Real>(job);
  render_all<Real>(job, nullptr, nullptr, nullptr, nullptr, &comb);
  emit(job, nlohmann::json{{"comb", comb}, {"rendered", job.renders}});
  return 0;
}

void load_job_file(Job& job) {
  std::ifstream f(job.job_file);
  if (!f) throw pellabel::validation_error("cannot read job file " + job.job_file);
  nlohmann::json spec = nlohmann::json::parse(f);
  pellabel::detail::expect_keys(spec, {"command", "input", "options"}, "job");
  job.command = spec.at("command").get<std::string>();
  const nlohmann::json& input = spec.at("input");
  if (input.contains("curve")) {
    pellabel::detail::expect_keys(input, {"curve"}, "job.input");
    job.curve_text = input.at("curve").dump();
  } else if (input.contains("comb")) {
    pellabel::detail::expect_keys(input, {"comb"}, "job.input");
    pellabel::detail::expect_keys(input.at("comb"), {"r", "q", "h"}, "job.input.comb");
    job.comb_r = input.at("comb").at("r").get<int>();
    job.comb_q = input.at("comb").at("q").get<std::vector<int>>();
    job.comb_h = input.at("comb").at("h").get<std::vector<double>>();
  } else if (input.contains("sweep")) {
    pellabel::detail::expect_keys(input, {"sweep"}, "job.input");
    pellabel::detail::expect_keys(input.at("sweep"), {"g", "r"}, "job.input.sweep");
    job.sweep = {input.at("sweep").at("g").get<int>(), input.at("sweep").at("r").get<int>()};
  } else if (input.contains("g")) {
    if (input.contains("n")) {
      pellabel::detail::expect_keys(input, {"g", "k", "n"}, "job.input");
      job.n = input.at("n").get<int>();
    } else {
      pellabel::detail::expect_keys(input, {"g", "k"}, "job.input");
    }
    job.g = input.at("g").get<int>();
    job.k = input.at("k").get<int>();
  } else {
    throw pellabel::validation_error("job.input: expected curve, comb, sweep or g/k");
  }
  const nlohmann::json& options = spec.at("options");
  pellabel::detail::expect_keys_subset(options,
                                       {"r_max", "tol", "r", "no_synthesize", "witness", "shrink",
                                        "steps", "max_iter", "continuation_steps", "solver_tol",
                                        "render", "render_prefix", "out"},
                                       "job.options");
  if (options.contains("r_max")) job.r_max = options.at("r_max").get<int>();
  if (options.contains("tol")) job.tol = options.at("tol").get<double>();
  if (options.contains("r")) job.degree = options.at("r").get<int>();
  if (options.contains("no_synthesize")) job.no_synthesize = options.at("no_synthesize").get<bool>();
  if (options.contains("witness")) job.witness = options.at("witness").get<bool>();
  if (options.contains("shrink")) job.shrink = options.at("shrink").get<int>();
  if (options.contains("steps")) job.steps = options.at("steps").get<int>();
  if (options.contains("max_iter")) job.max_iter = options.at("max_iter").get<int>();
  if (options.contains("continuation_steps"))
    job.continuation_steps = options.at("continuation_steps").get<int>();
  if (options.contains("solver_tol")) job.solver_tol = options.at("solver_tol").get<double>();
  if (options.contains("render")) job.renders = options.at("render").get<std::vector<std::string>>();
  if (options.contains("render_prefix"))
    job.render_prefix = options.at("render_prefix").get<std::string>();
  if (options.contains("out")) job.out_path = options.at("out").get<std::string>();
}

template <typename Real>
int dispatch(Job job) {
  if (job.command == "job") load_job_file(job);
  if (job.command == "forward") return run_forward<Real>(job, false);
  if (job.command == "solve") return run_forward<Real>(job, true);
  if (job.command == "inverse") return run_inverse<Real>(job);
  if (job.command == "torsion") return run_torsion<Real>(job);
  if (job.command == "kdiff") return run_kdiff<Real>(job);
  if (job.command == "degenerate") return run_degenerate<Real>(job);
  if (job.command == "render") return run_render<Real>(job);
  throw pellabel::validation_error("unknown command " + job.command);
}

}  // namespace

int main(int argc, char** argv) {
  Job job;
  CLI::App app{"Pell-Abel equation toolkit for totally real hyperelliptic curves"};
  app.require_subcommand(1);
  // --h names comb tooth lengths, so help is long-form only.
  app.set_help_flag("--help", "print help");

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--out", job.out_path, "write the JSON result to a file instead of stdout");
    cmd->add_option("--render", job.renders, "SVG kinds: comb,flat,quotient,solution")
        ->delimiter(',');
    cmd->add_option("--render-prefix", job.render_prefix, "path prefix for SVG files");
  };
  auto add_curve = [&](CLI::App* cmd) {
    cmd->add_option("--curve", job.curve_text, "band endpoints as a JSON array, e.g. [-1,1]");
  };
  auto add_comb = [&](CLI::App* cmd, bool required) {
    auto* r = cmd->add_option("--r", job.comb_r, "comb degree (strip height in units of pi)");
    auto* q = cmd->add_option("--q", job.comb_q, "tooth ordinates")->delimiter(',');
    cmd->add_option("--h", job.comb_h, "tooth lengths")->delimiter(',');
    if (required) {
      (void)r;
      (void)q;
    }
  };
  auto add_solver = [&](CLI::App* cmd) {
    cmd->add_option("--max-iter", job.max_iter, "Newton iteration cap per stage");
    cmd->add_option("--continuation-steps", job.continuation_steps, "tooth-length stages");
    cmd->add_option("--solver-tol", job.solver_tol, "Newton residual tolerance");
  };

  CLI::App* forward = app.add_subcommand("forward", "curve -> periods, verdict, solution");
  add_curve(forward);
  forward->add_option("--rmax", job.r_max, "degree search bound");
  forward->add_option("--tol", job.tol, "integrality detection tolerance");
  CLI::Option* deg_opt = forward->add_option("--degree", "test/synthesize a fixed degree");
  forward->add_flag("--no-synthesize", job.no_synthesize, "stop after the verdict");
  add_common(forward);

  CLI::App* solve_cmd = app.add_subcommand("solve", "curve -> explicit solution (P, Q, c)");
  add_curve(solve_cmd);
  solve_cmd->add_option("--rmax", job.r_max, "degree search bound");
  solve_cmd->add_option("--tol", job.tol, "integrality detection tolerance");
  CLI::Option* deg_opt2 = solve_cmd->add_option("--degree", "solve at a fixed degree");
  add_common(solve_cmd);

  CLI::App* inverse = app.add_subcommand("inverse", "comb -> curve (parameter problem)");
  add_comb(inverse, false);
  inverse->add_option("--sweep", job.sweep, "existence sweep: g,r")->delimiter(',')->expected(2);
  add_solver(inverse);
  add_common(inverse);

  CLI::App* torsion = app.add_subcommand("torsion", "curve -> torsion order report");
  add_curve(torsion);
  torsion->add_option("--rmax", job.r_max, "order search bound");
  add_common(torsion);

  CLI::App* kdiff = app.add_subcommand("kdiff", "k-differential existence gates");
  kdiff->add_option("--g", job.g, "genus")->required();
  kdiff->add_option("--k", job.k, "differential order")->required();
  CLI::Option* n_opt = kdiff->add_option("--n", "conjugate-support divisor order");
  kdiff->add_flag("--witness", job.witness, "construct a witness curve");
  add_solver(kdiff);
  add_common(kdiff);

  CLI::App* degenerate = app.add_subcommand("degenerate", "shrink one tooth geometrically");
  add_comb(degenerate, true);
  degenerate->add_option("--shrink", job.shrink, "index of the tooth to shrink (1-based)");
  degenerate->add_option("--steps", job.steps, "number of halvings");
  add_solver(degenerate);
  add_common(degenerate);

  CLI::App* render = app.add_subcommand("render", "SVG output without a full pipeline");
  add_curve(render);
  add_comb(render, false);
  add_common(render);

  CLI::App* jobcmd = app.add_subcommand("job", "run a JSON job specification");
  jobcmd->add_option("file", job.job_file, "job JSON file")->required();

  for (CLI::App* sub : app.get_subcommands({})) sub->set_help_flag("--help", "print help");

  CLI11_PARSE(app, argc, argv);

  if (deg_opt->count()) job.degree = deg_opt->as<int>();
  if (deg_opt2->count()) job.degree = deg_opt2->as<int>();
  if (n_opt->count()) job.n = n_opt->as<int>();
  job.command = app.get_subcommands().front()->get_name();

  const char* precision_env = std::getenv("PELL_ABEL_PRECISION");
  std::string precision = precision_env ? precision_env : "double";

  try {
    if (precision == "double") return dispatch<double>(job);
    if (precision == "extended") return dispatch<long double>(job);
    throw pellabel::validation_error("PELL_ABEL_PRECISION must be 'double' or 'extended'");
  } catch (const pellabel::error& e) {
    std::cout << nlohmann::json{{"error", {{"code", e.code()}, {"message", e.what()}}}}.dump(2)
              << "\n";
    return 1;
  } catch (const nlohmann::json::exception& e) {
    std::cout << nlohmann::json{{"error", {{"code", "malformed_json"}, {"message", e.what()}}}}
                     .dump(2)
              << "\n";
    return 1;
  }
}
