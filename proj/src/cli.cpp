#include "gelfand/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>

#include "CLI11.hpp"
#include "gelfand/conformal.hpp"
#include "gelfand/constants.hpp"
#include "gelfand/continuation.hpp"
#include "gelfand/errors.hpp"
#include "gelfand/identities.hpp"
#include "gelfand/monotone.hpp"
#include "gelfand/parallel.hpp"
#include "gelfand/report.hpp"
#include "gelfand/shooting.hpp"
#include "gelfand/spectrum.hpp"

namespace gelfand {

using json = nlohmann::json;
namespace fs = std::filesystem;

void RunConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) fail(ErrorCode::InvalidArgument, std::string(name) + " must be > 0");
  };
  positive(tol, "--tol");
  positive(refine_tol, "--refine-tol");
  positive(seed_span, "--seed-span");
  positive(horizon, "--horizon");
  if (grid < 200) fail(ErrorCode::InvalidArgument, "--grid must be >= 200");
  if (samples < 2) fail(ErrorCode::InvalidArgument, "--samples must be >= 2");
  if (!(fraction > 0.0 && fraction < 1.0)) fail(ErrorCode::InvalidArgument, "--fraction must lie in (0, 1)");
  if (!(start_weight >= 0.0 && start_weight <= 1.0)) fail(ErrorCode::InvalidArgument, "--start-weight must lie in [0, 1]");
  if (order != 2 && order != 4) fail(ErrorCode::InvalidArgument, "--order must be 2 or 4");
  if (order == 4 && dim < 4) fail(ErrorCode::InvalidArgument, "order 4 needs --dim >= 4");
  if (dim < 2) fail(ErrorCode::InvalidArgument, "--dim must be >= 2");
}

json RunConfig::to_json() const {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = command;
  j["order"] = order;
  j["dim"] = dim;
  j["g"] = g;
  j["lambda"] = has_lambda ? json(lambda) : json(nullptr);
  j["tol"] = tol;
  j["refine_tol"] = refine_tol;
  j["grid"] = grid;
  j["samples"] = samples;
  j["after_fold"] = after_fold;
  j["mu1_every"] = mu1_every;
  j["seed_span"] = seed_span;
  j["fraction"] = fraction;
  j["start_weight"] = start_weight;
  j["check"] = check;
  j["metric"] = metric;
  j["scale"] = scale;
  j["horizon"] = horizon;
  return j;
}

namespace {

ProblemSpec problem_from(const RunConfig& c) {
  ProblemSpec p = c.order == 2 ? ProblemSpec::second_order(c.dim) : ProblemSpec::fourth_order(c.dim);
  if (!c.g.empty()) p.nonlinearity = nonlinearity_from_string(c.g);
  if (c.has_lambda) p.lambda = c.lambda;
  p.validate();
  return p;
}

double need_lambda(const RunConfig& c) {
  if (!c.has_lambda) fail(ErrorCode::InvalidArgument, c.command + " needs --lambda");
  return c.lambda;
}

json header(const RunConfig& c, const ProblemSpec& p) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["config"] = c.to_json();
  j["problem"] = problem_json(p);
  j["constants"] = constants_json(reference_constants(p.n));
  return j;
}

std::string stem(const ProblemSpec& p) {
  return "o" + std::to_string(p.order) + "_n" + std::to_string(p.n) + "_" + to_string(p.nonlinearity);
}

fs::path out_path(const RunConfig& c, const std::string& explicit_path, const std::string& fallback) {
  if (!explicit_path.empty()) return explicit_path;
  return fs::path(c.out_dir) / fallback;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void emit(const RunConfig& c, const json& j, std::ostream& out) {
  if (c.json_out.empty()) {
    out << dump(j);
  } else {
    write_atomic(c.json_out, dump(j));
  }
}

Branch trace(const ProblemSpec& tmpl, int after_fold) {
  StopCriteria stop;
  stop.points_after_fold = after_fold;
  return trace_branch(tmpl, lambda_zero_solution(tmpl), {}, stop);
}

json solution_json(const RadialSolution& s) {
  json j;
  j["u0"] = s.shooting_params.at(0);
  j["w0"] = s.shooting_params.size() > 1 ? json(s.shooting_params[1]) : json(nullptr);
  j["delta_u_at_1"] = s.delta_u_at_1;
  j["boundary_residual"] = s.boundary_residual;
  j["newton_iterations"] = s.newton_iterations;
  return j;
}

json report_json(const IdentityReport& r, bool details = false) {
  json j;
  j["name"] = r.name;
  j["residual"] = r.residual;
  j["tolerance"] = r.tolerance;
  j["pass"] = r.pass;
  j["value"] = r.value;
  if (details) {
    json d = json::array();
    for (const auto& [x, y] : r.details) d.push_back({x, y});
    j["details"] = d;
  }
  return j;
}

std::string tol_label(double tol) {
  const double e = std::round(std::log10(tol));
  if (std::fabs(tol - std::pow(10.0, e)) <= 1e-12 * tol) return "1e" + std::to_string(int(e));
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", tol);
  return buf;
}

// ---------------------------------------------------------------- commands

json cmd_solve(const RunConfig& c) {
  const ProblemSpec p = problem_from(c);
  need_lambda(c);
  const auto sols = find_all_solutions(p, default_seed_box(p, c.seed_span), c.tol);
  json j = header(c, p);
  j["solutions"] = json::array();
  for (const auto& s : sols) j["solutions"].push_back(solution_json(s));
  return j;
}

std::vector<std::optional<double>> sample_mu1(const Branch& b, int every, int grid) {
  std::vector<std::optional<double>> mu(b.points.size());
  if (every <= 0) return mu;
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < b.points.size(); i += every) idx.push_back(i);
  const auto vals = parallel_map(idx.size(), [&](std::size_t k) {
    const auto& pt = b.points[idx[k]];
    const ProblemSpec p = b.problem.with_lambda(pt.lambda);
    return mu1(p, evaluate_solution(p, pt.params), grid).mu1;
  });
  for (std::size_t k = 0; k < idx.size(); ++k) mu[idx[k]] = vals[k];
  return mu;
}

json cmd_branch(const RunConfig& c, std::ostream& out) {
  const ProblemSpec p = problem_from(c);
  const Branch b = trace(p, c.after_fold < 0 ? 60 : c.after_fold);
  const auto mu = sample_mu1(b, c.mu1_every, c.grid);
  const fs::path csv = out_path(c, c.csv, "branch_" + stem(p) + ".csv");
  const fs::path svg = out_path(c, c.svg, "branch_" + stem(p) + ".svg");
  write_atomic(csv, branch_csv(b, mu));
  write_atomic(svg, branch_svg(b, std::nullopt, stem(p)));
  json j = header(c, p);
  j["points"] = b.points.size();
  j["fold_index"] = b.fold_index ? json(*b.fold_index) : json(nullptr);
  j["lambda_fold_coarse"] = b.lambda_star;
  j["csv"] = csv.string();
  j["svg"] = svg.string();
  out << "branch: " << b.points.size() << " points -> " << csv.string() << "\n";
  return j;
}

struct LambdaStarRun {
  Branch branch;
  LambdaStarEstimate estimate;
  json report;
};

LambdaStarRun lambda_star_run(const RunConfig& c) {
  const ProblemSpec p = problem_from(c);
  LambdaStarRun run;
  run.branch = trace(p, c.after_fold < 0 ? 30 : c.after_fold);
  run.estimate = find_lambda_star(run.branch, std::min(1e-8, 1e-3 * c.refine_tol));
  if (run.estimate.error > c.refine_tol)
    fail(ErrorCode::ToleranceFailure, "fold refinement did not reach --refine-tol");
  const fs::path csv = out_path(c, c.csv, "lambda_star_" + stem(p) + ".csv");
  write_atomic(csv, branch_csv(run.branch));
  if (!c.svg.empty()) write_atomic(c.svg, branch_svg(run.branch, run.estimate.value, stem(p)));
  json j = header(c, p);
  const auto k = reference_constants(p.n);
  j["lambda_star"] = run.estimate.value;
  j["refinement_change"] = run.estimate.error;
  j["uncertainty"] = c.refine_tol;
  j["evaluations"] = run.estimate.evaluations;
  j["points"] = run.branch.points.size();
  if (p.order == 2) {
    j["closed_form"] = k.lambda_star_2nd;
  } else {
    j["conjectured"] = k.lambda_conj_4th ? json(*k.lambda_conj_4th) : json(nullptr);
    j["round_rhs"] = k.q_rhs ? json(*k.q_rhs) : json(nullptr);
  }
  j["csv"] = csv.filename().string();
  run.report = std::move(j);
  return run;
}

std::string lambda_star_line(double value, double tol) {
  const int decimals = std::max(0, int(std::ceil(-std::log10(tol) - 1e-9)));
  char buf[96];
  std::snprintf(buf, sizeof buf, "lambda_star ≈ %.*f ± %s", decimals, value, tol_label(tol).c_str());
  return buf;
}

json cmd_lambda_star(const RunConfig& c, std::ostream& out) {
  auto run = lambda_star_run(c);
  out << lambda_star_line(run.estimate.value, c.refine_tol) << "\n";
  return run.report;
}

json cmd_identities(const RunConfig& c) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["config"] = c.to_json();
  j["constants"] = constants_json(reference_constants(c.dim));
  j["check"] = c.check;
  const int n = c.dim;
  if (c.check == "pohozaev-roots") {
    const double l = need_lambda(c);
    auto [a, b] = pohozaev_roots(n, l);
    if (a > b) std::swap(a, b);
    j["lambda"] = l;
    j["discriminant"] = pohozaev_discriminant(n, l);
    j["roots"] = {a, b};
  } else if (c.check == "pohozaev-discriminant") {
    const double degenerate = double(n) * n * n * (n - 4) / 16.0;
    const double l = c.has_lambda ? c.lambda : degenerate;
    j["lambda"] = l;
    j["lambda_degenerate"] = degenerate;
    j["discriminant"] = pohozaev_discriminant(n, l);
  } else if (c.check == "pohozaev-boundary" || c.check == "barrier") {
    RunConfig cc = c;
    cc.order = 4;
    const ProblemSpec p = problem_from(cc);
    const double l = need_lambda(c);
    const auto sols = find_all_solutions(p, default_seed_box(p, c.seed_span), c.tol);
    j["lambda"] = l;
    j["solutions"] = json::array();
    for (const auto& s : sols) {
      json e = solution_json(s);
      if (c.check == "barrier") {
        e["barrier"] = report_json(barrier_check(s, n));
      } else {
        e["boundary"] = report_json(pohozaev_boundary_residual(s, n, l));
        e["interior"] = report_json(pohozaev_interior(s.profile, n, l));
      }
      j["solutions"].push_back(e);
    }
  } else if (c.check == "first-integral") {
    const double l = c.has_lambda ? c.lambda : 6.0;
    const auto v = integrate_cylinder_ivp(l, -1.0, 0.0, c.horizon, 1e-12);
    j["lambda"] = l;
    j["trajectory"] = "v(0)=v'(0)=0, v''(0)=-1, v'''(0)=0";
    j["conservation"] = report_json(first_integral_series(v, l));
    json sup = json::array();
    for (const auto& [forcing, v2, v3] : std::vector<std::tuple<double, double, double>>{
             {l + 1.0, -1.0, 0.0}, {l + 2.0, -1.5, 1.0}, {l + 0.5, -0.5, -0.2}}) {
      json e = report_json(supersolution_first_integral(l, forcing, v2, v3, c.horizon));
      e["forcing"] = forcing;
      e["v2_0"] = v2;
      e["v3_0"] = v3;
      sup.push_back(e);
    }
    j["supersolutions"] = sup;
  } else {
    fail(ErrorCode::InvalidArgument, "unknown --check '" + c.check + "'");
  }
  return j;
}

struct Bracket {
  Branch branch;
  double fold = 0.0;
};

Bracket fold_bracket(const ProblemSpec& p, int after_fold) {
  Bracket b{trace(p, after_fold), 0.0};
  b.fold = find_lambda_star(b.branch, 1e-8).value;
  return b;
}

json cmd_iterate(const RunConfig& c) {
  RunConfig cc = c;
  cc.order = 4;
  const ProblemSpec tmpl = problem_from(cc);
  const Bracket br = fold_bracket(tmpl, c.after_fold < 0 ? 400 : c.after_fold);
  const double l = c.has_lambda ? c.lambda : c.fraction * br.fold;
  if (!(l > 0.0 && l < br.fold)) fail(ErrorCode::BeyondFold, "iterate needs 0 < lambda < fold");
  const ProblemSpec p = tmpl.with_lambda(l);
  const auto lo = minimal_solution(p, l, br.branch);
  const auto hi = upper_solution(p, l, br.branch);
  const auto start = blend_profiles(lo.profile, hi.profile, c.start_weight);
  auto [sol, log] = iterate_minimal(p, start, 1e-8, 500);
  double worst = -INFINITY;
  for (double v : log.monotone_violations) worst = std::max(worst, v);
  json j = header(c, p);
  j["lambda"] = l;
  j["fold"] = br.fold;
  j["iterations"] = log.sup_norm_deltas.size();
  j["converged"] = log.converged;
  j["monotonicity_broken"] = log.monotonicity_broken;
  j["max_violation"] = worst;
  j["distance_to_minimal"] = sup_distance(sol.profile.u, lo.profile.u);
  j["minimal_u0"] = lo.u0();
  if (p.n >= 5) {
    double margin = INFINITY;
    for (const auto& it : log.iterates) margin = std::min(margin, barrier_check(it, p.n).value);
    j["barrier_min_margin"] = margin;
  }
  return j;
}

json cmd_spectrum(const RunConfig& c) {
  const ProblemSpec tmpl = problem_from(c);
  json j = header(c, tmpl);
  if (c.has_lambda) {
    const Bracket br = fold_bracket(tmpl, c.after_fold < 0 ? 30 : c.after_fold);
    const ProblemSpec p = tmpl.with_lambda(c.lambda);
    const auto s = minimal_solution(p, c.lambda, br.branch);
    const auto r = mu1(p, s, c.grid);
    j["lambda"] = c.lambda;
    j["fold"] = br.fold;
    j["label"] = r.label;
    j["mu1"] = r.mu1;
    j["mu1_coarse"] = r.mu1_coarse;
    j["discretization_error_estimate"] = r.discretization_error_estimate;
    j["sign_changes"] = r.sign_changes;
    j["grid_size"] = r.grid_size;
    return j;
  }
  const Bracket br = fold_bracket(tmpl, c.after_fold < 0 ? 30 : c.after_fold);
  const auto bs = mu1_along_branch(br.branch, c.samples, std::min(c.grid, 400));
  j["fold"] = br.fold;
  j["lambda_at_zero"] = bs.lambda_at_zero ? json(*bs.lambda_at_zero) : json(nullptr);
  j["relative_gap"] = bs.lambda_at_zero ? json(std::fabs(*bs.lambda_at_zero - br.fold) / br.fold) : json(nullptr);
  j["samples"] = json::array();
  for (const auto& s : bs.samples)
    j["samples"].push_back({{"s", s.s}, {"lambda", s.lambda}, {"mu1", s.mu1}, {"segment", s.segment}});
  return j;
}

json rigidity_json(const RadialConformalMetric& m) {
  const auto rep = rigidity_hypothesis_report(m);
  json j;
  j["all_pass"] = rep.all_pass;
  j["zero_margins"] = rep.zero_margins;
  j["distance_to_round"] = rep.distance_to_round;
  j["verdict"] = rep.verdict;
  j["hypotheses"] = json::array();
  for (const auto& h : rep.hypotheses) j["hypotheses"].push_back({{"name", h.name}, {"pass", h.pass}, {"margin", h.margin}});
  return j;
}

json cmd_rigidity(const RunConfig& c) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["config"] = c.to_json();
  j["constants"] = constants_json(reference_constants(c.dim));
  j["metric"] = c.metric;
  const auto grid = uniform_grid(1000);
  if (c.metric == "round") {
    j["report"] = rigidity_json(RadialConformalMetric::round(c.dim, grid));
  } else if (c.metric == "scaled") {
    j["scale"] = c.scale;
    j["report"] = rigidity_json(RadialConformalMetric::round(c.dim, grid).scaled(c.scale));
  } else if (c.metric == "solution") {
    RunConfig cc = c;
    cc.order = 4;
    const ProblemSpec p = problem_from(cc);
    const double l = need_lambda(c);
    const auto sols = find_all_solutions(p, default_seed_box(p, c.seed_span), c.tol);
    j["lambda"] = l;
    j["solutions"] = json::array();
    for (const auto& s : sols) {
      json e = solution_json(s);
      e["report"] = rigidity_json(RadialConformalMetric::from_solution(s));
      j["solutions"].push_back(e);
    }
  } else if (c.metric == "cylinder") {
    const double l = c.has_lambda ? c.lambda : 6.0;
    CylinderBvpOptions opt;
    opt.enforce_nonnegative_v3 = true;
    const auto v = solve_cylinder_bvp(l, c.horizon, {-1.2, 0.5}, 1e-10, opt);
    const auto m = RadialConformalMetric::from_cylinder(v);
    const auto T = t_curvature_boundary(m);
    double dist = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) dist = std::max(dist, std::fabs(v.v[i] + std::log(std::cosh(v.t[i]))));
    j["lambda"] = l;
    j["v2_0"] = v.d2v.front();
    j["v3_0"] = v.d3v.front();
    j["distance_to_log_cosh"] = dist;
    j["t_curvature"] = {{"mean", T.value}, {"integral", T.integral}, {"sign", T.sign}, {"normal_derivative_R", T.normal_derivative_R}};
    j["report"] = rigidity_json(m);
  } else {
    fail(ErrorCode::InvalidArgument, "unknown --metric '" + c.metric + "'");
  }
  return j;
}

json cmd_report_all(const RunConfig& base, std::ostream& out) {
  const fs::path dir = base.out_dir;
  std::vector<std::pair<std::string, std::function<json()>>> tasks;
  auto cfg = [&](const std::string& cmd, int order, int dim) {
    RunConfig c = base;
    c.command = cmd;
    c.order = order;
    c.dim = dim;
    c.g.clear();
    c.has_lambda = false;
    c.csv.clear();
    c.svg.clear();
    c.json_out.clear();
    return c;
  };
  for (auto [order, dim] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {2, 4}, {2, 5}, {4, 4}, {4, 5}, {4, 6}}) {
    RunConfig c = cfg("lambda-star", order, dim);
    c.refine_tol = 1e-6;
    const ProblemSpec p = problem_from(c);
    c.svg = (dir / ("lambda_star_" + stem(p) + ".svg")).string();
    tasks.emplace_back("lambda_star_" + stem(p), [c] { return lambda_star_run(c).report; });
  }
  {
    RunConfig c = cfg("solve", 4, 5);
    c.lambda = 105.0 / 16.0;
    c.has_lambda = true;
    tasks.emplace_back("solve_o4_n5", [c] { return cmd_solve(c); });
  }
  {
    RunConfig c = cfg("identities", 4, 5);
    c.check = "pohozaev-roots";
    c.lambda = 105.0 / 16.0;
    c.has_lambda = true;
    tasks.emplace_back("identities_pohozaev_roots_n5", [c] { return cmd_identities(c); });
    c.check = "pohozaev-boundary";
    tasks.emplace_back("identities_pohozaev_boundary_n5", [c] { return cmd_identities(c); });
    c.check = "barrier";
    tasks.emplace_back("identities_barrier_n5", [c] { return cmd_identities(c); });
  }
  for (int n = 5; n <= 8; ++n) {
    RunConfig c = cfg("identities", 4, n);
    c.check = "pohozaev-discriminant";
    tasks.emplace_back("identities_discriminant_n" + std::to_string(n), [c] { return cmd_identities(c); });
  }
  {
    RunConfig c = cfg("identities", 4, 4);
    c.check = "first-integral";
    tasks.emplace_back("identities_first_integral", [c] { return cmd_identities(c); });
  }
  for (auto [order, dim] : std::vector<std::pair<int, int>>{{2, 2}, {4, 4}, {4, 5}}) {
    RunConfig c = cfg("spectrum", order, dim);
    tasks.emplace_back("spectrum_" + stem(problem_from(c)), [c] { return cmd_spectrum(c); });
  }
  for (int dim : {4, 5}) {
    for (double f : {0.5, 0.95}) {
      RunConfig c = cfg("iterate", 4, dim);
      c.fraction = f;
      char tag[16];
      std::snprintf(tag, sizeof tag, "%02d", int(std::lround(100 * f)));
      tasks.emplace_back("iterate_n" + std::to_string(dim) + "_f" + tag, [c] { return cmd_iterate(c); });
    }
  }
  for (int dim = 3; dim <= 7; ++dim) {
    RunConfig c = cfg("rigidity", 4, dim);
    c.metric = "round";
    tasks.emplace_back("rigidity_round_n" + std::to_string(dim), [c] { return cmd_rigidity(c); });
    c.metric = "scaled";
    tasks.emplace_back("rigidity_scaled_n" + std::to_string(dim), [c] { return cmd_rigidity(c); });
  }
  {
    RunConfig c = cfg("rigidity", 4, 4);
    c.metric = "cylinder";
    tasks.emplace_back("rigidity_cylinder", [c] { return cmd_rigidity(c); });
  }

  const auto results = parallel_map(tasks.size(), [&](std::size_t i) { return tasks[i].second(); });
  json summary;
  summary["schema_version"] = kSchemaVersion;
  summary["config"] = base.to_json();
  json files = json::array();
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const fs::path f = dir / (tasks[i].first + ".json");
    write_atomic(f, dump(results[i]));
    files.push_back(f.filename().string());
  }
  summary["reports"] = files;
  json folds = json::array();
  for (std::size_t i = 0; i < 7; ++i) {
    const auto& r = results[i];
    json e;
    e["order"] = r["problem"]["order"];
    e["n"] = r["problem"]["n"];
    e["lambda_star"] = r["lambda_star"];
    e["reference"] = r.contains("closed_form") ? r["closed_form"] : r["conjectured"];
    e["reference_kind"] = r.contains("closed_form") ? "closed form" : "conjectured";
    folds.push_back(e);
    out << lambda_star_line(r["lambda_star"].get<double>(), 1e-6) << "  (order " << r["problem"]["order"] << ", n = "
        << r["problem"]["n"] << ")\n";
  }
  summary["folds"] = folds;
  write_atomic(dir / "summary.json", dump(summary));
  out << "report-all: " << tasks.size() << " reports in " << dir.string() << "\n";
  return summary;
}

const char* kHelpFooter =
    "Branch CSV columns (one row per branch point, RFC-4180, CRLF line ends):\n"
    "  s                  accumulated pseudo-arclength\n"
    "  lambda             parameter\n"
    "  u0                 u(0)\n"
    "  w0                 Laplacian at the centre (order 4; empty for order 2)\n"
    "  delta_u_at_1       Laplacian at r = 1\n"
    "  pohozaev_residual  boundary identity residual (order 4 power problem only)\n"
    "  mu1                smallest linearized eigenvalue when sampled (branch --mu1-every)\n"
    "Numerical failures exit with status 2 and print the error name.\n"
    "GELFAND_ATLAS_THREADS caps the worker count.";

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Gelfand-type problem atlas: branches, folds, identities, spectra, rigidity checks", "gelfand_atlas"};
  app.footer(kHelpFooter);
  app.require_subcommand(1);

  auto common = [&](CLI::App* s, bool problem) {
    if (problem) {
      s->add_option("--order", c.order, "2 or 4")->check(CLI::IsMember({2, 4}));
      s->add_option("--dim", c.dim, "dimension n")->check(CLI::Range(2, 64));
      s->add_option("--g", c.g, "nonlinearity: exp2u, exp4u, scalar-power, q-power")
          ->check(CLI::IsMember({"exp2u", "exp4u", "scalar-power", "q-power"}));
    }
    s->add_option("--lambda", c.lambda, "parameter value");
    s->add_option("--tol", c.tol, "Newton residual tolerance");
    s->add_option("--out-dir", c.out_dir, "directory for default output files");
    s->add_option("--json", c.json_out, "write the JSON report here instead of stdout");
  };

  auto* solve = app.add_subcommand("solve", "all radial solutions at one lambda");
  common(solve, true);
  solve->add_option("--seed-span", c.seed_span, "u(0) scan range above the lambda = 0 value");

  auto* branch = app.add_subcommand("branch", "trace the minimal branch through the fold; CSV + SVG");
  common(branch, true);
  branch->add_option("--csv", c.csv, "branch table path");
  branch->add_option("--svg", c.svg, "bifurcation diagram path");
  branch->add_option("--after-fold", c.after_fold, "points kept past the fold");
  branch->add_option("--mu1-every", c.mu1_every, "sample mu1 at every k-th point (0: off)");
  branch->add_option("--grid", c.grid, "spectral grid size");

  auto* lstar = app.add_subcommand("lambda-star", "refined fold parameter and its branch table");
  common(lstar, true);
  lstar->add_option("--refine-tol", c.refine_tol, "reported uncertainty");
  lstar->add_option("--csv", c.csv, "branch table path");
  lstar->add_option("--svg", c.svg, "bifurcation diagram path");
  lstar->add_option("--after-fold", c.after_fold, "points kept past the fold");

  auto* ident = app.add_subcommand("identities", "identity residuals");
  common(ident, false);
  ident->add_option("--dim", c.dim, "dimension n")->check(CLI::Range(2, 64));
  ident->add_option("--check", c.check, "pohozaev-roots, pohozaev-discriminant, pohozaev-boundary, barrier, first-integral")
      ->check(CLI::IsMember({"pohozaev-roots", "pohozaev-discriminant", "pohozaev-boundary", "barrier", "first-integral"}));
  ident->add_option("--horizon", c.horizon, "cylinder horizon for first-integral");
  ident->add_option("--seed-span", c.seed_span, "u(0) scan range for solution checks");

  auto* iter = app.add_subcommand("iterate", "monotone iteration to the minimal solution (order 4)");
  common(iter, false);
  iter->add_option("--dim", c.dim, "dimension n")->check(CLI::Range(4, 64));
  iter->add_option("--fraction", c.fraction, "lambda as a fraction of the fold (ignored with --lambda)");
  iter->add_option("--start-weight", c.start_weight, "start = t*minimal + (1-t)*upper");
  iter->add_option("--after-fold", c.after_fold, "branch points kept past the fold");

  auto* spec = app.add_subcommand("spectrum", "smallest linearized eigenvalue at lambda or along the branch");
  common(spec, true);
  spec->add_option("--grid", c.grid, "grid size");
  spec->add_option("--samples", c.samples, "samples along the branch");
  spec->add_option("--after-fold", c.after_fold, "branch points kept past the fold");

  auto* rig = app.add_subcommand("rigidity", "rigidity hypotheses of a conformal factor");
  common(rig, false);
  rig->add_option("--dim", c.dim, "dimension n")->check(CLI::Range(3, 64));
  rig->add_option("--metric", c.metric, "round, scaled, solution, cylinder")
      ->check(CLI::IsMember({"round", "scaled", "solution", "cylinder"}));
  rig->add_option("--scale", c.scale, "factor for --metric scaled");
  rig->add_option("--horizon", c.horizon, "cylinder horizon");
  rig->add_option("--seed-span", c.seed_span, "u(0) scan range for --metric solution");

  auto* all = app.add_subcommand("report-all", "run the standard suite and write every report");
  all->add_option("--out-dir", c.out_dir, "output directory");

  std::vector<std::string> args;
  for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  CLI::App* sub = app.get_subcommands().front();
  c.command = sub->get_name();
  c.has_lambda = c.command != "report-all" && sub->count("--lambda") > 0;
  try {
    c.validate();
    json j;
    if (c.command == "solve") j = cmd_solve(c);
    else if (c.command == "branch") j = cmd_branch(c, out);
    else if (c.command == "lambda-star") j = cmd_lambda_star(c, out);
    else if (c.command == "identities") j = cmd_identities(c);
    else if (c.command == "iterate") j = cmd_iterate(c);
    else if (c.command == "spectrum") j = cmd_spectrum(c);
    else if (c.command == "rigidity") j = cmd_rigidity(c);
    else if (c.command == "report-all") j = cmd_report_all(c, out);
    if (c.command == "identities" || c.command == "solve" || c.command == "iterate" || c.command == "spectrum" ||
        c.command == "rigidity") {
      emit(c, j, out);
    } else if (!c.json_out.empty()) {
      write_atomic(c.json_out, dump(j));
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace gelfand
