#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gelfand/shooting.hpp"

namespace gelfand {

struct BranchPoint {
  double s = 0.0;  // accumulated pseudo-arclength
  double lambda = 0.0;
  std::vector<double> params;  // centre values
  double amplitude = 0.0;      // u(0)
  double delta_u_at_1 = 0.0;
  std::vector<double> tangent;  // unit tangent in (params, λ)
};

struct Branch {
  ProblemSpec problem;  // λ is ignored
  std::vector<BranchPoint> points;
  std::optional<std::size_t> fold_index;  // point of largest λ near the turning point
  double lambda_star = 0.0;               // λ at fold_index (coarse; see find_lambda_star)
};

struct StepControl {
  double initial = 0.05;
  double min = 1e-7;
  double max = 0.5;
  double corrector_tol = 1e-10;
  int corrector_max_iter = 8;
  int easy_iterations = 3;  // corrector iterations counted as "easy"
  RadialIvpOptions ivp;
};

struct StopCriteria {
  double amplitude_cap = 8.0;   // stop when u(0) exceeds this
  int max_points = 2000;
  int points_after_fold = -1;   // -1: run to the other criteria
};

/// The λ = 0 solution of the template problem, Newton-polished.
RadialSolution lambda_zero_solution(const ProblemSpec& tmpl);

/// Pseudo-arclength continuation in (centre values, λ) from `start`.
/// Secant predictor, Newton corrector on the bordered system; the step is
/// halved on corrector failure and doubled after three easy corrections.
/// Stops on the amplitude cap, λ < 0 or the point budget. Throws
/// StepCollapse when the step falls below `step.min`.
Branch trace_branch(const ProblemSpec& tmpl, const RadialSolution& start, const StepControl& step = {},
                    const StopCriteria& stop = {});

/// Unit tangent at a point, oriented along `reference` when one is given
/// (else with positive λ component).
std::vector<double> branch_tangent(const ProblemSpec& tmpl, double lambda, const std::vector<double>& params,
                                   const std::vector<double>* reference, const RadialIvpOptions& ivp = {});

/// The Newton-corrected branch point at pseudo-arclength `sigma` from
/// b.points[i] along its (recomputed) tangent. Throws NoConvergence.
BranchPoint branch_point_along(const Branch& b, std::size_t i, double sigma, const StepControl& step = {});

struct LambdaStarEstimate {
  double value = 0.0;
  double error = 0.0;  // last secant change in λ
  int evaluations = 0;
};

/// Refines the first sign change of dλ/ds by an Illinois iteration on the
/// arclength between the two bracketing points, with every trial point
/// Newton-corrected. Uses only (λ, centre values) of the branch points, so a
/// re-ingested branch table reproduces the same estimate. Throws NoFold.
LambdaStarEstimate find_lambda_star(const Branch& b, double refine_tol, const StepControl& step = {});

/// The lower-segment solution at λ: seeded by interpolation between branch
/// points, then Newton-corrected. Throws BeyondFold for λ >= b.lambda_star
/// when the branch has a fold.
RadialSolution minimal_solution(const ProblemSpec& p, double lambda, const Branch& b, double tol = 1e-10);

/// Same on the segment past the fold. Throws BeyondFold when λ is outside
/// the λ-range covered there.
RadialSolution upper_solution(const ProblemSpec& p, double lambda, const Branch& b, double tol = 1e-10);

}  // namespace gelfand
