#include "gelfand/continuation.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "gelfand/errors.hpp"

namespace gelfand {

namespace {

using Vec = Eigen::VectorXd;

Vec to_vec(const std::vector<double>& params, double lambda) {
  Vec z(Eigen::Index(params.size()) + 1);
  for (std::size_t i = 0; i < params.size(); ++i) z(Eigen::Index(i)) = params[i];
  z(z.size() - 1) = lambda;
  return z;
}

std::vector<double> params_of(const Vec& z) {
  return std::vector<double>(z.data(), z.data() + z.size() - 1);
}

// Mismatch and its (k x k+1) Jacobian at z = (params, λ).
struct Residual {
  Vec F;
  Eigen::MatrixXd J;
  double delta_u_at_1;
};

Residual residual(const ProblemSpec& tmpl, const Vec& z, const RadialIvpOptions& ivp) {
  const int k = tmpl.num_center_values();
  const ProblemSpec p = tmpl.with_lambda(z(k));
  const auto params = params_of(z);
  const ShotResult s = shoot(p, params, ivp);
  Residual r;
  const auto F = boundary_mismatch(p, s.end);
  r.F = Vec::Map(F.data(), Eigen::Index(F.size()));
  r.J = s.sensitivity.topRows(k);
  r.delta_u_at_1 = s.end.w;
  return r;
}

Vec tangent_from(const Eigen::MatrixXd& J, const Vec* reference) {
  const Eigen::Index k = J.rows();
  Eigen::MatrixXd A(k + 1, k + 1);
  A.topRows(k) = J;
  Vec ref = Vec::Zero(k + 1);
  if (reference) ref = *reference;
  else ref(k) = 1.0;
  A.row(k) = ref.transpose();
  Vec rhs = Vec::Zero(k + 1);
  rhs(k) = 1.0;
  Vec t = A.fullPivLu().solve(rhs);
  if (!t.allFinite() || t.norm() == 0.0) {
    // Reference orthogonal to the null space: fall back to the SVD null vector.
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(J, Eigen::ComputeFullV);
    t = svd.matrixV().col(k);
    if (t.dot(ref) < 0) t = -t;
  }
  t.normalize();
  return t;
}

struct Corrected {
  Vec z;
  Vec tangent;
  double delta_u_at_1 = 0.0;
  int iterations = 0;
};

// Newton on [F(z); t0·(z - z0) - ds] = 0 from the predictor z0 + ds t0.
std::optional<Corrected> correct(const ProblemSpec& tmpl, const Vec& z0, const Vec& t0, double ds,
                                 const StepControl& step) {
  Vec z = z0 + ds * t0;
  const Eigen::Index k = z.size() - 1;
  for (int it = 0; it <= step.corrector_max_iter; ++it) {
    Residual r;
    try {
      r = residual(tmpl, z, step.ivp);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::BlowUp || e.code() == ErrorCode::LostPositivity ||
          e.code() == ErrorCode::ToleranceFailure)
        return std::nullopt;
      throw;
    }
    const double arc = t0.dot(z - z0) - ds;
    Eigen::MatrixXd A(k + 1, k + 1);
    A.topRows(k) = r.J;
    A.row(k) = t0.transpose();
    Vec G(k + 1);
    G.head(k) = r.F;
    G(k) = arc;
    if (r.F.norm() <= step.corrector_tol && std::fabs(arc) <= 1e-12 * (1 + std::fabs(ds))) {
      Corrected c;
      c.z = z;
      c.tangent = tangent_from(r.J, &t0);
      c.delta_u_at_1 = r.delta_u_at_1;
      c.iterations = it;
      return c;
    }
    if (it == step.corrector_max_iter) break;
    const Vec dz = A.fullPivLu().solve(-G);
    if (!dz.allFinite()) return std::nullopt;
    z += dz;
    if (z(k) < -1.0) return std::nullopt;
  }
  return std::nullopt;
}

BranchPoint make_point(const Vec& z, const Vec& t, double s, double dU1) {
  BranchPoint bp;
  bp.s = s;
  bp.lambda = z(z.size() - 1);
  bp.params = params_of(z);
  bp.amplitude = bp.params.at(0);
  bp.delta_u_at_1 = dU1;
  bp.tangent.assign(t.data(), t.data() + t.size());
  return bp;
}

}  // namespace

RadialSolution lambda_zero_solution(const ProblemSpec& tmpl) {
  const ProblemSpec p = tmpl.with_lambda(0.0);
  return solve_bvp(p, lambda_zero_center(p), 1e-12);
}

std::vector<double> branch_tangent(const ProblemSpec& tmpl, double lambda, const std::vector<double>& params,
                                   const std::vector<double>* reference, const RadialIvpOptions& ivp) {
  const Residual r = residual(tmpl, to_vec(params, lambda), ivp);
  Vec ref;
  if (reference) ref = Vec::Map(reference->data(), Eigen::Index(reference->size()));
  const Vec t = tangent_from(r.J, reference ? &ref : nullptr);
  return std::vector<double>(t.data(), t.data() + t.size());
}

Branch trace_branch(const ProblemSpec& tmpl, const RadialSolution& start, const StepControl& step,
                    const StopCriteria& stop) {
  tmpl.validate();
  if (!(step.initial > 0.0)) fail(ErrorCode::InvalidArgument, "initial step must be > 0");
  if (int(start.shooting_params.size()) != tmpl.num_center_values())
    fail(ErrorCode::InvalidArgument, "start solution does not match the problem");

  Branch b;
  b.problem = tmpl;
  Vec z = to_vec(start.shooting_params, start.lambda);
  const Residual r0 = residual(tmpl, z, step.ivp);
  if (r0.F.norm() > std::max(1e-8, 10 * step.corrector_tol))
    fail(ErrorCode::InvalidArgument, "start point is not a converged solution");
  Vec t = tangent_from(r0.J, nullptr);
  b.points.push_back(make_point(z, t, 0.0, r0.delta_u_at_1));

  double ds = std::min(step.initial, step.max);
  int easy = 0;
  int after_fold = 0;
  while (int(b.points.size()) < stop.max_points) {
    std::optional<Corrected> c;
    while (!(c = correct(tmpl, z, t, ds, step))) {
      ds *= 0.5;
      easy = 0;
      if (ds < step.min) {
        std::ostringstream os;
        os << "arclength step collapsed near lambda = " << z(z.size() - 1);
        fail(ErrorCode::StepCollapse, os.str());
      }
    }
    const double s = b.points.back().s + ds;
    const bool turned = c->tangent(t.size() - 1) < 0.0 && t(t.size() - 1) >= 0.0;
    z = c->z;
    t = c->tangent;
    b.points.push_back(make_point(z, t, s, c->delta_u_at_1));
    if (turned && !b.fold_index) {
      const std::size_t i = b.points.size() - 1;
      b.fold_index = b.points[i].lambda >= b.points[i - 1].lambda ? i : i - 1;
      b.lambda_star = b.points[*b.fold_index].lambda;
    }
    if (b.fold_index && stop.points_after_fold >= 0 && after_fold++ >= stop.points_after_fold) break;
    if (b.points.back().amplitude > stop.amplitude_cap) break;
    if (b.points.back().lambda < 0.0) break;

    if (c->iterations <= step.easy_iterations) {
      if (++easy >= 3) {
        ds = std::min(2 * ds, step.max);
        easy = 0;
      }
    } else {
      easy = 0;
    }
  }
  if (!b.fold_index) {
    double best = b.points.front().lambda;
    for (const auto& p : b.points) best = std::max(best, p.lambda);
    b.lambda_star = best;
  }
  return b;
}

BranchPoint branch_point_along(const Branch& b, std::size_t i, double sigma, const StepControl& step) {
  if (i >= b.points.size()) fail(ErrorCode::InvalidArgument, "branch index out of range");
  const auto& pt = b.points[i];
  const Vec z0 = to_vec(pt.params, pt.lambda);
  const Residual r = residual(b.problem, z0, step.ivp);
  Vec ref;
  if (pt.tangent.size() == std::size_t(z0.size())) ref = Vec::Map(pt.tangent.data(), z0.size());
  const Vec t0 = tangent_from(r.J, ref.size() ? &ref : nullptr);
  if (sigma == 0.0) return make_point(z0, t0, pt.s, r.delta_u_at_1);
  StepControl sc = step;
  sc.corrector_max_iter = std::max(sc.corrector_max_iter, 12);
  const auto c = correct(b.problem, z0, t0, sigma, sc);
  if (!c) fail(ErrorCode::NoConvergence, "corrector failed off the branch point");
  return make_point(c->z, c->tangent, pt.s + sigma, c->delta_u_at_1);
}

LambdaStarEstimate find_lambda_star(const Branch& b, double refine_tol, const StepControl& step) {
  if (!(refine_tol > 0.0)) fail(ErrorCode::InvalidArgument, "refine_tol must be > 0");
  const ProblemSpec& tmpl = b.problem;
  const int k = tmpl.num_center_values();
  if (b.points.size() < 2) fail(ErrorCode::NoFold, "branch has fewer than two points");

  // Tangents are recomputed from (λ, params) so that stored tangents play no role.
  std::vector<Vec> zs, ts;
  std::optional<Vec> prev;
  std::optional<std::size_t> bracket;
  for (std::size_t i = 0; i < b.points.size() && !bracket; ++i) {
    Vec z = to_vec(b.points[i].params, b.points[i].lambda);
    const Residual r = residual(tmpl, z, step.ivp);
    Vec ref;
    if (prev) ref = *prev;
    else if (i + 1 < b.points.size()) {
      ref = to_vec(b.points[i + 1].params, b.points[i + 1].lambda) - z;
    }
    Vec t = tangent_from(r.J, ref.size() ? &ref : nullptr);
    if (i > 0 && ts.back()(k) >= 0.0 && t(k) < 0.0) bracket = i - 1;
    zs.push_back(z);
    ts.push_back(t);
    prev = t;
  }
  if (!bracket) fail(ErrorCode::NoFold, "no sign change of dlambda/ds on the branch");

  const Vec z0 = zs[*bracket];
  const Vec t0 = ts[*bracket];
  const double sigma1 = t0.dot(zs[*bracket + 1] - z0);

  LambdaStarEstimate est;
  struct Sample {
    double sigma, phi, lambda;
  };
  auto eval = [&](double sigma) -> Sample {
    ++est.evaluations;
    if (sigma == 0.0) return {0.0, t0(k), z0(k)};
    StepControl sc = step;
    sc.corrector_max_iter = std::max(sc.corrector_max_iter, 12);
    const auto c = correct(tmpl, z0, t0, sigma, sc);
    if (!c) fail(ErrorCode::NoConvergence, "corrector failed during fold refinement");
    return {sigma, c->tangent(k), c->z(k)};
  };
  Sample a = eval(0.0);
  Sample c = eval(sigma1);
  Sample last = a.lambda > c.lambda ? a : c;
  double prev_lambda = last.lambda;
  int side = 0;
  for (int it = 0; it < 100; ++it) {
    double sigma = (a.sigma * c.phi - c.sigma * a.phi) / (c.phi - a.phi);
    if (!(sigma > std::min(a.sigma, c.sigma) && sigma < std::max(a.sigma, c.sigma)))
      sigma = 0.5 * (a.sigma + c.sigma);
    const Sample m = eval(sigma);
    est.error = std::fabs(m.lambda - prev_lambda);
    prev_lambda = m.lambda;
    last = m;
    if ((m.phi >= 0.0) == (a.phi >= 0.0)) {
      a = m;
      if (side == -1) c.phi *= 0.5;
      side = -1;
    } else {
      c = m;
      if (side == 1) a.phi *= 0.5;
      side = 1;
    }
    if (m.phi == 0.0 || (it > 0 && est.error <= 0.1 * refine_tol) || std::fabs(c.sigma - a.sigma) < 1e-14) break;
  }
  est.value = last.lambda;
  if (est.error > refine_tol) {
    std::ostringstream os;
    os << "fold refinement reached only " << est.error;
    fail(ErrorCode::NoConvergence, os.str());
  }
  return est;
}

namespace {

RadialSolution solution_on_segment(const ProblemSpec& p, double lambda, const Branch& b, std::size_t first,
                                   std::size_t last, double tol) {
  // Bracketing pair on [first, last]; nearest point if none brackets λ.
  std::optional<std::size_t> best;
  for (std::size_t i = first; i < last; ++i) {
    const double l0 = b.points[i].lambda, l1 = b.points[i + 1].lambda;
    if ((lambda - l0) * (lambda - l1) <= 0.0) {
      best = i;
      break;
    }
  }
  std::vector<double> seed;
  if (best) {
    const auto& A = b.points[*best];
    const auto& B = b.points[*best + 1];
    const double d = B.lambda - A.lambda;
    const double w = d == 0.0 ? 0.0 : (lambda - A.lambda) / d;
    seed.resize(A.params.size());
    for (std::size_t j = 0; j < seed.size(); ++j) seed[j] = A.params[j] + w * (B.params[j] - A.params[j]);
  } else {
    fail(ErrorCode::BeyondFold, "lambda is outside the range covered by this branch segment");
  }
  return solve_bvp(p.with_lambda(lambda), seed, tol);
}

}  // namespace

RadialSolution minimal_solution(const ProblemSpec& p, double lambda, const Branch& b, double tol) {
  if (b.points.empty()) fail(ErrorCode::InvalidArgument, "empty branch");
  if (b.fold_index && lambda >= b.lambda_star) {
    std::ostringstream os;
    os << "lambda = " << lambda << " is not below the fold " << b.lambda_star;
    fail(ErrorCode::BeyondFold, os.str());
  }
  const std::size_t last = b.fold_index ? *b.fold_index : b.points.size() - 1;
  return solution_on_segment(p, lambda, b, 0, last, tol);
}

RadialSolution upper_solution(const ProblemSpec& p, double lambda, const Branch& b, double tol) {
  if (!b.fold_index) fail(ErrorCode::NoFold, "branch has no fold");
  if (lambda >= b.lambda_star) fail(ErrorCode::BeyondFold, "lambda is not below the fold");
  return solution_on_segment(p, lambda, b, *b.fold_index, b.points.size() - 1, tol);
}

}  // namespace gelfand
