#include "gelfand/shooting.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "gelfand/errors.hpp"
#include "gelfand/parallel.hpp"

namespace gelfand {

namespace {

double norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

bool recoverable(const Error& e) {
  return e.code() == ErrorCode::BlowUp || e.code() == ErrorCode::LostPositivity ||
         e.code() == ErrorCode::ToleranceFailure;
}

RadialIvpOptions ivp_for(double tol, const ShootingOptions& opt) {
  RadialIvpOptions o = opt.ivp;
  o.tol = std::min(o.tol, std::max(1e-13, 0.01 * tol));
  return o;
}

}  // namespace

std::vector<double> boundary_mismatch(const ProblemSpec& p, const StateVector& end) {
  if (p.order == 2) return {end.u - p.bc.u1};
  return {end.u - p.bc.u1, end.du - *p.bc.du1};
}

RadialSolution evaluate_solution(const ProblemSpec& p, std::span<const double> center,
                                 const ShootingOptions& opt) {
  p.validate();
  const auto grid = uniform_grid(opt.grid_intervals);
  const Trajectory t = integrate_radial_ivp(p, center, grid, opt.ivp);
  RadialSolution s;
  s.problem = p;
  s.lambda = p.lambda;
  s.profile = profile_from_trajectory(p, t);
  s.shooting_params.assign(center.begin(), center.end());
  s.boundary_residual = norm(boundary_mismatch(p, t.end));
  s.delta_u_at_1 = t.end.w;
  if (p.nonlinearity == Nonlinearity::QPower) {
    const double m = *std::min_element(s.profile.u.begin(), s.profile.u.end());
    if (!(m > 0.0)) fail(ErrorCode::LostPositivity, "solution is not positive");
  }
  return s;
}

RadialSolution solve_bvp(const ProblemSpec& p, std::span<const double> seed, double tol,
                         const ShootingOptions& opt) {
  p.validate();
  const int k = p.num_center_values();
  if (int(seed.size()) != k) fail(ErrorCode::InvalidArgument, "seed has the wrong number of centre values");
  for (double x : seed)
    if (!std::isfinite(x)) fail(ErrorCode::InvalidArgument, "seed must be finite");
  if (!(tol > 0.0)) fail(ErrorCode::InvalidArgument, "tol must be > 0");

  const RadialIvpOptions ivp = ivp_for(tol, opt);
  std::vector<double> x(seed.begin(), seed.end());
  ShotResult shot = shoot(p, x, ivp);
  std::vector<double> F = boundary_mismatch(p, shot.end);
  double fn = norm(F);
  int it = 0;
  while (fn > tol) {
    if (it >= opt.max_iter) {
      std::ostringstream os;
      os << "Newton did not converge in " << opt.max_iter << " iterations (|F| = " << fn << ")";
      fail(ErrorCode::NoConvergence, os.str());
    }
    ++it;
    Eigen::MatrixXd J = shot.sensitivity.topLeftCorner(k, k);
    Eigen::VectorXd rhs(k);
    for (int i = 0; i < k; ++i) rhs(i) = -F[std::size_t(i)];
    const Eigen::VectorXd dx = J.fullPivLu().solve(rhs);
    if (!dx.allFinite()) fail(ErrorCode::NoConvergence, "singular shooting Jacobian");

    double step = 1.0;
    bool accepted = false;
    for (int b = 0; b <= opt.max_backtracks; ++b, step *= 0.5) {
      std::vector<double> trial(x);
      for (int i = 0; i < k; ++i) trial[std::size_t(i)] += step * dx(i);
      try {
        ShotResult s2 = shoot(p, trial, ivp);
        auto F2 = boundary_mismatch(p, s2.end);
        const double f2 = norm(F2);
        if (f2 <= (1.0 - 1e-4 * step) * fn || f2 <= tol) {
          x = std::move(trial);
          shot = std::move(s2);
          F = std::move(F2);
          fn = f2;
          accepted = true;
          break;
        }
      } catch (const Error& e) {
        if (!recoverable(e)) throw;
      }
    }
    if (!accepted) {
      std::ostringstream os;
      os << "Newton stalled at |F| = " << fn;
      fail(ErrorCode::NoConvergence, os.str());
    }
  }
  ShootingOptions o2 = opt;
  o2.ivp = ivp;
  RadialSolution sol = evaluate_solution(p, x, o2);
  sol.boundary_residual = fn;
  sol.newton_iterations = it;
  return sol;
}

SeedBox default_seed_box(const ProblemSpec& p, double span) {
  SeedBox b;
  const double base = lambda_zero_center(p)[0];
  b.u0 = {base, base + span};
  return b;
}

namespace {

// For order 4: solve u'(1) = bc.du1 for Δu(0) at fixed u(0). The map is
// increasing; escapes are read as +inf (blow-up) or -inf (lost positivity).
struct InnerRoot {
  double w0;
  double mismatch_u;  // u(1) - bc.u1 at the root
};

std::optional<InnerRoot> solve_inner(const ProblemSpec& p, double u0, double guess, const SeedBox& box,
                                     const RadialIvpOptions& ivp) {
  struct Eval {
    double g;     // u'(1) - bc.du1, or +-inf
    double dg;    // derivative in w0
    double mu;    // u(1) - bc.u1
  };
  auto eval = [&](double w0) -> Eval {
    const double c[2] = {u0, w0};
    try {
      ShotResult s = shoot(p, c, ivp);
      return {s.end.du - *p.bc.du1, s.sensitivity(1, 1), s.end.u - p.bc.u1};
    } catch (const Error& e) {
      if (e.code() == ErrorCode::LostPositivity) return {-INFINITY, 0.0, 0.0};
      if (e.code() == ErrorCode::BlowUp || e.code() == ErrorCode::ToleranceFailure) return {INFINITY, 0.0, 0.0};
      throw;
    }
  };
  double lo = guess, hi = guess;
  Eval el = eval(guess), eh = el;
  if (el.g == 0.0) return InnerRoot{guess, el.mu};
  double d = 1.0;
  if (el.g < 0) {
    while (eh.g < 0) {
      lo = hi;
      el = eh;
      hi = lo + d;
      d *= 2;
      if (hi > box.w0.second) return std::nullopt;
      eh = eval(hi);
    }
  } else {
    while (el.g > 0) {
      hi = lo;
      eh = el;
      lo = hi - d;
      d *= 2;
      if (lo < box.w0.first) return std::nullopt;
      el = eval(lo);
    }
  }
  // Safeguarded Newton inside [lo, hi].
  double w = std::isfinite(el.g) && std::isfinite(eh.g) ? lo - el.g * (hi - lo) / (eh.g - el.g) : 0.5 * (lo + hi);
  for (int it = 0; it < 100; ++it) {
    const Eval e = eval(w);
    if (std::isfinite(e.g) && std::fabs(e.g) < 1e-12) return InnerRoot{w, e.mu};
    if (e.g < 0) lo = w; else hi = w;
    double next = 0.5 * (lo + hi);
    if (std::isfinite(e.g) && e.dg > 0) {
      const double nw = w - e.g / e.dg;
      if (nw > lo && nw < hi) next = nw;
    }
    if (hi - lo < 1e-13 * (1 + std::fabs(w))) return std::isfinite(e.g) ? std::optional<InnerRoot>(InnerRoot{w, e.mu}) : std::nullopt;
    w = next;
  }
  return std::nullopt;
}

}  // namespace

std::vector<RadialSolution> find_all_solutions(const ProblemSpec& p, const SeedBox& box, double tol,
                                               const ShootingOptions& opt) {
  p.validate();
  if (!(box.u0.second > box.u0.first) || box.samples < 2) fail(ErrorCode::InvalidArgument, "bad seed box");
  const RadialIvpOptions ivp = ivp_for(tol, opt);
  const int M = box.samples;

  // Reduced scan: centre values and the remaining scalar mismatch.
  std::vector<std::optional<std::pair<std::vector<double>, double>>> scan(std::size_t(M) + 1);
  double guess = p.order == 4 ? lambda_zero_center(p)[1] : 0.0;
  for (int i = 0; i <= M; ++i) {
    const double u0 = box.u0.first + (box.u0.second - box.u0.first) * i / M;
    if (p.order == 2) {
      const double c[1] = {u0};
      try {
        const ShotResult s = shoot(p, c, ivp);
        scan[std::size_t(i)] = std::make_pair(std::vector<double>{u0}, s.end.u - p.bc.u1);
      } catch (const Error& e) {
        if (!recoverable(e)) throw;
      }
    } else {
      const auto r = solve_inner(p, u0, guess, box, ivp);
      if (r) {
        scan[std::size_t(i)] = std::make_pair(std::vector<double>{u0, r->w0}, r->mismatch_u);
        guess = r->w0;
      }
    }
  }

  std::vector<std::vector<double>> seeds;
  for (int i = 0; i < M; ++i) {
    const auto& a = scan[std::size_t(i)];
    const auto& b = scan[std::size_t(i) + 1];
    if (!a || !b) continue;
    if (a->second == 0.0) {
      seeds.push_back(a->first);
      continue;
    }
    if ((a->second < 0) != (b->second < 0)) {
      const double s = a->second / (a->second - b->second);
      std::vector<double> seed(a->first.size());
      for (std::size_t j = 0; j < seed.size(); ++j) seed[j] = a->first[j] + s * (b->first[j] - a->first[j]);
      seeds.push_back(std::move(seed));
    }
  }

  auto polished = parallel_map(seeds.size(), [&](std::size_t i) -> std::optional<RadialSolution> {
    try {
      return solve_bvp(p, seeds[i], tol, opt);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::NoConvergence || recoverable(e)) return std::nullopt;
      throw;
    }
  });

  std::vector<RadialSolution> out;
  for (auto& s : polished) {
    if (!s) continue;
    if (s->u0() < box.u0.first - 1e-9 || s->u0() > box.u0.second + 1e-9) continue;
    bool dup = false;
    for (const auto& o : out) {
      double d = 0.0;
      for (std::size_t j = 0; j < o.shooting_params.size(); ++j)
        d = std::max(d, std::fabs(o.shooting_params[j] - s->shooting_params[j]));
      if (d <= 1e-6) dup = true;
    }
    if (!dup) out.push_back(std::move(*s));
  }
  std::sort(out.begin(), out.end(), [](const RadialSolution& a, const RadialSolution& b) { return a.u0() < b.u0(); });
  return out;
}

}  // namespace gelfand
