#include "gelfand/monotone.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gelfand/errors.hpp"
#include "gelfand/quadrature.hpp"

namespace gelfand {

namespace {

// For Δv = F with v(0) = 0, v'(0) = 0: returns (v, v').
std::pair<std::vector<double>, std::vector<double>> poisson_particular(int n, std::span<const double> r,
                                                                       std::span<const double> F) {
  const std::size_t m = r.size();
  const auto I = cumulative_weighted_integral(r, F, n - 1);
  std::vector<double> dv(m, 0.0);
  for (std::size_t i = 1; i < m; ++i) dv[i] = I[i] / std::pow(r[i], n - 1);
  auto v = cumulative_weighted_integral(r, dv, 0);
  return {std::move(v), std::move(dv)};
}

void check_grid(std::span<const double> grid) {
  if (grid.size() < 4) fail(ErrorCode::InvalidArgument, "grid needs at least four nodes");
  if (grid.front() != 0.0 || grid.back() != 1.0) fail(ErrorCode::InvalidArgument, "grid must span [0, 1]");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) fail(ErrorCode::InvalidArgument, "grid must be increasing");
}

}  // namespace

RadialProfile linear_biharmonic_solve(int n, std::span<const double> grid, std::span<const double> rhs,
                                      const BoundaryData& bc) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "dimension must be >= 1");
  if (!bc.du1) fail(ErrorCode::InvalidArgument, "clamped solve needs u'(1)");
  check_grid(grid);
  if (rhs.size() != grid.size()) fail(ErrorCode::InvalidArgument, "rhs and grid differ in length");
  const std::size_t m = grid.size();

  auto [W, dW] = poisson_particular(n, grid, rhs);
  auto [U, dU] = poisson_particular(n, grid, W);
  // u = U + c1 r²/(2n) + c0, Δu = W + c1.
  const double c1 = n * (*bc.du1 - dU.back());
  const double c0 = bc.u1 - U.back() - c1 / (2.0 * n);

  RadialProfile out;
  out.n = n;
  out.r.assign(grid.begin(), grid.end());
  out.u.resize(m);
  out.du.resize(m);
  out.lap.resize(m);
  out.dlap = dW;
  for (std::size_t i = 0; i < m; ++i) {
    const double x = grid[i];
    out.u[i] = U[i] + c1 * x * x / (2.0 * n) + c0;
    out.du[i] = dU[i] + c1 * x / n;
    out.lap[i] = W[i] + c1;
  }
  return out;
}

RadialProfile linear_biharmonic_solve(int n, const std::function<double(double)>& rhs, int intervals,
                                      const BoundaryData& bc) {
  const auto g = uniform_grid(intervals);
  std::vector<double> f(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) f[i] = rhs(g[i]);
  return linear_biharmonic_solve(n, g, f, bc);
}

RadialProfile blend_profiles(const RadialProfile& a, const RadialProfile& b, double t) {
  if (a.r != b.r) fail(ErrorCode::InvalidArgument, "profiles must share a grid");
  RadialProfile c = a;
  auto mix = [t](std::vector<double>& x, const std::vector<double>& y) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = t * x[i] + (1 - t) * y[i];
  };
  mix(c.u, b.u);
  mix(c.du, b.du);
  mix(c.lap, b.lap);
  mix(c.dlap, b.dlap);
  return c;
}

std::pair<RadialSolution, IterationLog> iterate_minimal(const ProblemSpec& p, const RadialProfile& u0, double tol,
                                                        int max_iter, const IterationOptions& opt) {
  p.validate();
  if (p.order != 4) fail(ErrorCode::InvalidArgument, "monotone iteration is implemented for the clamped problem");
  if (!(tol > 0.0) || max_iter < 1) fail(ErrorCode::InvalidArgument, "need tol > 0 and max_iter >= 1");
  check_grid(u0.r);

  IterationLog log;
  log.monotone_tol = opt.monotone_tol;
  RadialProfile prev = u0;
  if (opt.keep_iterates) log.iterates.push_back(u0);
  std::vector<double> rhs(u0.size());
  for (int k = 1; k <= max_iter; ++k) {
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = p.lambda * p.f(prev.u[i]);
    RadialProfile next = linear_biharmonic_solve(p.n, prev.r, rhs, p.bc);
    double viol = -INFINITY, delta = 0.0;
    for (std::size_t i = 0; i < rhs.size(); ++i) {
      viol = std::max(viol, next.u[i] - prev.u[i]);
      delta = std::max(delta, std::fabs(next.u[i] - prev.u[i]));
    }
    log.monotone_violations.push_back(viol);
    log.sup_norm_deltas.push_back(delta);
    if (viol > opt.monotone_tol) log.monotonicity_broken = true;
    if (opt.keep_iterates) log.iterates.push_back(next);
    prev = std::move(next);
    if (delta <= tol) {
      log.converged = true;
      break;
    }
  }
  if (!log.converged) {
    std::ostringstream os;
    os << "monotone iteration: sup-norm update " << log.sup_norm_deltas.back() << " after " << max_iter
       << " iterations";
    fail(ErrorCode::NoConvergence, os.str());
  }
  RadialSolution s;
  s.problem = p;
  s.lambda = p.lambda;
  s.profile = prev;
  s.shooting_params = {prev.u.front(), prev.lap.front()};
  s.boundary_residual = std::hypot(prev.u.back() - p.bc.u1, prev.du.back() - *p.bc.du1);
  s.delta_u_at_1 = prev.lap.back();
  s.newton_iterations = int(log.sup_norm_deltas.size());
  return {std::move(s), std::move(log)};
}

}  // namespace gelfand
