#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "gelfand/shooting.hpp"

namespace gelfand {

/// Solves Δ²u = rhs radially on the grid with u'(0) = (Δu)'(0) = 0,
/// u(1) = bc.u1 and u'(1) = bc.du1. Done as two nested Poisson problems:
/// Δw = rhs, Δu = w, with the two integration constants fixed by the
/// boundary rows. The grid must start at 0 and end at 1.
RadialProfile linear_biharmonic_solve(int n, std::span<const double> grid, std::span<const double> rhs,
                                      const BoundaryData& bc);
RadialProfile linear_biharmonic_solve(int n, const std::function<double(double)>& rhs, int intervals,
                                      const BoundaryData& bc);

struct IterationLog {
  std::vector<RadialProfile> iterates;   // u_0 (the start), u_1, ...
  std::vector<double> monotone_violations;  // max(u_k - u_{k-1}) for k >= 1
  std::vector<double> sup_norm_deltas;      // |u_k - u_{k-1}|_inf
  bool converged = false;
  bool monotonicity_broken = false;  // some violation exceeded the tolerance
  double monotone_tol = 1e-10;
};

struct IterationOptions {
  double monotone_tol = 1e-10;
  bool keep_iterates = true;
};

/// Fixed-point iteration u_k = L(λ f(u_{k-1})), L the clamped radial solve
/// above. Broken monotonicity is recorded in the log, not thrown. Throws
/// NoConvergence if the sup-norm update is still above tol after max_iter.
std::pair<RadialSolution, IterationLog> iterate_minimal(const ProblemSpec& p, const RadialProfile& u0,
                                                        double tol = 1e-8, int max_iter = 500,
                                                        const IterationOptions& opt = {});

/// t·a + (1-t)·b on a common grid (derivative fields combined likewise).
RadialProfile blend_profiles(const RadialProfile& a, const RadialProfile& b, double t);

}  // namespace gelfand
