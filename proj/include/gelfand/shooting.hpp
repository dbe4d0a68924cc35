#pragma once

#include <span>
#include <utility>
#include <vector>

#include "gelfand/cylinder.hpp"
#include "gelfand/problem.hpp"
#include "gelfand/radial_ivp.hpp"

namespace gelfand {

/// A converged radial solution sampled on a uniform grid.
struct RadialSolution {
  ProblemSpec problem;
  RadialProfile profile;
  double lambda = 0.0;
  std::vector<double> shooting_params;  // u(0) [, Δu(0)]
  double boundary_residual = 0.0;
  double delta_u_at_1 = 0.0;
  int newton_iterations = 0;

  double u0() const { return shooting_params.at(0); }
};

struct ShootingOptions {
  int max_iter = 50;
  int max_backtracks = 30;
  int grid_intervals = 1000;  // output profile resolution
  RadialIvpOptions ivp;
};

/// Boundary mismatch (u(1) - bc.u1 [, u'(1) - bc.du1]) of an end state.
std::vector<double> boundary_mismatch(const ProblemSpec& p, const StateVector& end);

/// Integrates from the given centre values and packages the result without
/// any Newton correction.
RadialSolution evaluate_solution(const ProblemSpec& p, std::span<const double> center,
                                 const ShootingOptions& opt = {});

/// Armijo-damped Newton on the centre values with the Jacobian taken from
/// the variational equations. Throws NoConvergence when the mismatch norm
/// cannot be brought below `tol`; BlowUp / LostPositivity at the seed itself
/// propagate.
RadialSolution solve_bvp(const ProblemSpec& p, std::span<const double> seed, double tol,
                         const ShootingOptions& opt = {});

/// Range of u(0) scanned by find_all_solutions. For order 4, `w0` bounds the
/// search for Δu(0).
struct SeedBox {
  std::pair<double, double> u0;
  std::pair<double, double> w0{-1e4, 1e4};
  int samples = 400;
};

/// Default box: u(0) from the λ = 0 centre value upward by `span`.
SeedBox default_seed_box(const ProblemSpec& p, double span = 4.0);

/// All solutions with u(0) in the box, deduplicated (1e-6 in centre values)
/// and sorted by u(0).
///
/// For order 4 the clamped condition u'(1) = bc.du1 is first solved for Δu(0)
/// at every sampled u(0); u'(1) is strictly increasing in Δu(0) for positive
/// nonlinearities, so that inner problem has at most one root. Sign changes of
/// the remaining mismatch u(1) - bc.u1 are then polished with solve_bvp.
std::vector<RadialSolution> find_all_solutions(const ProblemSpec& p, const SeedBox& box, double tol,
                                               const ShootingOptions& opt = {});

struct CylinderBvpOptions {
  bool enforce_nonnegative_v3 = false;  // reject roots with v'''(0) < 0
  double start_horizon = 3.0;           // horizon continuation starts here
  int max_iter = 40;                    // Newton iterations per horizon
  double sample_spacing = 0.01;
};

/// Newton on (v''(0), v'''(0)) for v'''' - 4v'' = λ e^{4v}, v(0) = v'(0) = 0,
/// with far-field targets v'(T) = -1, v''(T) = 0. The horizon is continued
/// from `start_horizon` up to T so the seed only has to be good on a short
/// interval. Throws NoConvergence.
CylProfile solve_cylinder_bvp(double lambda, double horizon, std::pair<double, double> seed, double tol,
                              const CylinderBvpOptions& opt = {});

}  // namespace gelfand
