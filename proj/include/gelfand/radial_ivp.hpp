#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "gelfand/dopri5.hpp"
#include "gelfand/problem.hpp"

namespace gelfand {

struct RadialIvpOptions {
  double tol = 1e-11;
  double start_offset = 1e-4;  // Taylor start radius ε
  double overflow_guard = 1e12;
};

struct Trajectory {
  std::vector<double> r;
  std::vector<StateVector> states;
  Dopri5Stats stats;
  StateVector end;  // state at r = 1
};

/// Integrates the radial ODE of `p` from the centre to r = 1.
///
/// `center` holds u(0) (order 2) or (u(0), Δu(0)) (order 4). The regular
/// singular point is handled by the even expansion u ≈ u0 + u2 r² + u4 r⁴
/// (and likewise for Δu) up to r = ε, then adaptive DOPRI5 takes over.
/// Grid points below ε are evaluated on the expansion.
Trajectory integrate_radial_ivp(const ProblemSpec& p, std::span<const double> center, double tol,
                                std::span<const double> grid);
Trajectory integrate_radial_ivp(const ProblemSpec& p, std::span<const double> center,
                                std::span<const double> grid, const RadialIvpOptions& opt);

/// End state at r = 1 together with its sensitivities.
struct ShotResult {
  StateVector end;
  /// d(end state)/d(centre values..., λ): rows (u, u') for order 2 and
  /// (u, u', Δu, (Δu)') for order 4.
  Eigen::MatrixXd sensitivity;
  Dopri5Stats stats;
};

/// Integrates the state together with its variational equations.
ShotResult shoot(const ProblemSpec& p, std::span<const double> center, const RadialIvpOptions& opt = {});

RadialProfile profile_from_trajectory(const ProblemSpec& p, const Trajectory& t);

}  // namespace gelfand
