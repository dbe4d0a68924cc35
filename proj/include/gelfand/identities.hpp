#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gelfand/cylinder.hpp"
#include "gelfand/shooting.hpp"

namespace gelfand {

/// Tolerances used by the identity checks.
struct IdentityTolerances {
  double analytic = 1e-8;     // closed forms and exact profiles
  double post_newton = 1e-6;  // Newton-converged numerical solutions
  double barrier = 1e-10;
  double convexity = 1e-12;   // relative to the size of f
  double first_integral = 1e-8;
};

struct IdentityReport {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  double value = 0.0;  // the checked statistic itself (e.g. min margin, E(0))
  std::vector<std::pair<double, double>> details;  // (abscissa, pointwise value)
};

/// (n/2) u'(1) Δu(1) - (½ Δu(1)² + (n-4)/(2n) λ u(1)^{2n/(n-4)}).
double pohozaev_boundary_value(int n, double lambda, double u1, double du1, double lap1);

/// Boundary Pohozaev residual of a solution of the clamped power problem.
/// Throws WrongProblem for second-order or exponential problems.
IdentityReport pohozaev_boundary_residual(const RadialSolution& s, int n, double lambda,
                                          double tol = IdentityTolerances{}.post_newton);

/// The r-dependent Pohozaev expression
///   r^{n-1}(Δu)'(r u' + (n-4)/2 u) + (n/2) r^{n-1} u' Δu - r^n(½(Δu)² + (n-4)/(2n) λ u^{2n/(n-4)}),
/// which vanishes identically along radial solutions of the critical power
/// problem. Evaluated at every profile node as an interior diagnostic.
IdentityReport pohozaev_interior(const RadialProfile& u, int n, double lambda,
                                 double tol = IdentityTolerances{}.post_newton);

/// Discriminant of x² + (n(n-4)/2) x + (n-4)λ/n, the boundary identity for
/// u(1) = 1, u'(1) = -(n-4)/2. Requires n >= 5.
double pohozaev_discriminant(int n, double lambda);

/// Ordered real roots of that quadratic. Throws NoRealRoots when the
/// discriminant is negative, i.e. λ > n³(n-4)/16.
std::pair<double, double> pohozaev_roots(int n, double lambda);

/// n = 4 analogue from the cylinder first integral: Δu(1) = -2 ± sqrt(4 - λ/2).
/// Throws NoRealRoots for λ > 8.
std::pair<double, double> cylinder_boundary_roots(double lambda);

enum class FirstIntegralMode {
  Conservation,  // residual = max |E(t) - E(0)|
  Nonincrease,   // residual = largest rise of E over any earlier value
};

/// E(t) = v'''v' - ½ v''² - 2 v'² - (λ/4) e^{4v} along a cylinder profile.
/// Deviations are divided by 1 + the sum of the term magnitudes at each sample,
/// since E is formed from terms that grow like e^{2t} on escaping trajectories.
IdentityReport first_integral_series(const CylProfile& v, double lambda,
                                     FirstIntegralMode mode = FirstIntegralMode::Conservation,
                                     double tol = IdentityTolerances{}.first_integral);

/// E at parameter λ along a solution of v'''' - 4v'' = forcing·e^{4v} with
/// forcing >= λ, which is a supersolution for λ. The trajectory is
/// integrated on the largest horizon among T, T/2, ... (down to 0.25) that
/// does not blow up and is cut at the first sample with v' > 0; on the kept
/// part dE/dt = v'(forcing - λ)e^{4v} <= 0. Mode Nonincrease.
IdentityReport supersolution_first_integral(double lambda, double forcing, double v2_0, double v3_0,
                                            double horizon, double tol = IdentityTolerances{}.first_integral);

/// min over the grid of u(r) - (n/4 - (n-4) r²/4); passes if >= -tol.
IdentityReport barrier_check(const RadialProfile& u, int n, double tol = IdentityTolerances{}.barrier);
IdentityReport barrier_check(const RadialSolution& s, int n, double tol = IdentityTolerances{}.barrier);

/// Pointwise Jensen gap f(t u1 + (1-t) u2) - t f(u1) - (1-t) f(u2) with the
/// nonlinearity of `p`; passes if the largest gap is <= tol·(1 + max|f|).
IdentityReport convexity_gap(std::span<const double> u1, std::span<const double> u2, double t,
                             const ProblemSpec& p, double tol = IdentityTolerances{}.convexity);
IdentityReport convexity_gap(const RadialProfile& u1, const RadialProfile& u2, double t, const ProblemSpec& p,
                             double tol = IdentityTolerances{}.convexity);

}  // namespace gelfand
