#pragma once

#include <span>
#include <vector>

namespace gelfand {

/// A function of the cylindrical variable t = -ln r sampled on [0, T], with
/// derivatives through order 4 (the fourth one from the equation).
struct CylProfile {
  double lambda = 0.0;
  std::vector<double> t;
  std::vector<double> v, dv, d2v, d3v, d4v;
  double boundary_residual = 0.0;  // far-field mismatch when produced by the BVP path
  int newton_iterations = 0;

  std::size_t size() const { return t.size(); }
};

/// Uniform sample abscissae on [0, horizon] with the given spacing.
std::vector<double> cylinder_samples(double horizon, double spacing = 0.01);

/// Solves v'''' - 4 v'' = λ e^{4v}, v(0) = v'(0) = 0, v''(0) = v2_0,
/// v'''(0) = v3_0 on [0, horizon].
///
/// The linear part has an e^{2t} mode, so any local error is amplified by
/// up to e^{2T}. The integration therefore runs a high-order Taylor method in
/// 50-digit arithmetic with the local error budget tol·e^{-2T}; samples are
/// rounded to double on output. Empty `samples` selects spacing 0.01.
/// Throws BlowUp when the solution escapes (overflow guard 1e12 or step
/// collapse at a movable singularity).
CylProfile integrate_cylinder_ivp(double lambda, double v2_0, double v3_0, double horizon, double tol,
                                  std::span<const double> samples = {});

/// Closed-form-free helper: the profile of a cylinder function given on
/// samples, used by conversions and tests.
CylProfile make_cyl_profile(double lambda, std::vector<double> t, std::vector<double> v,
                            std::vector<double> dv, std::vector<double> d2v, std::vector<double> d3v);

}  // namespace gelfand
