#pragma once

#include <span>
#include <string>
#include <vector>

#include "gelfand/constants.hpp"
#include "gelfand/cylinder.hpp"
#include "gelfand/shooting.hpp"

namespace gelfand {

enum class MetricRepresentation {
  BallFactor,      // g = u^{4/(n-4)} |dx|² (n != 4), g = e^{2u} |dx|² (n = 4), u = u(r)
  CylinderFactor,  // g = e^{2u} (dt² + g_{S³}), u = u(t), n = 4
};

/// A radially (or t-) symmetric conformal factor with derivatives to order 4
/// in its own coordinate. Ball factors also carry Δu and Δ²u.
struct RadialConformalMetric {
  MetricRepresentation representation = MetricRepresentation::BallFactor;
  int n = 4;
  std::vector<double> x;  // r in [0, 1] or t in [0, T]
  std::vector<double> u, d1, d2, d3, d4;
  std::vector<double> lap, bilap;  // ball only
  // Cylinder only, optional: u'''' - 4u'' supplied by the producer when it
  // is known more accurately than the difference of d4 and d2.
  std::vector<double> paneitz;

  std::size_t size() const { return x.size(); }

  static RadialConformalMetric from_closed_form(const ClosedForm& cf, std::span<const double> grid);
  /// Ball factor of a converged solution; Δ²u is taken from the equation.
  static RadialConformalMetric from_solution(const RadialSolution& s);
  static RadialConformalMetric from_cylinder(const CylProfile& v);
  /// The round factor of dimension n on `grid` (ball) or the -ln cosh
  /// profile when `cylinder` is set (n = 4).
  static RadialConformalMetric round(int n, std::span<const double> grid, bool cylinder = false);

  /// c·u with all derivatives scaled.
  RadialConformalMetric scaled(double c) const;
};

/// Q of the product metric dt² + g_{S³}, backed out of the cylinder
/// transformation law at one t using the -ln cosh factor, whose Q is the
/// round value 6.
double derive_cylinder_product_q(double t = 0.7);
/// Frozen value of derive_cylinder_product_q().
inline constexpr double cylinder_product_q = 0.0;

/// Pointwise Q-curvature.
///   ball, n != 4:  (2/(n-4)) u^{-(n+4)/(n-4)} Δ²u
///   ball, n = 4:   e^{-4u} Δ²u
///   cylinder:      e^{-4u} (u'''' - 4u'' + Q_product)
/// Throws NonpositiveFactor for a ball factor with u <= 0 and n != 4.
std::vector<double> q_curvature(const RadialConformalMetric& m);

/// Pointwise scalar curvature.
///   ball, n != 4:  -(4(n-1)/(n-2)) Δφ / u^{(n+2)/(n-4)},  φ = u^{(n-2)/(n-4)}
///   ball, n = 4:   -6 e^{-2u} (Δu + u'²)
///   cylinder:      6 e^{-2u} - 6 e^{-3u} Δ₀(e^u) = 6 e^{-2u} (1 - u'' - u'²)
/// For the cylinder the bracket is O(e^{-2t}) on a complete profile, so the
/// absolute error grows like e^{2t}·eps (about 4e-11 at t = 6).
std::vector<double> scalar_curvature(const RadialConformalMetric& m);

struct TCurvature {
  double value = 0.0;     // T = u'''(0)/2 (pointwise, constant on S³)
  double integral = 0.0;  // ∫_{S³} T = 2π² T
  int sign = 0;
  double normal_derivative_R = 0.0;  // ∂R/∂ν = 6 u'''(0)
};

/// Boundary T-curvature of a cylinder factor at t = 0.
TCurvature t_curvature_boundary(const RadialConformalMetric& m);

struct Hypothesis {
  std::string name;
  bool pass = false;
  double margin = 0.0;  // >= 0 when satisfied (equalities: minus the defect)
};

struct RigidityReport {
  std::vector<Hypothesis> hypotheses;
  bool all_pass = false;
  bool zero_margins = false;  // every margin within tolerance of 0
  double distance_to_round = 0.0;
  std::string verdict;
};

/// Evaluates the rigidity hypotheses for the factor: Q_g >= Q₀, boundary
/// metric equal to the round one, totally geodesic boundary, and the boundary
/// scalar-curvature (ball) or T-curvature (cylinder) sign condition.
RigidityReport rigidity_hypothesis_report(const RadialConformalMetric& m, double tol = 1e-6);

/// n = 4 change of variables v(t) = u(e^{-t}) - t between a ball factor
/// (nodes with r > 0) and a cylinder factor; output abscissae increasing.
/// Going to the ball divides t-derivatives by r^k = e^{-kt}; keep t modest.
RadialConformalMetric ball_to_cylinder(const RadialConformalMetric& ball);
RadialConformalMetric cylinder_to_ball(const RadialConformalMetric& cyl);

}  // namespace gelfand
