#pragma once

#include <optional>
#include <string>
#include <vector>

namespace gelfand {

/// Right-hand side family of a radial Gelfand problem.
///   Exp2u       g(u) = e^{2u}                      (second order, n = 2)
///   ScalarPower g(u) = (1+u)^{(n+2)/(n-2)}         (second order, n >= 3)
///   Exp4u       f(u) = e^{4u}                      (fourth order, n = 4)
///   QPower      f(u) = u^{(n+4)/(n-4)}             (fourth order, n >= 5)
enum class Nonlinearity { Exp2u, Exp4u, ScalarPower, QPower };

const char* to_string(Nonlinearity g);
Nonlinearity nonlinearity_from_string(const std::string& name);

struct BoundaryData {
  double u1 = 0.0;
  std::optional<double> du1;  // present iff order == 4
};

/// A radial problem on the unit ball:
///   order 2:  -Δu = λ g(u),  u(1) = bc.u1
///   order 4:   Δ²u = λ f(u), u(1) = bc.u1, u'(1) = bc.du1
struct ProblemSpec {
  int order = 2;
  int n = 2;
  Nonlinearity nonlinearity = Nonlinearity::Exp2u;
  double lambda = 0.0;
  BoundaryData bc;

  /// Dirichlet problem (G_λ) with the conformal nonlinearity for dimension n.
  static ProblemSpec second_order(int n, double lambda = 0.0);
  /// Clamped problem with hemisphere boundary rows: QPower for n >= 5,
  /// Exp4u for n = 4.
  static ProblemSpec fourth_order(int n, double lambda = 0.0);

  /// Throws InvalidArgument on inconsistent order/dimension/nonlinearity.
  void validate() const;

  /// Number of free centre values: u(0) for order 2, (u(0), Δu(0)) for order 4.
  int num_center_values() const { return order == 2 ? 1 : 2; }

  double exponent() const;

  // Nonlinearity and its first two derivatives. Throws LostPositivity when
  // the argument leaves the domain of a power nonlinearity.
  double f(double u) const;
  double df(double u) const;
  double d2f(double u) const;

  ProblemSpec with_lambda(double l) const {
    ProblemSpec p = *this;
    p.lambda = l;
    return p;
  }
};

/// Centre values of the λ = 0 solution (u ≡ 0 for order 2, the biharmonic
/// quadratic fitted to the clamped boundary rows for order 4).
std::vector<double> lambda_zero_center(const ProblemSpec& p);

/// The λ = 0 solution itself at radius r (for order 4 this is the barrier
/// profile every positive-RHS solution dominates).
double lambda_zero_profile(const ProblemSpec& p, double r);

/// Radial state. For order 2 the Laplacian entries are derived from the
/// equation (Δu = -λ g(u)).
struct StateVector {
  double u = 0.0;
  double du = 0.0;
  double w = 0.0;   // Δu
  double dw = 0.0;  // (Δu)'
};

/// A radial function sampled on an increasing grid in [0, 1].
struct RadialProfile {
  int n = 0;
  std::vector<double> r;
  std::vector<double> u;
  std::vector<double> du;
  std::vector<double> lap;
  std::vector<double> dlap;
  double max_residual = 0.0;

  std::size_t size() const { return r.size(); }
  /// Cubic Hermite interpolation of u using (u, u').
  double value_at(double x) const;
};

/// Uniform grid with `intervals` cells on [0, 1] (intervals + 1 nodes).
std::vector<double> uniform_grid(int intervals);

double sup_distance(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace gelfand
