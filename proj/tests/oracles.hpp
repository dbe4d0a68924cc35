#pragma once

// Reference computations for the tests, written independently of the library
// numerics: a fixed-step RK4 radial integrator, the explicit two-dimensional
// exponential branch, central differences and a dense generalized eigensolver.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "gelfand/problem.hpp"
#include "gelfand/spectrum.hpp"

namespace oracle {

inline double g(const gelfand::ProblemSpec& p, double u) {
  using gelfand::Nonlinearity;
  switch (p.nonlinearity) {
    case Nonlinearity::Exp2u: return std::exp(2.0 * u);
    case Nonlinearity::Exp4u: return std::exp(4.0 * u);
    case Nonlinearity::ScalarPower: return std::pow(1.0 + u, double(p.n + 2) / (p.n - 2));
    case Nonlinearity::QPower: return std::pow(u, double(p.n + 4) / (p.n - 4));
  }
  return NAN;
}

struct RadialSamples {
  std::vector<double> r, u, du, w, dw;
};

/// Classical RK4 with step h from r0 = h to 1 (state u, u', w, w'; for order 2
/// w = -λg(u) is not integrated). The first step starts from the two-term
/// even expansion about r = 0.
inline RadialSamples rk4_radial(const gelfand::ProblemSpec& p, std::vector<double> center, double h) {
  const int n = p.n;
  const double lam = p.lambda;
  using State = std::array<double, 4>;
  auto rhs = [&](double r, const State& y) {
    State d{};
    d[0] = y[1];
    if (p.order == 2) {
      d[1] = -lam * g(p, y[0]) - (n - 1) * y[1] / r;
    } else {
      d[1] = y[2] - (n - 1) * y[1] / r;
      d[2] = y[3];
      d[3] = lam * g(p, y[0]) - (n - 1) * y[3] / r;
    }
    return d;
  };
  const double u0 = center[0];
  const double w0 = p.order == 2 ? -lam * g(p, u0) : center[1];
  const double lw = p.order == 2 ? 0.0 : lam * g(p, u0);
  double r = h;
  State y{u0 + w0 * r * r / (2 * n), w0 * r / n, w0 + lw * r * r / (2 * n), lw * r / n};
  RadialSamples out;
  auto record = [&] {
    out.r.push_back(r);
    out.u.push_back(y[0]);
    out.du.push_back(y[1]);
    out.w.push_back(p.order == 2 ? -lam * g(p, y[0]) : y[2]);
    out.dw.push_back(y[3]);
  };
  record();
  const long steps = std::lround((1.0 - h) / h);
  for (long k = 0; k < steps; ++k) {
    auto add = [](const State& a, const State& b, double s) {
      State c;
      for (int i = 0; i < 4; ++i) c[i] = a[i] + s * b[i];
      return c;
    };
    const State k1 = rhs(r, y);
    const State k2 = rhs(r + h / 2, add(y, k1, h / 2));
    const State k3 = rhs(r + h / 2, add(y, k2, h / 2));
    const State k4 = rhs(r + h, add(y, k3, h));
    for (int i = 0; i < 4; ++i) y[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    r += h;
    record();
  }
  return out;
}

/// -Δu = λ e^{2u} on the unit disc, u(1) = 0: with b > 0,
/// u = ln((1+b)/(1+b r²)), λ = 4b/(1+b)², so u(0) = ln(1+b).
inline double exp2u_lambda_of_u0(double u0) {
  const double b = std::expm1(u0);
  return 4.0 * b / ((1.0 + b) * (1.0 + b));
}
inline double exp2u_profile(double u0, double r) {
  const double b = std::expm1(u0);
  return std::log((1.0 + b) / (1.0 + b * r * r));
}

inline double central_difference(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// Smallest eigenvalue of A x = μ diag(mass) x by a dense symmetric solver.
inline double dense_smallest(const gelfand::LinearizedOperator& op) {
  const Eigen::MatrixXd A(op.A);
  const Eigen::MatrixXd M = op.mass.asDiagonal();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(A, M);
  return es.eigenvalues()(0);
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

}  // namespace oracle
