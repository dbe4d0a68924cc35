#include "gelfand/problem.hpp"

#include <algorithm>
#include <cmath>

#include "gelfand/errors.hpp"

namespace gelfand {

const char* to_string(Nonlinearity g) {
  switch (g) {
    case Nonlinearity::Exp2u: return "exp2u";
    case Nonlinearity::Exp4u: return "exp4u";
    case Nonlinearity::ScalarPower: return "scalar-power";
    case Nonlinearity::QPower: return "q-power";
  }
  return "?";
}

Nonlinearity nonlinearity_from_string(const std::string& name) {
  if (name == "exp2u") return Nonlinearity::Exp2u;
  if (name == "exp4u") return Nonlinearity::Exp4u;
  if (name == "scalar-power") return Nonlinearity::ScalarPower;
  if (name == "q-power") return Nonlinearity::QPower;
  fail(ErrorCode::InvalidArgument, "unknown nonlinearity '" + name + "'");
}

ProblemSpec ProblemSpec::second_order(int n, double lambda) {
  if (n < 2) fail(ErrorCode::InvalidArgument, "dimension must be >= 2");
  ProblemSpec p;
  p.order = 2;
  p.n = n;
  p.nonlinearity = n == 2 ? Nonlinearity::Exp2u : Nonlinearity::ScalarPower;
  p.lambda = lambda;
  p.bc = {0.0, std::nullopt};
  return p;
}

ProblemSpec ProblemSpec::fourth_order(int n, double lambda) {
  if (n < 4) fail(ErrorCode::InvalidArgument, "fourth-order Gelfand family needs n >= 4");
  ProblemSpec p;
  p.order = 4;
  p.n = n;
  p.lambda = lambda;
  if (n == 4) {
    p.nonlinearity = Nonlinearity::Exp4u;
    p.bc = {0.0, -1.0};
  } else {
    p.nonlinearity = Nonlinearity::QPower;
    p.bc = {1.0, -(n - 4) / 2.0};
  }
  return p;
}

void ProblemSpec::validate() const {
  if (order != 2 && order != 4) fail(ErrorCode::InvalidArgument, "order must be 2 or 4");
  if (n < 2) fail(ErrorCode::InvalidArgument, "dimension must be >= 2");
  if (!std::isfinite(lambda)) fail(ErrorCode::InvalidArgument, "lambda must be finite");
  switch (nonlinearity) {
    case Nonlinearity::Exp2u:
      if (order != 2) fail(ErrorCode::InvalidArgument, "exp2u is a second-order nonlinearity");
      break;
    case Nonlinearity::ScalarPower:
      if (order != 2 || n < 3)
        fail(ErrorCode::InvalidArgument, "scalar-power needs order 2 and n >= 3");
      break;
    case Nonlinearity::Exp4u:
      if (order != 4) fail(ErrorCode::InvalidArgument, "exp4u is a fourth-order nonlinearity");
      break;
    case Nonlinearity::QPower:
      if (order != 4 || n < 5) fail(ErrorCode::InvalidArgument, "q-power needs order 4 and n >= 5");
      break;
  }
  if (order == 4 && !bc.du1) fail(ErrorCode::InvalidArgument, "order 4 needs u'(1)");
  if (order == 2 && bc.du1) fail(ErrorCode::InvalidArgument, "order 2 takes only u(1)");
}

double ProblemSpec::exponent() const {
  switch (nonlinearity) {
    case Nonlinearity::Exp2u: return 2.0;
    case Nonlinearity::Exp4u: return 4.0;
    case Nonlinearity::ScalarPower: return double(n + 2) / double(n - 2);
    case Nonlinearity::QPower: return double(n + 4) / double(n - 4);
  }
  return 0.0;
}

namespace {

double power_base(const ProblemSpec& p, double u) {
  const double base = p.nonlinearity == Nonlinearity::ScalarPower ? 1.0 + u : u;
  if (!(base > 0.0)) fail(ErrorCode::LostPositivity, "power nonlinearity evaluated at non-positive base");
  return base;
}

}  // namespace

double ProblemSpec::f(double u) const {
  switch (nonlinearity) {
    case Nonlinearity::Exp2u: return std::exp(2.0 * u);
    case Nonlinearity::Exp4u: return std::exp(4.0 * u);
    default: return std::pow(power_base(*this, u), exponent());
  }
}

double ProblemSpec::df(double u) const {
  switch (nonlinearity) {
    case Nonlinearity::Exp2u: return 2.0 * std::exp(2.0 * u);
    case Nonlinearity::Exp4u: return 4.0 * std::exp(4.0 * u);
    default: {
      const double q = exponent();
      return q * std::pow(power_base(*this, u), q - 1.0);
    }
  }
}

double ProblemSpec::d2f(double u) const {
  switch (nonlinearity) {
    case Nonlinearity::Exp2u: return 4.0 * std::exp(2.0 * u);
    case Nonlinearity::Exp4u: return 16.0 * std::exp(4.0 * u);
    default: {
      const double q = exponent();
      return q * (q - 1.0) * std::pow(power_base(*this, u), q - 2.0);
    }
  }
}

std::vector<double> lambda_zero_center(const ProblemSpec& p) {
  if (p.order == 2) return {p.bc.u1};
  // u = c0 + c1 r^2 with 2 c1 = u'(1), c0 + c1 = u(1); Δu = 2 n c1.
  const double c1 = *p.bc.du1 / 2.0;
  return {p.bc.u1 - c1, 2.0 * p.n * c1};
}

double lambda_zero_profile(const ProblemSpec& p, double r) {
  if (p.order == 2) return p.bc.u1;
  const double c1 = *p.bc.du1 / 2.0;
  return p.bc.u1 - c1 + c1 * r * r;
}

double RadialProfile::value_at(double x) const {
  if (r.empty()) fail(ErrorCode::InvalidArgument, "empty profile");
  if (x <= r.front()) return u.front();
  if (x >= r.back()) return u.back();
  const auto it = std::upper_bound(r.begin(), r.end(), x);
  const std::size_t i = std::size_t(it - r.begin()) - 1;
  const double h = r[i + 1] - r[i];
  const double s = (x - r[i]) / h;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
  const double h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s);
  const double h11 = s * s * (s - 1);
  return h00 * u[i] + h10 * h * du[i] + h01 * u[i + 1] + h11 * h * du[i + 1];
}

std::vector<double> uniform_grid(int intervals) {
  if (intervals < 1) fail(ErrorCode::InvalidArgument, "grid needs at least one interval");
  std::vector<double> g(std::size_t(intervals) + 1);
  for (int i = 0; i <= intervals; ++i) g[std::size_t(i)] = double(i) / intervals;
  g.back() = 1.0;
  return g;
}

double sup_distance(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) fail(ErrorCode::InvalidArgument, "size mismatch in sup_distance");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace gelfand
