#include "gelfand/identities.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gelfand/errors.hpp"

namespace gelfand {

namespace {

IdentityReport finish(IdentityReport r) {
  r.pass = std::isfinite(r.residual) && r.residual <= r.tolerance;
  return r;
}

void require_power_problem(const ProblemSpec& p) {
  if (p.order != 4 || p.nonlinearity != Nonlinearity::QPower)
    fail(ErrorCode::WrongProblem, "Pohozaev identity applies to the clamped power problem only");
}

}  // namespace

double pohozaev_boundary_value(int n, double lambda, double u1, double du1, double lap1) {
  if (n <= 4) fail(ErrorCode::InvalidArgument, "Pohozaev boundary identity needs n >= 5");
  const double q = 2.0 * n / (n - 4.0);
  return 0.5 * n * du1 * lap1 - (0.5 * lap1 * lap1 + (n - 4.0) / (2.0 * n) * lambda * std::pow(u1, q));
}

IdentityReport pohozaev_boundary_residual(const RadialSolution& s, int n, double lambda, double tol) {
  require_power_problem(s.problem);
  const auto& pr = s.profile;
  if (pr.size() == 0) fail(ErrorCode::InvalidArgument, "empty profile");
  IdentityReport r;
  r.name = "pohozaev-boundary";
  r.value = pr.lap.back();
  r.residual = std::fabs(pohozaev_boundary_value(n, lambda, pr.u.back(), pr.du.back(), pr.lap.back()));
  r.tolerance = tol;
  return finish(r);
}

IdentityReport pohozaev_interior(const RadialProfile& u, int n, double lambda, double tol) {
  if (n <= 4) fail(ErrorCode::InvalidArgument, "Pohozaev identity needs n >= 5");
  IdentityReport r;
  r.name = "pohozaev-interior";
  r.tolerance = tol;
  const double q = 2.0 * n / (n - 4.0);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double x = u.r[i];
    const double rn1 = std::pow(x, n - 1);
    const double P = rn1 * u.dlap[i] * (x * u.du[i] + 0.5 * (n - 4) * u.u[i]) + 0.5 * n * rn1 * u.du[i] * u.lap[i] -
                     x * rn1 * (0.5 * u.lap[i] * u.lap[i] + (n - 4.0) / (2.0 * n) * lambda * std::pow(u.u[i], q));
    r.details.emplace_back(x, P);
    r.residual = std::max(r.residual, std::fabs(P));
  }
  return finish(r);
}

double pohozaev_discriminant(int n, double lambda) {
  if (n <= 4) fail(ErrorCode::InvalidArgument, "Pohozaev quadratic needs n >= 5");
  const double b = n * (n - 4) / 2.0;
  const double c = (n - 4) * lambda / n;
  return b * b - 4.0 * c;
}

std::pair<double, double> pohozaev_roots(int n, double lambda) {
  const double D = pohozaev_discriminant(n, lambda);
  if (D < 0.0) {
    std::ostringstream os;
    os << "no real Delta u(1) for n = " << n << ", lambda = " << lambda << " (discriminant " << D << ")";
    fail(ErrorCode::NoRealRoots, os.str());
  }
  const double b = n * (n - 4) / 2.0;
  const double c = (n - 4) * lambda / n;
  // Stable form: the larger-magnitude root first, the other from the product.
  const double big = -0.5 * (b + std::sqrt(D));
  const double small = big == 0.0 ? 0.0 : c / big;
  return {std::min(big, small), std::max(big, small)};
}

std::pair<double, double> cylinder_boundary_roots(double lambda) {
  const double d = 4.0 - lambda / 2.0;
  if (d < 0.0) {
    std::ostringstream os;
    os << "no real Delta u(1) for lambda = " << lambda << " > 8";
    fail(ErrorCode::NoRealRoots, os.str());
  }
  return {-2.0 - std::sqrt(d), -2.0 + std::sqrt(d)};
}

IdentityReport first_integral_series(const CylProfile& v, double lambda, FirstIntegralMode mode, double tol) {
  IdentityReport r;
  r.name = mode == FirstIntegralMode::Conservation ? "first-integral" : "first-integral-nonincrease";
  r.tolerance = tol;
  double running_min = INFINITY;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double a = v.d3v[i] * v.dv[i], b = 0.5 * v.d2v[i] * v.d2v[i], c = 2.0 * v.dv[i] * v.dv[i];
    const double d = 0.25 * lambda * std::exp(4.0 * v.v[i]);
    const double E = a - b - c - d;
    const double scale = 1.0 + std::fabs(a) + b + c + std::fabs(d);
    r.details.emplace_back(v.t[i], E);
    if (i == 0) r.value = E;
    if (mode == FirstIntegralMode::Conservation) {
      r.residual = std::max(r.residual, std::fabs(E - r.value) / scale);
    } else {
      if (i > 0) r.residual = std::max(r.residual, (E - running_min) / scale);
      running_min = std::min(running_min, E);
    }
  }
  return finish(r);
}

IdentityReport supersolution_first_integral(double lambda, double forcing, double v2_0, double v3_0,
                                            double horizon, double tol) {
  if (!(forcing >= lambda)) fail(ErrorCode::InvalidArgument, "forcing must be >= lambda");
  for (double T = horizon;; T *= 0.5) {
    if (T < 0.25) fail(ErrorCode::BlowUp, "supersolution trajectory escapes before t = 0.25");
    CylProfile v;
    try {
      v = integrate_cylinder_ivp(forcing, v2_0, v3_0, T, 1e-12);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::BlowUp) throw;
      continue;
    }
    std::size_t keep = 1;
    while (keep < v.size() && v.dv[keep] <= 0.0) ++keep;
    auto cut = [keep](const std::vector<double>& x) { return std::vector<double>(x.begin(), x.begin() + keep); };
    const CylProfile w = make_cyl_profile(forcing, cut(v.t), cut(v.v), cut(v.dv), cut(v.d2v), cut(v.d3v));
    IdentityReport r = first_integral_series(w, lambda, FirstIntegralMode::Nonincrease, tol);
    r.name = "first-integral-supersolution";
    return r;
  }
}

IdentityReport barrier_check(const RadialProfile& u, int n, double tol) {
  if (n < 5) fail(ErrorCode::InvalidArgument, "barrier applies for n >= 5");
  IdentityReport r;
  r.name = "barrier";
  r.tolerance = tol;
  r.value = INFINITY;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double x = u.r[i];
    const double m = u.u[i] - (n / 4.0 - (n - 4) / 4.0 * x * x);
    r.details.emplace_back(x, m);
    r.value = std::min(r.value, m);
  }
  r.residual = std::max(0.0, -r.value);
  return finish(r);
}

IdentityReport barrier_check(const RadialSolution& s, int n, double tol) { return barrier_check(s.profile, n, tol); }

IdentityReport convexity_gap(std::span<const double> u1, std::span<const double> u2, double t, const ProblemSpec& p,
                             double tol) {
  if (u1.size() != u2.size()) fail(ErrorCode::InvalidArgument, "profiles must share a grid");
  if (!(t >= 0.0 && t <= 1.0)) fail(ErrorCode::InvalidArgument, "weight must lie in [0, 1]");
  IdentityReport r;
  r.name = "convexity-gap";
  r.value = -INFINITY;
  double scale = 0.0;
  for (std::size_t i = 0; i < u1.size(); ++i) {
    const double f1 = p.f(u1[i]), f2 = p.f(u2[i]);
    const double gap = p.f(t * u1[i] + (1 - t) * u2[i]) - t * f1 - (1 - t) * f2;
    scale = std::max({scale, std::fabs(f1), std::fabs(f2)});
    r.details.emplace_back(double(i), gap);
    r.value = std::max(r.value, gap);
  }
  if (u1.empty()) r.value = 0.0;
  r.residual = std::max(0.0, r.value);
  r.tolerance = tol * (1.0 + scale);
  return finish(r);
}

IdentityReport convexity_gap(const RadialProfile& u1, const RadialProfile& u2, double t, const ProblemSpec& p,
                             double tol) {
  if (u1.r != u2.r) fail(ErrorCode::InvalidArgument, "profiles must share a grid");
  auto r = convexity_gap(std::span<const double>(u1.u), std::span<const double>(u2.u), t, p, tol);
  for (std::size_t i = 0; i < r.details.size(); ++i) r.details[i].first = u1.r[i];
  return r;
}

}  // namespace gelfand
