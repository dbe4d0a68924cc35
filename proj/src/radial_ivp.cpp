#include "gelfand/radial_ivp.hpp"

#include <cmath>

#include "gelfand/errors.hpp"

namespace gelfand {

namespace {

// Even Taylor expansion about r = 0, with partial derivatives of every
// coefficient with respect to (centre values..., λ).
struct CenterExpansion {
  int order = 2;
  double u0 = 0, a = 0, b = 0;      // u = u0 + a r² + b r⁴
  double w0 = 0, al = 0, be = 0;    // Δu = w0 + al r² + be r⁴ (order 4)
  Eigen::MatrixXd du;               // rows: u0, a, b, w0, al, be; cols: params

  StateVector at(double r, const ProblemSpec& p) const {
    const double r2 = r * r;
    StateVector s;
    s.u = u0 + a * r2 + b * r2 * r2;
    s.du = 2 * a * r + 4 * b * r2 * r;
    if (order == 4) {
      s.w = w0 + al * r2 + be * r2 * r2;
      s.dw = 2 * al * r + 4 * be * r2 * r;
    } else {
      s.w = -p.lambda * p.f(s.u);
      s.dw = -p.lambda * p.df(s.u) * s.du;
    }
    return s;
  }
};

CenterExpansion expand_center(const ProblemSpec& p, std::span<const double> center) {
  CenterExpansion e;
  e.order = p.order;
  const double n = p.n, lam = p.lambda;
  const double k4 = 4.0 * (n + 2.0);
  if (p.order == 2) {
    // Params (u0, λ).
    e.du = Eigen::MatrixXd::Zero(6, 2);
    e.u0 = center[0];
    const double G = p.f(e.u0), G1 = p.df(e.u0), G2 = p.d2f(e.u0);
    e.a = -lam * G / (2 * n);
    e.b = -lam * G1 * e.a / k4;
    const double a_u = -lam * G1 / (2 * n), a_l = -G / (2 * n);
    e.du.row(0) << 1.0, 0.0;
    e.du.row(1) << a_u, a_l;
    e.du.row(2) << -lam * (G2 * e.a + G1 * a_u) / k4, -(G1 * e.a + lam * G1 * a_l) / k4;
    return e;
  }
  // Params (u0, w0, λ).
  e.du = Eigen::MatrixXd::Zero(6, 3);
  e.u0 = center[0];
  e.w0 = center[1];
  const double F = p.f(e.u0), F1 = p.df(e.u0), F2 = p.d2f(e.u0);
  e.a = e.w0 / (2 * n);
  e.al = lam * F / (2 * n);
  e.b = e.al / k4;
  e.be = lam * F1 * e.a / k4;
  e.du.row(0) << 1.0, 0.0, 0.0;
  e.du.row(1) << 0.0, 1.0 / (2 * n), 0.0;
  e.du.row(4) << lam * F1 / (2 * n), 0.0, F / (2 * n);
  e.du.row(2) = e.du.row(4) / k4;
  e.du.row(3) << 0.0, 1.0, 0.0;
  e.du.row(5) << lam * F2 * e.a / k4, lam * F1 / (2 * n) / k4, F1 * e.a / k4;
  return e;
}

int state_dim(const ProblemSpec& p) { return p.order; }

void check_center(const ProblemSpec& p, std::span<const double> center) {
  p.validate();
  if (int(center.size()) != p.num_center_values())
    fail(ErrorCode::InvalidArgument, "wrong number of centre values");
  for (double c : center)
    if (!std::isfinite(c)) fail(ErrorCode::InvalidArgument, "centre values must be finite");
}

// State-only right-hand side.
void radial_rhs(const ProblemSpec& p, double r, std::span<const double> y, std::span<double> dy) {
  const double c = (p.n - 1) / r;
  if (p.order == 2) {
    dy[0] = y[1];
    dy[1] = -p.lambda * p.f(y[0]) - c * y[1];
  } else {
    dy[0] = y[1];
    dy[1] = y[2] - c * y[1];
    dy[2] = y[3];
    dy[3] = p.lambda * p.f(y[0]) - c * y[3];
  }
}

StateVector to_state(const ProblemSpec& p, std::span<const double> y) {
  StateVector s;
  s.u = y[0];
  s.du = y[1];
  if (p.order == 4) {
    s.w = y[2];
    s.dw = y[3];
  } else {
    s.w = -p.lambda * p.f(s.u);
    s.dw = -p.lambda * p.df(s.u) * s.du;
  }
  return s;
}

std::vector<double> initial_state(const ProblemSpec& p, const CenterExpansion& e, double eps) {
  const StateVector s = e.at(eps, p);
  if (p.order == 2) return {s.u, s.du};
  return {s.u, s.du, s.w, s.dw};
}

Dopri5Options dopri_options(const RadialIvpOptions& opt) {
  if (!(opt.tol > 0.0)) fail(ErrorCode::InvalidArgument, "tol must be > 0");
  Dopri5Options d;
  d.rtol = opt.tol;
  d.atol = opt.tol;
  d.overflow_guard = opt.overflow_guard;
  d.h_init = 1e-3;
  return d;
}

}  // namespace

Trajectory integrate_radial_ivp(const ProblemSpec& p, std::span<const double> center, double tol,
                                std::span<const double> grid) {
  RadialIvpOptions opt;
  opt.tol = tol;
  return integrate_radial_ivp(p, center, grid, opt);
}

Trajectory integrate_radial_ivp(const ProblemSpec& p, std::span<const double> center,
                                std::span<const double> grid, const RadialIvpOptions& opt) {
  check_center(p, center);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < 0.0 || grid[i] > 1.0) fail(ErrorCode::DomainError, "grid must lie in [0, 1]");
    if (i > 0 && !(grid[i] > grid[i - 1])) fail(ErrorCode::InvalidArgument, "grid must be increasing");
  }
  const double eps = opt.start_offset;
  const CenterExpansion e = expand_center(p, center);

  Trajectory t;
  std::size_t first_ode = 0;
  while (first_ode < grid.size() && grid[first_ode] <= eps) {
    t.r.push_back(grid[first_ode]);
    t.states.push_back(e.at(grid[first_ode], p));
    ++first_ode;
  }
  std::vector<double> y = initial_state(p, e, eps);
  auto rhs = [&p](double r, std::span<const double> yy, std::span<double> dy) { radial_rhs(p, r, yy, dy); };
  auto out = [&](double r, std::span<const double> yy) {
    t.r.push_back(r);
    t.states.push_back(to_state(p, yy));
  };
  t.stats = integrate_dopri5(rhs, eps, y, 1.0, grid.subspan(first_ode), out, dopri_options(opt));
  t.end = to_state(p, y);
  return t;
}

ShotResult shoot(const ProblemSpec& p, std::span<const double> center, const RadialIvpOptions& opt) {
  check_center(p, center);
  const int m = state_dim(p);
  const int k = p.num_center_values() + 1;
  const double eps = opt.start_offset;
  const CenterExpansion e = expand_center(p, center);

  // y = [state; S(:,0); ...; S(:,k-1)]
  std::vector<double> y(std::size_t(m * (k + 1)), 0.0);
  {
    const auto s0 = initial_state(p, e, eps);
    for (int i = 0; i < m; ++i) y[std::size_t(i)] = s0[std::size_t(i)];
    const double r = eps, r2 = r * r, r3 = r2 * r, r4 = r2 * r2;
    for (int j = 0; j < k; ++j) {
      double* S = &y[std::size_t(m * (j + 1))];
      const auto& d = e.du;
      S[0] = d(0, j) + d(1, j) * r2 + d(2, j) * r4;
      S[1] = 2 * d(1, j) * r + 4 * d(2, j) * r3;
      if (m == 4) {
        S[2] = d(3, j) + d(4, j) * r2 + d(5, j) * r4;
        S[3] = 2 * d(4, j) * r + 4 * d(5, j) * r3;
      }
    }
  }

  auto rhs = [&p, m, k](double r, std::span<const double> yy, std::span<double> dy) {
    radial_rhs(p, r, yy.first(std::size_t(m)), dy.first(std::size_t(m)));
    const double c = (p.n - 1) / r;
    const double u = yy[0];
    for (int j = 0; j < k; ++j) {
      const double* S = &yy[std::size_t(m * (j + 1))];
      double* dS = &dy[std::size_t(m * (j + 1))];
      const bool is_lambda = j == k - 1;
      if (m == 2) {
        dS[0] = S[1];
        dS[1] = -p.lambda * p.df(u) * S[0] - c * S[1] - (is_lambda ? p.f(u) : 0.0);
      } else {
        dS[0] = S[1];
        dS[1] = S[2] - c * S[1];
        dS[2] = S[3];
        dS[3] = p.lambda * p.df(u) * S[0] - c * S[3] + (is_lambda ? p.f(u) : 0.0);
      }
    }
  };

  ShotResult res;
  res.stats = integrate_dopri5(rhs, eps, y, 1.0, {}, nullptr, dopri_options(opt));
  res.end = to_state(p, std::span<const double>(y).first(std::size_t(m)));
  res.sensitivity.resize(m, k);
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < m; ++i) res.sensitivity(i, j) = y[std::size_t(m * (j + 1) + i)];
  return res;
}

RadialProfile profile_from_trajectory(const ProblemSpec& p, const Trajectory& t) {
  RadialProfile prof;
  prof.n = p.n;
  prof.r = t.r;
  const std::size_t N = t.r.size();
  prof.u.resize(N);
  prof.du.resize(N);
  prof.lap.resize(N);
  prof.dlap.resize(N);
  for (std::size_t i = 0; i < N; ++i) {
    prof.u[i] = t.states[i].u;
    prof.du[i] = t.states[i].du;
    prof.lap[i] = t.states[i].w;
    prof.dlap[i] = t.states[i].dw;
  }
  return prof;
}

}  // namespace gelfand
