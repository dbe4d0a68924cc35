#include <algorithm>
#include <cmath>
#include <sstream>

#include "cylinder_taylor.hpp"
#include "gelfand/errors.hpp"
#include "gelfand/shooting.hpp"

namespace gelfand {

namespace {

using detail::Real;

struct Newton2 {
  Real v2, v3;
  Real residual;
  int iterations = 0;
};

// Residual (v'(T) + 1, v''(T)) and its Jacobian in (v''(0), v'''(0)).
struct FarField {
  Real f0, f1;
  Real j00, j01, j10, j11;
};

FarField far_field(const Real& lambda, const Real& v2, const Real& v3, double horizon,
                   const detail::TaylorOptions& opt) {
  const auto s = detail::taylor_integrate(lambda, v2, v3, horizon, opt, true, {}, nullptr);
  return {s.end[1] + 1, s.end[2], s.d_v2[1], s.d_v3[1], s.d_v2[2], s.d_v3[2]};
}

bool solve2(const FarField& f, const Real& r0, const Real& r1, Real& x, Real& y) {
  const Real det = f.j00 * f.j11 - f.j01 * f.j10;
  if (det == 0) return false;
  x = (r0 * f.j11 - f.j01 * r1) / det;
  y = (f.j00 * r1 - r0 * f.j10) / det;
  return true;
}

Real max_abs(const Real& a, const Real& b) { return abs(a) > abs(b) ? abs(a) : abs(b); }

// Affine-invariant damped Newton (natural monotonicity test).
Newton2 newton_at_horizon(const Real& lambda, Real v2, Real v3, double horizon, double tol, int max_iter) {
  const auto opt = detail::taylor_options(std::min(tol, 1e-12), horizon);
  FarField f = far_field(lambda, v2, v3, horizon, opt);
  Newton2 out;
  for (int it = 0; it < max_iter; ++it) {
    Real dx, dy;
    if (!solve2(f, -f.f0, -f.f1, dx, dy)) fail(ErrorCode::NoConvergence, "singular far-field Jacobian");
    const Real dn = max_abs(dx, dy);
    out.iterations = it + 1;
    if (dn <= Real(1e-28) * (1 + max_abs(v2, v3))) {
      v2 += dx;
      v3 += dy;
      f = far_field(lambda, v2, v3, horizon, opt);
      out.v2 = v2;
      out.v3 = v3;
      out.residual = max_abs(f.f0, f.f1);
      return out;
    }
    Real step = 1;
    bool accepted = false;
    for (int b = 0; b < 40 && !accepted; ++b, step /= 2) {
      const Real t2 = v2 + step * dx, t3 = v3 + step * dy;
      try {
        const FarField ft = far_field(lambda, t2, t3, horizon, opt);
        Real sx, sy;
        if (!solve2(f, -ft.f0, -ft.f1, sx, sy)) break;
        if (max_abs(sx, sy) <= (1 - step / 4) * dn) {
          v2 = t2;
          v3 = t3;
          f = ft;
          accepted = true;
        }
      } catch (const Error& e) {
        if (e.code() != ErrorCode::BlowUp) throw;
      }
    }
    if (!accepted) {
      std::ostringstream os;
      os << "far-field Newton stalled at T = " << horizon;
      fail(ErrorCode::NoConvergence, os.str());
    }
  }
  std::ostringstream os;
  os << "far-field Newton did not converge at T = " << horizon;
  fail(ErrorCode::NoConvergence, os.str());
}

}  // namespace

CylProfile solve_cylinder_bvp(double lambda, double horizon, std::pair<double, double> seed, double tol,
                              const CylinderBvpOptions& opt) {
  if (!(horizon >= 10.0)) fail(ErrorCode::InvalidArgument, "cylinder BVP needs T >= 10");
  if (!(tol > 0.0)) fail(ErrorCode::InvalidArgument, "tol must be > 0");
  if (!std::isfinite(lambda) || !std::isfinite(seed.first) || !std::isfinite(seed.second))
    fail(ErrorCode::InvalidArgument, "cylinder BVP data must be finite");

  const Real lam = lambda;
  Real v2 = seed.first, v3 = seed.second;
  double T = std::min(opt.start_horizon, horizon);
  Newton2 res;
  int total = 0;
  bool anchored = false;  // some horizon has been solved
  for (;;) {
    try {
      res = newton_at_horizon(lam, v2, v3, T, tol, opt.max_iter);
    } catch (const Error& e) {
      const bool retry = e.code() == ErrorCode::BlowUp || e.code() == ErrorCode::NoConvergence;
      // A seed that escapes before the first horizon gets a shorter one.
      if (retry && !anchored && T > 0.3) {
        T *= 0.5;
        continue;
      }
      if (e.code() == ErrorCode::BlowUp) fail(ErrorCode::NoConvergence, std::string("far-field shooting escaped: ") + e.what());
      throw;
    }
    anchored = true;
    total += res.iterations;
    v2 = res.v2;
    v3 = res.v3;
    if (T >= horizon) break;
    T = std::min(1.5 * T, horizon);
  }
  if (!(double(res.residual) <= tol)) {
    std::ostringstream os;
    os << "far-field residual " << double(res.residual) << " exceeds tol";
    fail(ErrorCode::NoConvergence, os.str());
  }
  if (opt.enforce_nonnegative_v3 && v3 < -Real(tol)) {
    std::ostringstream os;
    os << "converged root has v'''(0) = " << double(v3) << " < 0";
    fail(ErrorCode::NoConvergence, os.str());
  }

  CylProfile prof;
  prof.lambda = lambda;
  const auto samples = cylinder_samples(horizon, opt.sample_spacing);
  auto rec = [&](double t, const detail::CylState& s) {
    prof.t.push_back(t);
    prof.v.push_back(double(s[0]));
    prof.dv.push_back(double(s[1]));
    prof.d2v.push_back(double(s[2]));
    prof.d3v.push_back(double(s[3]));
    prof.d4v.push_back(double(4 * s[2] + lam * exp(4 * s[0])));
  };
  detail::taylor_integrate(lam, v2, v3, horizon, detail::taylor_options(std::min(tol, 1e-12), horizon), false,
                           samples, rec);
  prof.boundary_residual = double(res.residual);
  prof.newton_iterations = total;
  return prof;
}

}  // namespace gelfand
