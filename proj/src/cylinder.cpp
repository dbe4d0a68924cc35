#include "gelfand/cylinder.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cylinder_taylor.hpp"
#include "gelfand/errors.hpp"

namespace gelfand {

namespace detail {

namespace {

// Coefficients c_k of v(t0 + h) = sum c_k h^k, k = 0..D, from the ODE
//   (k+1)(k+2)(k+3)(k+4) c_{k+4} = 4 (k+1)(k+2) c_{k+2} + λ E_k,
// with E = e^{4v} and k E_k = 4 sum_{j=1}^{k} j c_j E_{k-j}.
void series(const Real& lambda, const CylState& s, int D, std::vector<Real>& c, std::vector<Real>& E) {
  c.assign(std::size_t(D) + 1, Real(0));
  E.assign(std::size_t(D) + 1, Real(0));
  c[0] = s[0];
  c[1] = s[1];
  c[2] = s[2] / 2;
  c[3] = s[3] / 6;
  E[0] = exp(4 * c[0]);
  for (int k = 0; k + 4 <= D; ++k) {
    if (k > 0) {
      Real acc = 0;
      for (int j = 1; j <= k; ++j) acc += j * c[std::size_t(j)] * E[std::size_t(k - j)];
      E[std::size_t(k)] = 4 * acc / k;
    }
    const Real den = Real(k + 1) * (k + 2) * (k + 3) * (k + 4);
    c[std::size_t(k + 4)] = (4 * Real(k + 1) * (k + 2) * c[std::size_t(k + 2)] + lambda * E[std::size_t(k)]) / den;
  }
}

// Variational series: φ'''' = 4 φ'' + 4 λ E φ.
void variational_series(const Real& lambda, const CylState& s, int D, const std::vector<Real>& E,
                        std::vector<Real>& p) {
  p.assign(std::size_t(D) + 1, Real(0));
  p[0] = s[0];
  p[1] = s[1];
  p[2] = s[2] / 2;
  p[3] = s[3] / 6;
  for (int k = 0; k + 4 <= D; ++k) {
    Real ep = 0;
    for (int j = 0; j <= k; ++j) ep += E[std::size_t(j)] * p[std::size_t(k - j)];
    const Real den = Real(k + 1) * (k + 2) * (k + 3) * (k + 4);
    p[std::size_t(k + 4)] = (4 * Real(k + 1) * (k + 2) * p[std::size_t(k + 2)] + 4 * lambda * ep) / den;
  }
}

CylState evaluate(const std::vector<Real>& c, const Real& h) {
  // Horner for the value and the first three derivatives.
  CylState out{Real(0), Real(0), Real(0), Real(0)};
  const int D = int(c.size()) - 1;
  for (int k = D; k >= 0; --k) {
    out[0] = out[0] * h + c[std::size_t(k)];
    if (k >= 1) out[1] = out[1] * h + Real(k) * c[std::size_t(k)];
    if (k >= 2) out[2] = out[2] * h + Real(k) * (k - 1) * c[std::size_t(k)];
    if (k >= 3) out[3] = out[3] * h + Real(k) * (k - 1) * (k - 2) * c[std::size_t(k)];
  }
  return out;
}

}  // namespace

TaylorOptions taylor_options(double tol, double horizon) {
  if (!(tol > 0.0)) fail(ErrorCode::InvalidArgument, "tol must be > 0");
  TaylorOptions o;
  // Budget the e^{2T} amplification of the unstable mode.
  Real budget = Real(tol) * exp(Real(-2) * Real(horizon)) * Real(1e-3);
  o.local_tol = std::clamp(budget, Real(1e-45), Real(1e-22));
  return o;
}

CylShot taylor_integrate(const Real& lambda, const Real& v2_0, const Real& v3_0, double horizon,
                         const TaylorOptions& opt, bool with_sensitivity,
                         std::span<const double> samples,
                         const std::function<void(double, const CylState&)>& sample) {
  if (!(horizon > 0.0)) fail(ErrorCode::InvalidArgument, "horizon must be > 0");
  const int D = opt.degree;
  CylShot shot;
  CylState s{Real(0), Real(0), v2_0, v3_0};
  CylState p2{Real(0), Real(0), Real(1), Real(0)};
  CylState p3{Real(0), Real(0), Real(0), Real(1)};
  std::vector<Real> c, E, cp2, cp3;
  const Real T = horizon;
  Real t = 0;
  std::size_t next = 0;
  const Real root = exp(log(opt.local_tol) / Real(D - 3));
  while (t < T) {
    series(lambda, s, D, c, E);
    Real rho = -1;
    for (int j = D - 1; j <= D; ++j) {
      const Real a = abs(c[std::size_t(j)]);
      if (a > 0) {
        const Real r = pow(a, Real(-1) / j);
        if (rho < 0 || r < rho) rho = r;
      }
    }
    Real h = rho < 0 ? T - t : Real(0.8) * rho * root;
    bool last = false;
    if (t + h >= T) {
      h = T - t;
      last = true;
    }
    if (h < Real(1e-12) * (T > 1 ? T : Real(1))) {
      std::ostringstream os;
      os << "Taylor step collapsed near t = " << double(t) << " (movable singularity)";
      fail(ErrorCode::BlowUp, os.str());
    }
    if (with_sensitivity) {
      variational_series(lambda, p2, D, E, cp2);
      variational_series(lambda, p3, D, E, cp3);
    }
    const Real t_end = last ? T : t + h;
    while (sample && next < samples.size() && Real(samples[next]) <= t_end) {
      Real local = Real(samples[next]) - t;
      if (local < 0) local = 0;
      sample(samples[next], evaluate(c, local));
      ++next;
    }
    s = evaluate(c, h);
    if (with_sensitivity) {
      p2 = evaluate(cp2, h);
      p3 = evaluate(cp3, h);
    }
    t = t_end;
    ++shot.steps;
    for (const auto& x : s) {
      if (!(abs(x) <= Real(opt.overflow_guard))) {
        std::ostringstream os;
        os << "cylinder state exceeded overflow guard at t = " << double(t);
        fail(ErrorCode::BlowUp, os.str());
      }
    }
  }
  shot.end = s;
  shot.d_v2 = p2;
  shot.d_v3 = p3;
  return shot;
}

}  // namespace detail

std::vector<double> cylinder_samples(double horizon, double spacing) {
  if (!(horizon > 0.0) || !(spacing > 0.0)) fail(ErrorCode::InvalidArgument, "horizon and spacing must be > 0");
  const int m = int(std::ceil(horizon / spacing - 1e-9));
  std::vector<double> t(std::size_t(m) + 1);
  for (int i = 0; i <= m; ++i) t[std::size_t(i)] = std::min(horizon, i * spacing);
  t.back() = horizon;
  return t;
}

CylProfile integrate_cylinder_ivp(double lambda, double v2_0, double v3_0, double horizon, double tol,
                                  std::span<const double> samples) {
  if (!std::isfinite(lambda) || !std::isfinite(v2_0) || !std::isfinite(v3_0))
    fail(ErrorCode::InvalidArgument, "cylinder IVP data must be finite");
  if (!(horizon > 0.0)) fail(ErrorCode::InvalidArgument, "horizon must be > 0");
  std::vector<double> owned;
  if (samples.empty()) {
    owned = cylinder_samples(horizon);
    samples = owned;
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i] < 0.0 || samples[i] > horizon) fail(ErrorCode::DomainError, "samples must lie in [0, T]");
    if (i > 0 && !(samples[i] > samples[i - 1])) fail(ErrorCode::InvalidArgument, "samples must be increasing");
  }
  CylProfile prof;
  prof.lambda = lambda;
  const auto opt = detail::taylor_options(tol, horizon);
  auto rec = [&](double t, const detail::CylState& s) {
    prof.t.push_back(t);
    prof.v.push_back(double(s[0]));
    prof.dv.push_back(double(s[1]));
    prof.d2v.push_back(double(s[2]));
    prof.d3v.push_back(double(s[3]));
    prof.d4v.push_back(double(4 * s[2] + detail::Real(lambda) * exp(4 * s[0])));
  };
  detail::taylor_integrate(lambda, v2_0, v3_0, horizon, opt, false, samples, rec);
  return prof;
}

CylProfile make_cyl_profile(double lambda, std::vector<double> t, std::vector<double> v,
                            std::vector<double> dv, std::vector<double> d2v, std::vector<double> d3v) {
  const std::size_t m = t.size();
  if (v.size() != m || dv.size() != m || d2v.size() != m || d3v.size() != m)
    fail(ErrorCode::InvalidArgument, "cylinder profile arrays must have equal length");
  CylProfile p;
  p.lambda = lambda;
  p.t = std::move(t);
  p.v = std::move(v);
  p.dv = std::move(dv);
  p.d2v = std::move(d2v);
  p.d3v = std::move(d3v);
  p.d4v.resize(m);
  for (std::size_t i = 0; i < m; ++i) p.d4v[i] = 4.0 * p.d2v[i] + lambda * std::exp(4.0 * p.v[i]);
  return p;
}

}  // namespace gelfand
