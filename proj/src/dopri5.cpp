#include "gelfand/dopri5.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gelfand/errors.hpp"

namespace gelfand {

namespace {

constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

bool finite_all(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

Dopri5Stats integrate_dopri5(const OdeRhs& f, double x0, std::vector<double>& y, double x1,
                             std::span<const double> outputs, const DenseCallback& out,
                             const Dopri5Options& opt) {
  if (!(x1 > x0)) fail(ErrorCode::InvalidArgument, "integration interval must be increasing");
  if (!(opt.rtol > 0.0) || !(opt.atol > 0.0)) fail(ErrorCode::InvalidArgument, "tolerances must be > 0");

  const std::size_t m = y.size();
  std::vector<double> k1(m), k2(m), k3(m), k4(m), k5(m), k6(m), k7(m), yt(m), ynew(m), err(m);
  std::vector<double> r1(m), r2(m), r3(m), r4(m), r5(m), ydense(m);

  Dopri5Stats stats;
  auto eval = [&](double x, const std::vector<double>& yy, std::vector<double>& k) {
    f(x, yy, k);
    ++stats.evaluations;
  };

  std::size_t next_out = 0;
  while (next_out < outputs.size() && outputs[next_out] <= x0) {
    if (out) out(outputs[next_out], y);
    ++next_out;
  }

  double x = x0;
  double h = opt.h_init > 0.0 ? opt.h_init : (x1 - x0) / 100.0;
  eval(x, y, k1);
  bool last_rejected = false;

  while (x < x1) {
    if (stats.steps + stats.rejected >= opt.max_steps)
      fail(ErrorCode::ToleranceFailure, "step budget exhausted");
    bool last = false;
    if (x + h >= x1) {
      h = x1 - x;
      last = true;
    }

    for (std::size_t i = 0; i < m; ++i) yt[i] = y[i] + h * a21 * k1[i];
    eval(x + c2 * h, yt, k2);
    for (std::size_t i = 0; i < m; ++i) yt[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    eval(x + c3 * h, yt, k3);
    for (std::size_t i = 0; i < m; ++i) yt[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    eval(x + c4 * h, yt, k4);
    for (std::size_t i = 0; i < m; ++i)
      yt[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    eval(x + c5 * h, yt, k5);
    for (std::size_t i = 0; i < m; ++i)
      yt[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    eval(last ? x1 : x + h, yt, k6);
    for (std::size_t i = 0; i < m; ++i)
      ynew[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    const double xnew = last ? x1 : x + h;
    bool ok_stage = finite_all(ynew);
    if (ok_stage) {
      eval(xnew, ynew, k7);
      ok_stage = finite_all(k7);
    }

    double errn = 0.0;
    if (ok_stage) {
      for (std::size_t i = 0; i < m; ++i) {
        err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        const double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
        errn += (err[i] / sc) * (err[i] / sc);
      }
      errn = std::sqrt(errn / double(m));
    }

    if (!ok_stage || !(errn <= 1.0)) {
      ++stats.rejected;
      const double fac = ok_stage ? std::max(0.2, 0.9 * std::pow(errn, -0.2)) : 0.25;
      h *= std::min(fac, 0.9);
      last_rejected = true;
      if (h < opt.h_min) {
        if (!ok_stage) fail(ErrorCode::BlowUp, "solution became non-finite");
        std::ostringstream os;
        os << "step size collapsed at x = " << x;
        fail(ErrorCode::ToleranceFailure, os.str());
      }
      continue;
    }

    ++stats.steps;
    stats.max_error_estimate = std::max(stats.max_error_estimate, errn);

    if (out && next_out < outputs.size() && outputs[next_out] <= xnew) {
      for (std::size_t i = 0; i < m; ++i) {
        r1[i] = y[i];
        r2[i] = ynew[i] - y[i];
        r3[i] = h * k1[i] - r2[i];
        r4[i] = r2[i] - h * k7[i] - r3[i];
        r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
      }
      while (next_out < outputs.size() && outputs[next_out] <= xnew) {
        const double xo = outputs[next_out];
        if (xo >= xnew) {
          out(xo, ynew);
        } else {
          const double th = (xo - x) / h, th1 = 1.0 - th;
          for (std::size_t i = 0; i < m; ++i)
            ydense[i] = r1[i] + th * (r2[i] + th1 * (r3[i] + th * (r4[i] + th1 * r5[i])));
          out(xo, ydense);
        }
        ++next_out;
      }
    }

    y.swap(ynew);
    k1.swap(k7);
    x = xnew;

    for (const double v : y) {
      if (std::abs(v) > opt.overflow_guard) {
        std::ostringstream os;
        os << "state exceeded overflow guard at x = " << x;
        fail(ErrorCode::BlowUp, os.str());
      }
    }

    double fac = errn > 0.0 ? 0.9 * std::pow(errn, -0.2) : 5.0;
    fac = std::clamp(fac, 0.2, 5.0);
    if (last_rejected) fac = std::min(fac, 1.0);
    h *= fac;
    last_rejected = false;
  }
  return stats;
}

}  // namespace gelfand
