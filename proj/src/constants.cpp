#include "gelfand/constants.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gelfand/errors.hpp"
#include "gelfand/jet.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace gelfand {

ReferenceConstants reference_constants(int n) {
  if (n <= 1) fail(ErrorCode::InvalidArgument, "dimension must be >= 2, got " + std::to_string(n));
  ReferenceConstants c;
  c.n = n;
  const double nd = n;
  c.lambda_star_2nd = n == 2 ? 1.0 : (nd - 2.0) * nd / 4.0;
  if (n >= 3) c.q0 = (nd - 2.0) * nd * (nd + 2.0) / 8.0;
  if (n == 4) {
    c.q_rhs = 6.0;
    c.lambda_conj_4th = 8.0;
  }
  if (n >= 5) {
    c.q_rhs = (nd - 4.0) * (nd - 2.0) * nd * (nd + 2.0) / 16.0;
    c.a1 = -(nd - 4.0) * (nd + 2.0) / 4.0;
    c.a2 = -(nd - 4.0) * (nd - 2.0) / 4.0;
    c.lambda_conj_4th = nd * nd * nd * (nd - 4.0) / 16.0;
    c.barrier_coeffs = std::pair{nd / 4.0, (nd - 4.0) / 4.0};
  }
  return c;
}

const char* to_string(ClosedFormKind kind) {
  switch (kind) {
    case ClosedFormKind::SecondOrderHemisphere: return "SecondOrderHemisphere";
    case ClosedFormKind::FourthOrderHemisphere_n5plus: return "FourthOrderHemisphere_n5plus";
    case ClosedFormKind::FourthOrderHemisphere_n4: return "FourthOrderHemisphere_n4";
    case ClosedFormKind::FourthOrder_n3: return "FourthOrder_n3";
    case ClosedFormKind::CylinderLogCosh: return "CylinderLogCosh";
    case ClosedFormKind::LambdaZeroParabola: return "LambdaZeroParabola";
  }
  return "?";
}

ClosedForm round_factor(int n) {
  if (n == 3) return {ClosedFormKind::FourthOrder_n3, 3};
  if (n == 4) return {ClosedFormKind::FourthOrderHemisphere_n4, 4};
  if (n >= 5) return {ClosedFormKind::FourthOrderHemisphere_n5plus, n};
  fail(ErrorCode::InvalidArgument, "no fourth-order round factor for n < 3");
}

namespace {

template <class T>
using SJet = Jet<T, 5>;

// Every radial closed form is a function U(s) of s = r².
template <class T>
SJet<T> radial_in_s(const ClosedForm& cf, int n, T s0) {
  const auto s = SJet<T>::variable(s0);
  const T nd = T(n);
  switch (cf.kind) {
    case ClosedFormKind::SecondOrderHemisphere:
      if (n == 2) return -log(s + T(1)) + T(std::log(2.0L));
      return pow(T(2) / (s + T(1)), (nd - T(2)) / T(2)) - T(1);
    case ClosedFormKind::FourthOrderHemisphere_n5plus:
      return pow(T(2) / (s + T(1)), (nd - T(4)) / T(2));
    case ClosedFormKind::FourthOrderHemisphere_n4:
      return -log(s + T(1)) + T(std::log(2.0L));
    case ClosedFormKind::FourthOrder_n3:
      return pow((s + T(1)) / T(2), T(0.5L));
    case ClosedFormKind::LambdaZeroParabola: {
      // u = c0 + c1 r² fitted to the clamped rows of the fourth-order family.
      const T du1 = n == 4 ? T(-1) : -(nd - T(4)) / T(2);
      const T u1 = n == 4 ? T(0) : T(1);
      const T c1 = du1 / T(2);
      return s * c1 + (u1 - c1);
    }
    case ClosedFormKind::CylinderLogCosh: break;
  }
  fail(ErrorCode::InvalidArgument, "not a radial closed form");
}

template <class T>
struct RadialDerivs {
  T u, d1, d2, d3, d4, lap, dlap, bilap;
};

template <class T>
RadialDerivs<T> radial_derivs(const ClosedForm& cf, int n, T r) {
  const T s = r * r;
  const auto U = radial_in_s<T>(cf, n, s);
  const T U0 = U.a[0], U1 = U.derivative(1), U2 = U.derivative(2), U3 = U.derivative(3),
          U4 = U.derivative(4);
  const T nd = T(n);
  RadialDerivs<T> d;
  d.u = U0;
  d.d1 = T(2) * r * U1;
  d.d2 = T(2) * U1 + T(4) * s * U2;
  d.d3 = T(12) * r * U2 + T(8) * s * r * U3;
  d.d4 = T(12) * U2 + T(48) * s * U3 + T(16) * s * s * U4;
  // Δu = 4 s U'' + 2 n U' =: V(s);  Δ²u = 4 s V'' + 2 n V'.
  const T V1 = (T(4) + T(2) * nd) * U2 + T(4) * s * U3;
  const T V2 = (T(8) + T(2) * nd) * U3 + T(4) * s * U4;
  d.lap = T(4) * s * U2 + T(2) * nd * U1;
  d.dlap = T(2) * r * V1;
  d.bilap = T(4) * s * V2 + T(2) * nd * V1;
  return d;
}

template <class T>
SJet<T> log_cosh_jet(T t0) {
  // -ln cosh t = -t - ln((1 + e^{-2t}) / 2), stable for large t >= 0.
  const auto t = SJet<T>::variable(t0);
  return -t - log((exp(t * T(-2)) + T(1)) / T(2));
}

void check_domain(const ClosedForm& cf, double x) {
  if (!std::isfinite(x)) fail(ErrorCode::DomainError, "non-finite abscissa");
  if (cf.cylindrical()) {
    if (x < 0.0) fail(ErrorCode::DomainError, "cylindrical coordinate must be >= 0");
  } else if (x < 0.0 || x > 1.0) {
    fail(ErrorCode::DomainError, "radial coordinate must lie in [0, 1]");
  }
}

void check_dimension(const ClosedForm& cf, int n) {
  bool ok = true;
  switch (cf.kind) {
    case ClosedFormKind::SecondOrderHemisphere: ok = n >= 2; break;
    case ClosedFormKind::FourthOrderHemisphere_n5plus: ok = n >= 5; break;
    case ClosedFormKind::FourthOrderHemisphere_n4: ok = n == 4; break;
    case ClosedFormKind::FourthOrder_n3: ok = n == 3; break;
    case ClosedFormKind::LambdaZeroParabola: ok = n >= 4; break;
    case ClosedFormKind::CylinderLogCosh: ok = true; break;
  }
  if (!ok)
    fail(ErrorCode::InvalidArgument,
         std::string(to_string(cf.kind)) + " is not defined for n = " + std::to_string(n));
}

}  // namespace

ClosedFormValue closed_form_eval(const ClosedForm& cf, double x) {
  check_domain(cf, x);
  check_dimension(cf, cf.n);
  ClosedFormValue v;
  if (cf.cylindrical()) {
    const auto w = log_cosh_jet<double>(x);
    v.value = w.a[0];
    v.d1 = w.derivative(1);
    v.d2 = w.derivative(2);
    v.d3 = w.derivative(3);
    v.d4 = w.derivative(4);
    using Wide = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<50>,
                                               boost::multiprecision::et_off>;
    const auto ww = log_cosh_jet<Wide>(Wide(x));
    v.paneitz = double(ww.derivative(4) - 4 * ww.derivative(2));
    return v;
  }
  const auto d = radial_derivs<double>(cf, cf.n, x);
  v.value = d.u;
  v.d1 = d.d1;
  v.d2 = d.d2;
  v.d3 = d.d3;
  v.d4 = d.d4;
  v.lap = d.lap;
  v.dlap = d.dlap;
  v.bilap = d.bilap;
  return v;
}

double closed_form_residual(const ClosedForm& form, int n, std::span<const double> grid) {
  ClosedForm cf{form.kind, n};
  check_dimension(cf, n);
  using T = long double;
  const T nd = T(n);
  double worst = 0.0;
  for (const double x : grid) {
    check_domain(cf, x);
    T res = 0;
    if (cf.cylindrical()) {
      const auto w = log_cosh_jet<T>(T(x));
      res = w.derivative(4) - T(4) * w.derivative(2) - T(6) * std::exp(T(4) * w.a[0]);
    } else {
      const auto d = radial_derivs<T>(cf, n, T(x));
      switch (cf.kind) {
        case ClosedFormKind::SecondOrderHemisphere: {
          if (n == 2) {
            res = d.lap + std::exp(T(2) * d.u);
          } else {
            const T lstar = (nd - T(2)) * nd / T(4);
            res = d.lap + lstar * std::pow(T(1) + d.u, (nd + T(2)) / (nd - T(2)));
          }
          break;
        }
        case ClosedFormKind::FourthOrderHemisphere_n5plus: {
          const T q = (nd - T(4)) * (nd - T(2)) * nd * (nd + T(2)) / T(16);
          res = d.bilap - q * std::pow(d.u, (nd + T(4)) / (nd - T(4)));
          break;
        }
        case ClosedFormKind::FourthOrderHemisphere_n4:
          res = d.bilap - T(6) * std::exp(T(4) * d.u);
          break;
        case ClosedFormKind::FourthOrder_n3:
          res = d.bilap + T(15) / T(16) * std::pow(d.u, T(-7));
          break;
        case ClosedFormKind::LambdaZeroParabola:
          res = d.bilap;
          break;
        case ClosedFormKind::CylinderLogCosh: break;
      }
    }
    worst = std::max(worst, double(std::abs(res)));
  }
  return worst;
}

}  // namespace gelfand
