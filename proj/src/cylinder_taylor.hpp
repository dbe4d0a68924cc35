#pragma once

// Taylor-series machinery for v'''' - 4 v'' = λ e^{4v} in extended precision.
// Internal to the cylinder integrator and the far-field shooting solver.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <array>
#include <functional>
#include <span>
#include <vector>

namespace gelfand::detail {

using Real = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<50>,
                                           boost::multiprecision::et_off>;

/// (v, v', v'', v''') at some t.
using CylState = std::array<Real, 4>;

struct TaylorOptions {
  int degree = 44;        // degree of the local polynomial in v
  Real local_tol;         // local error budget
  double overflow_guard = 1e12;
};

struct CylShot {
  CylState end;
  // d(end state)/d(v''(0)) and d(end state)/d(v'''(0)); filled when requested.
  CylState d_v2, d_v3;
  int steps = 0;
};

/// Integrates from t = 0 to `horizon`. `sample` (optional) receives every
/// abscissa in `samples` with the state at that point.
CylShot taylor_integrate(const Real& lambda, const Real& v2_0, const Real& v3_0, double horizon,
                         const TaylorOptions& opt, bool with_sensitivity,
                         std::span<const double> samples,
                         const std::function<void(double, const CylState&)>& sample);

TaylorOptions taylor_options(double tol, double horizon);

}  // namespace gelfand::detail
