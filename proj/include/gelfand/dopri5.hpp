#pragma once

#include <functional>
#include <span>
#include <vector>

namespace gelfand {

using OdeRhs = std::function<void(double x, std::span<const double> y, std::span<double> dydx)>;
using DenseCallback = std::function<void(double x, std::span<const double> y)>;

struct Dopri5Options {
  double rtol = 1e-10;
  double atol = 1e-12;
  double h_init = 0.0;  // 0 selects |x1 - x0| / 100
  double h_min = 1e-14;
  int max_steps = 200000;
  double overflow_guard = 1e12;
};

struct Dopri5Stats {
  int steps = 0;
  int rejected = 0;
  int evaluations = 0;
  double max_error_estimate = 0.0;  // largest accepted normalized local error
};

/// Dormand-Prince 5(4) with the standard 4th-order continuous extension.
/// Integrates y from x0 to x1 (> x0) in place. Each abscissa in `outputs`
/// (increasing, inside [x0, x1]) is reported through `out` with the dense
/// interpolant. Throws BlowUp when |y_i| exceeds the overflow guard or turns
/// non-finite, ToleranceFailure when the step size collapses.
Dopri5Stats integrate_dopri5(const OdeRhs& f, double x0, std::vector<double>& y, double x1,
                             std::span<const double> outputs, const DenseCallback& out,
                             const Dopri5Options& opt);

}  // namespace gelfand
