#include "gelfand/quadrature.hpp"

#include <array>
#include <cmath>

#include "gelfand/errors.hpp"

namespace gelfand {

namespace {

constexpr std::array<double, 8> kNodes = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                          -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                          0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kWeights = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                            0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                            0.2223810344533745, 0.1012285362903763};

}  // namespace

std::vector<double> cumulative_weighted_integral(std::span<const double> grid, std::span<const double> f,
                                                 int power) {
  const std::size_t m = grid.size();
  if (f.size() != m) fail(ErrorCode::InvalidArgument, "grid and values differ in length");
  if (m < 4) fail(ErrorCode::InvalidArgument, "need at least four nodes");
  if (power < 0) fail(ErrorCode::InvalidArgument, "power must be >= 0");
  std::vector<double> out(m, 0.0);
  for (std::size_t i = 0; i + 1 < m; ++i) {
    std::size_t s = i == 0 ? 0 : i - 1;
    if (s + 3 >= m) s = m - 4;
    const double* x = &grid[s];
    const double* y = &f[s];
    const double a = grid[i], b = grid[i + 1];
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    double acc = 0.0;
    for (std::size_t q = 0; q < kNodes.size(); ++q) {
      const double t = mid + half * kNodes[q];
      double p = 0.0;
      for (int j = 0; j < 4; ++j) {
        double l = 1.0;
        for (int k = 0; k < 4; ++k)
          if (k != j) l *= (t - x[k]) / (x[j] - x[k]);
        p += l * y[j];
      }
      acc += kWeights[q] * std::pow(t, power) * p;
    }
    out[i + 1] = out[i] + half * acc;
  }
  return out;
}

}  // namespace gelfand
