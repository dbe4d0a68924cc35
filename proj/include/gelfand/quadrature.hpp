#pragma once

#include <span>
#include <vector>

namespace gelfand {

/// C_i = ∫_0^{r_i} τ^power f(τ) dτ on an increasing grid starting at 0.
///
/// Product integration: on each cell f is replaced by the cubic through the
/// four nearest nodes and τ^power times that cubic is integrated by 8-point
/// Gauss-Legendre (exact for power <= 12). Error O(h⁴) for smooth f.
std::vector<double> cumulative_weighted_integral(std::span<const double> grid, std::span<const double> f,
                                                 int power);

}  // namespace gelfand
