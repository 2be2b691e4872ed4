#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace isac {

template <typename Objective>
double grid_argmax(Objective&& objective, const GridSpec& grid,
                   std::vector<std::pair<double, double>>* curve) {
  if (!(grid.coarse_step > 0.0) || grid.refinements < 0 || grid.refine_factor < 2) {
    throw std::invalid_argument("invalid grid specification");
  }
  constexpr double kHalfPi = std::numbers::pi / 2;
  const int n = static_cast<int>(std::floor(2 * kHalfPi / grid.coarse_step + 1e-9));

  double best_theta = -kHalfPi;
  double best_val = -std::numeric_limits<double>::infinity();
  auto consider = [&](double theta) {
    const double v = objective(theta);
    // Strict comparison while scanning upward keeps the smallest maximizer.
    if (v > best_val || (v == best_val && theta < best_theta)) {
      best_val = v;
      best_theta = theta;
    }
    return v;
  };

  for (int i = 0; i <= n; ++i) {
    const double theta = std::min(-kHalfPi + i * grid.coarse_step, kHalfPi);
    const double v = consider(theta);
    if (curve) curve->emplace_back(theta, v);
  }
  if (n * grid.coarse_step < 2 * kHalfPi - 1e-15) {
    const double v = consider(kHalfPi);
    if (curve) curve->emplace_back(kHalfPi, v);
  }

  double step = grid.coarse_step;
  for (int r = 0; r < grid.refinements; ++r) {
    const double center = best_theta;
    const double fine = step / grid.refine_factor;
    for (int k = -grid.refine_factor; k <= grid.refine_factor; ++k) {
      const double theta = center + k * fine;
      if (theta < -kHalfPi || theta > kHalfPi || k == 0) continue;
      consider(theta);
    }
    step = fine;
  }
  return best_theta;
}

}  // namespace isac
