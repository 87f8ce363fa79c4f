#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace smoothrank {

inline constexpr double kDefaultLoessSpan = 0.75;

// Locally weighted linear regression evaluated at its own design points.
struct LoessFit {
  std::vector<double> design_x;  // strictly increasing
  std::vector<double> fitted_y;
  double span = kDefaultLoessSpan;
  int degree = 1;
  // Windows whose weighted design was singular and fell back to a weighted mean.
  std::size_t degenerate_windows = 0;
};

// Degree-1 LOESS without robustness iterations. Each point is fitted from its
// ceil(span * n) nearest neighbours with tricube weights scaled by the
// distance to the farthest of them. Input need not be sorted; duplicate
// abscissae are rejected.
LoessFit loess_fit(std::span<const double> x, std::span<const double> y,
                   double span = kDefaultLoessSpan);

// Piecewise-linear interpolation of the fitted values, held constant beyond
// the first and last design points.
double loess_predict(const LoessFit& fit, double x) noexcept;

}  // namespace smoothrank
