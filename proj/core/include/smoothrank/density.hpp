#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace smoothrank {

inline constexpr std::size_t kDefaultGridPoints = 512;

// Equally spaced evaluation points lo = p_0 < ... < p_{n-1} = hi.
class EvaluationGrid {
 public:
  EvaluationGrid() = default;
  EvaluationGrid(double lo, double hi, std::size_t n = kDefaultGridPoints);

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  double spacing() const noexcept { return step_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }

  double operator[](std::size_t i) const { return points_[i]; }
  const std::vector<double>& points() const noexcept { return points_; }

  friend bool operator==(const EvaluationGrid&, const EvaluationGrid&) = default;

 private:
  double lo_ = 0.0;
  double hi_ = 0.0;
  double step_ = 0.0;
  std::vector<double> points_;
};

struct DensityEstimate {
  EvaluationGrid grid;
  std::vector<double> values;
  double bandwidth = 0.0;
};

// K(u) = (pi/4) cos(pi u / 2) on [-1, 1], zero outside.
double cosine_kernel(double u) noexcept;

// Sample quantile with linear interpolation between order statistics
// (Hyndman-Fan type 7). `sorted` must be ascending and non-empty.
double quantile_sorted(std::span<const double> sorted, double p);

double sample_sd(std::span<const double> samples);

// Silverman's rule of thumb 0.9 * min(sd, IQR / 1.34) * n^(-1/5); the IQR
// term is skipped when it is zero. Throws on fewer than two distinct values.
double bandwidth(std::span<const double> samples);

// Bandwidth of one class, falling back to the bandwidth of the pooled sample
// when the class itself has no spread.
double class_bandwidth(std::span<const double> class_samples, std::span<const double> pooled);

// Shared grid for two class samples: the pooled range extended by three
// times the larger class bandwidth on each side.
EvaluationGrid make_grid(std::span<const double> class1, std::span<const double> class2,
                         std::size_t points = kDefaultGridPoints);

// Direct-summation kernel density estimate on `grid` with bandwidth h. Each
// value is the estimate averaged over the grid cell centred on the point, so
// the values times the spacing sum to the mass inside the grid.
DensityEstimate estimate_density(std::span<const double> samples, const EvaluationGrid& grid,
                                 double h);

// Trapezoidal integral of `values` over `grid`.
double trapezoid(const EvaluationGrid& grid, std::span<const double> values);

}  // namespace smoothrank
