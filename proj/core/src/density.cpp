#include "smoothrank/density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "smoothrank/error.hpp"

namespace smoothrank {

EvaluationGrid::EvaluationGrid(double lo, double hi, std::size_t n) : lo_(lo), hi_(hi) {
  if (n < 2) throw Error("evaluation grid needs at least 2 points");
  if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi))
    throw Error("evaluation grid needs finite lo < hi");
  step_ = (hi - lo) / static_cast<double>(n - 1);
  points_.resize(n);
  for (std::size_t i = 0; i < n; ++i) points_[i] = lo + static_cast<double>(i) * step_;
  points_.back() = hi;
}

double cosine_kernel(double u) noexcept {
  if (std::abs(u) > 1.0) return 0.0;
  return std::numbers::pi / 4.0 * std::cos(std::numbers::pi * u / 2.0);
}

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw Error("quantile of an empty sample");
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double sample_sd(std::span<const double> samples) {
  const std::size_t n = samples.size();
  if (n < 2) return 0.0;
  double mean = 0.0;
  for (double v : samples) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : samples) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(n - 1));
}

double bandwidth(std::span<const double> samples) {
  if (samples.size() < 2) throw Error("bandwidth needs at least 2 samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() == sorted.back()) throw Error("bandwidth needs at least 2 distinct values");

  const double sd = sample_sd(sorted);
  const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
  double spread = sd;
  if (iqr > 0.0) spread = std::min(sd, iqr / 1.34);
  return 0.9 * spread * std::pow(static_cast<double>(sorted.size()), -0.2);
}

namespace {

bool has_spread(std::span<const double> samples) {
  if (samples.size() < 2) return false;
  const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
  return *lo != *hi;
}

}  // namespace

double class_bandwidth(std::span<const double> class_samples, std::span<const double> pooled) {
  if (has_spread(class_samples)) return bandwidth(class_samples);
  return bandwidth(pooled);
}

EvaluationGrid make_grid(std::span<const double> class1, std::span<const double> class2,
                         std::size_t points) {
  std::vector<double> pooled(class1.begin(), class1.end());
  pooled.insert(pooled.end(), class2.begin(), class2.end());
  if (pooled.empty()) throw Error("make_grid: no samples");
  if (!has_spread(pooled)) throw Error("make_grid: all samples identical");

  double h = 0.0;
  if (!class1.empty()) h = std::max(h, class_bandwidth(class1, pooled));
  if (!class2.empty()) h = std::max(h, class_bandwidth(class2, pooled));
  const auto [lo, hi] = std::minmax_element(pooled.begin(), pooled.end());
  return EvaluationGrid(*lo - 3.0 * h, *hi + 3.0 * h, points);
}

DensityEstimate estimate_density(std::span<const double> samples, const EvaluationGrid& grid,
                                 double h) {
  if (samples.empty()) throw Error("estimate_density: no samples");
  if (!(h > 0.0)) throw Error("estimate_density: bandwidth must be positive");

  DensityEstimate est{grid, std::vector<double>(grid.size(), 0.0), h};
  const double half = 0.5 * grid.spacing() / h;
  const double norm = 1.0 / (static_cast<double>(samples.size()) * grid.spacing());
  constexpr double quarter_pi = std::numbers::pi / 4.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double r = grid[k];
    double sum = 0.0;
    for (double s : samples) {
      const double u = (r - s) / h;
      const double a = std::max(u - half, -1.0);
      const double b = std::min(u + half, 1.0);
      // kernel mass on [a, b]: (sin(pi b/2) - sin(pi a/2)) / 2
      if (b > a) sum += std::cos(quarter_pi * (a + b)) * std::sin(quarter_pi * (b - a));
    }
    est.values[k] = sum * norm;
  }
  return est;
}

double trapezoid(const EvaluationGrid& grid, std::span<const double> values) {
  if (values.size() != grid.size()) throw Error("trapezoid: size mismatch");
  double total = 0.0;
  for (std::size_t k = 1; k < grid.size(); ++k)
    total += 0.5 * (values[k] + values[k - 1]) * (grid[k] - grid[k - 1]);
  return total;
}

}  // namespace smoothrank
