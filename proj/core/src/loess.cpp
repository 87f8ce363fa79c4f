#include "smoothrank/loess.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "smoothrank/error.hpp"

namespace smoothrank {

namespace {

double tricube(double u) noexcept {
  if (u >= 1.0) return 0.0;
  const double c = 1.0 - u * u * u;
  return c * c * c;
}

std::size_t window_size(double span, std::size_t n) {
  // Guard against span * n landing a rounding error above an integer.
  const double raw = span * static_cast<double>(n);
  auto q = static_cast<std::size_t>(std::ceil(raw - 1e-9 * raw));
  return std::min(q, n);
}

}  // namespace

LoessFit loess_fit(std::span<const double> x, std::span<const double> y, double span) {
  if (x.size() != y.size()) throw Error("loess: x and y differ in length");
  if (!(span > 0.0 && span <= 1.0)) throw Error("loess: span must lie in (0, 1]");
  const std::size_t n = x.size();
  if (n < 4) throw Error("loess: at least 4 points required");
  if (span * static_cast<double>(n) < 2.0) throw Error("loess: span too small for the sample");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });

  LoessFit fit;
  fit.span = span;
  fit.design_x.resize(n);
  fit.fitted_y.resize(n);
  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    fit.design_x[i] = x[order[i]];
    ys[i] = y[order[i]];
    if (!std::isfinite(fit.design_x[i]) || !std::isfinite(ys[i]))
      throw Error("loess: non-finite input");
    if (i > 0 && !(fit.design_x[i] > fit.design_x[i - 1]))
      throw Error("loess: duplicate abscissae");
  }

  const auto& xs = fit.design_x;
  const std::size_t q = window_size(span, n);
  std::size_t lo = 0;  // the q nearest neighbours of xs[k] are xs[lo, lo + q)
  for (std::size_t k = 0; k < n; ++k) {
    const double x0 = xs[k];
    while (lo + q < n && xs[lo + q] - x0 < x0 - xs[lo]) ++lo;
    const double d_max = std::max(x0 - xs[lo], xs[lo + q - 1] - x0);

    double sw = 0.0, swx = 0.0, swy = 0.0;
    for (std::size_t j = lo; j < lo + q; ++j) {
      const double w = tricube(std::abs(xs[j] - x0) / d_max);
      sw += w;
      swx += w * xs[j];
      swy += w * ys[j];
    }
    const double xbar = swx / sw;
    const double ybar = swy / sw;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t j = lo; j < lo + q; ++j) {
      const double w = tricube(std::abs(xs[j] - x0) / d_max);
      const double dx = xs[j] - xbar;
      sxx += w * dx * dx;
      sxy += w * dx * (ys[j] - ybar);
    }
    if (sxx <= 1e-14 * sw * d_max * d_max) {
      fit.fitted_y[k] = ybar;
      ++fit.degenerate_windows;
    } else {
      fit.fitted_y[k] = ybar + sxy / sxx * (x0 - xbar);
    }
  }
  return fit;
}

double loess_predict(const LoessFit& fit, double x) noexcept {
  const auto& xs = fit.design_x;
  const auto& ys = fit.fitted_y;
  if (xs.empty()) return 0.0;
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const auto hi = static_cast<std::size_t>(it - xs.begin());
  const std::size_t lo = hi - 1;
  const double t = (x - xs[lo]) / (xs[hi] - xs[lo]);
  return ys[lo] + t * (ys[hi] - ys[lo]);
}

}  // namespace smoothrank
