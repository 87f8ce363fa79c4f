#include <doctest.h>

#include <cmath>
#include <random>

#include "smoothrank/error.hpp"
#include "smoothrank/loess.hpp"
#include "support/oracles.hpp"

using namespace smoothrank;

namespace {

std::vector<double> distinct_sorted_x(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 10.0);
  std::vector<double> x(n);
  for (auto& v : x) v = u(rng);
  std::sort(x.begin(), x.end());
  x.erase(std::unique(x.begin(), x.end()), x.end());
  return x;
}

std::size_t window(double span, std::size_t n) {
  // Independent restatement: smallest integer >= span * n, capped at n.
  std::size_t q = 1;
  while (static_cast<double>(q) < span * static_cast<double>(n) - 1e-9) ++q;
  return std::min(q, n);
}

}  // namespace

TEST_CASE("loess reproduces affine functions") {
  std::mt19937_64 rng(1);
  for (double span : {0.2, 0.3, 0.5, 0.75, 1.0}) {
    const auto x = distinct_sorted_x(rng, 40);
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = 2.0 * x[i] + 1.0;
    const auto fit = loess_fit(x, y, span);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(fit.fitted_y[i] - y[i]) <= 1e-8);
  }
}

TEST_CASE("loess of a constant is constant") {
  const std::vector<double> x{0, 1, 2, 3, 4, 5, 6};
  const std::vector<double> y(x.size(), -3.5);
  const auto fit = loess_fit(x, y);
  for (double v : fit.fitted_y) CHECK(v == doctest::Approx(-3.5).epsilon(1e-14));
}

TEST_CASE("loess matches a per-point weighted least squares oracle") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> noise(0.0, 0.5);
  SUBCASE("20 noisy points, default span") {
    const auto x = distinct_sorted_x(rng, 20);
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = std::sin(x[i]) + noise(rng);
    const auto fit = loess_fit(x, y, 0.75);
    const auto want = oracle::loess(x, y, window(0.75, x.size()));
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(fit.fitted_y[i] - want[i]) <= 1e-10);
  }
  SUBCASE("random sizes up to 50, random spans, unsorted input") {
    std::uniform_int_distribution<int> size(4, 50);
    std::uniform_real_distribution<double> span_dist(0.3, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
      auto x = distinct_sorted_x(rng, static_cast<std::size_t>(size(rng)));
      if (x.size() < 4) continue;
      const double span = span_dist(rng);
      if (span * static_cast<double>(x.size()) < 3.0) continue;  // keep >= 2 weighted points
      std::vector<double> y(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) y[i] = 0.3 * x[i] * x[i] - x[i] + noise(rng);
      const auto want = oracle::loess(x, y, window(span, x.size()));

      // Feed the points in reverse; the fit comes back in ascending x.
      std::vector<double> rx(x.rbegin(), x.rend()), ry(y.rbegin(), y.rend());
      const auto fit = loess_fit(rx, ry, span);
      REQUIRE(fit.design_x == x);
      for (std::size_t i = 0; i < x.size(); ++i) REQUIRE(std::abs(fit.fitted_y[i] - want[i]) <= 1e-10);
    }
  }
}

TEST_CASE("loess is equivariant under adding a constant") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> noise;
  const auto x = distinct_sorted_x(rng, 30);
  std::vector<double> y(x.size()), y2(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    y[i] = noise(rng);
    y2[i] = y[i] + 4.25;
  }
  const auto a = loess_fit(x, y);
  const auto b = loess_fit(x, y2);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(b.fitted_y[i] - a.fitted_y[i] == doctest::Approx(4.25).epsilon(1e-12));
}

TEST_CASE("single-point windows fall back to the weighted mean") {
  // span 0.5 of 4 points: each window holds the point itself and a neighbour at d_max.
  const std::vector<double> x{0, 1, 3, 6}, y{5, -1, 2, 7};
  const auto fit = loess_fit(x, y, 0.5);
  CHECK(fit.degenerate_windows == 4);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(fit.fitted_y[i] == y[i]);
}

TEST_CASE("loess preconditions") {
  const std::vector<double> x{0, 1, 2, 3}, y{1, 2, 3, 4};
  CHECK_THROWS_AS(loess_fit(std::vector<double>{0, 1, 2}, std::vector<double>{0, 1, 2}), Error);
  CHECK_THROWS_AS(loess_fit(x, std::vector<double>{1, 2, 3}), Error);
  CHECK_THROWS_AS(loess_fit(x, y, 0.25), Error);  // one point per window
  CHECK_THROWS_AS(loess_fit(x, y, 0.0), Error);
  CHECK_THROWS_AS(loess_fit(x, y, 1.5), Error);
  CHECK_THROWS_AS(loess_fit(std::vector<double>{0, 1, 1, 2}, y), Error);  // duplicate abscissa
  CHECK_THROWS_AS(loess_fit(std::vector<double>{0, 1, NAN, 2}, y), Error);
}

TEST_CASE("loess_predict interpolates and holds the ends") {
  LoessFit fit;
  fit.design_x = {0.0, 1.0, 3.0};
  fit.fitted_y = {2.0, 4.0, -2.0};
  CHECK(loess_predict(fit, 1.0) == 4.0);
  CHECK(loess_predict(fit, 3.0) == -2.0);
  CHECK(loess_predict(fit, 0.5) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(loess_predict(fit, 2.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(loess_predict(fit, -10.0) == 2.0);
  CHECK(loess_predict(fit, 10.0) == -2.0);

  // Continuity: small steps give small changes, including across nodes.
  double prev = loess_predict(fit, -1.0);
  for (double t = -1.0; t <= 4.0; t += 1e-4) {
    const double v = loess_predict(fit, t);
    CHECK(std::abs(v - prev) <= 3.0 * 1e-4 + 1e-12);  // max slope 3
    prev = v;
  }
  CHECK(loess_predict(LoessFit{}, 1.0) == 0.0);
}
