#pragma once

// Brute-force reference computations used only by tests. They deliberately
// avoid the library's code paths (no sorting tricks, no rank statistics).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "smoothrank/concordance.hpp"

namespace oracle {

struct PairCounts {
  std::uint64_t concordant = 0, discordant = 0, ties = 0;
};

// Double loop over all ordered pairs.
inline PairCounts concordance(const std::vector<double>& scores,
                              const std::vector<smoothrank::SurvivalTarget>& targets) {
  PairCounts c;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    for (std::size_t j = 0; j < targets.size(); ++j) {
      if (!(targets[i].event && targets[i].time < targets[j].time)) continue;
      if (scores[i] > scores[j])
        ++c.concordant;
      else if (scores[i] < scores[j])
        ++c.discordant;
      else
        ++c.ties;
    }
  }
  return c;
}

inline double concordance_index(const std::vector<double>& scores,
                                const std::vector<smoothrank::SurvivalTarget>& targets) {
  const auto c = concordance(scores, targets);
  return (static_cast<double>(c.concordant) + 0.5 * static_cast<double>(c.ties)) /
         static_cast<double>(c.concordant + c.discordant + c.ties);
}

// AUC by counting positive/negative pairs, ties as one half.
inline double auc(const std::vector<double>& scores, const std::vector<bool>& positive) {
  double wins = 0.0;
  double pairs = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!positive[i]) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (positive[j]) continue;
      pairs += 1.0;
      if (scores[i] > scores[j])
        wins += 1.0;
      else if (scores[i] == scores[j])
        wins += 0.5;
    }
  }
  return wins / pairs;
}

// Local linear fit at x[k]: rank all distances, take the q-th smallest as the
// bandwidth, solve the 2x2 weighted normal equations by Cramer's rule.
inline std::vector<double> loess(const std::vector<double>& x, const std::vector<double>& y,
                                 std::size_t q) {
  const std::size_t n = x.size();
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<double> d(n);
    for (std::size_t j = 0; j < n; ++j) d[j] = std::abs(x[j] - x[k]);
    std::vector<double> sorted = d;
    std::sort(sorted.begin(), sorted.end());
    const double h = sorted[q - 1];
    double s0 = 0, s1 = 0, s2 = 0, t0 = 0, t1 = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const double u = d[j] / h;
      const double w = u < 1.0 ? std::pow(1.0 - u * u * u, 3) : 0.0;
      s0 += w;
      s1 += w * x[j];
      s2 += w * x[j] * x[j];
      t0 += w * y[j];
      t1 += w * x[j] * y[j];
    }
    const double det = s0 * s2 - s1 * s1;
    const double intercept = (t0 * s2 - s1 * t1) / det;
    const double slope = (s0 * t1 - s1 * t0) / det;
    out[k] = intercept + slope * x[k];
  }
  return out;
}

inline std::vector<smoothrank::SurvivalTarget> random_targets(std::mt19937_64& rng, std::size_t n,
                                                              int time_levels) {
  std::uniform_int_distribution<int> time(1, time_levels);
  std::bernoulli_distribution event(0.6);
  std::vector<smoothrank::SurvivalTarget> t(n);
  for (auto& v : t) v = {static_cast<double>(time(rng)), event(rng)};
  return t;
}

}  // namespace oracle
