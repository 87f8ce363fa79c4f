#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace smoothrank {

// Observed outcome of one record: time to event or to censoring.
struct SurvivalTarget {
  double time = 0.0;
  bool event = false;
};

// Pair counts behind Harrell's concordance index. Only comparable pairs
// (i had an event strictly before j's recorded time) are counted.
struct ConcordanceCounts {
  std::uint64_t concordant = 0;
  std::uint64_t discordant = 0;
  std::uint64_t ties = 0;

  std::uint64_t comparable() const noexcept { return concordant + discordant + ties; }

  // (CP + 0.5 * Ties) / comparable. Throws smoothrank::Error when nothing is comparable.
  double index() const;
};

// All ordered pairs (i, j) with event_i and time_i < time_j.
std::vector<std::pair<std::size_t, std::size_t>> comparable_pairs(
    std::span<const SurvivalTarget> targets);

// Risk orientation: a pair i before j is concordant when score_i > score_j.
// Score ties use exact floating point equality.
ConcordanceCounts concordance_counts(std::span<const double> scores,
                                     std::span<const SurvivalTarget> targets);

double concordance_index(std::span<const double> scores,
                         std::span<const SurvivalTarget> targets);

// Area under the ROC curve via the Mann-Whitney statistic with mid-ranks,
// `positive` marking the class expected to score higher.
double auc(std::span<const double> scores, const std::vector<bool>& positive);

}  // namespace smoothrank
