#include "smoothrank/concordance.hpp"

#include <algorithm>
#include <numeric>

#include "smoothrank/error.hpp"

namespace smoothrank {

namespace {

// Indices ordered by time; the j > i candidates of an event are then a suffix.
std::vector<std::size_t> order_by_time(std::span<const SurvivalTarget> targets) {
  std::vector<std::size_t> order(targets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return targets[a].time < targets[b].time;
  });
  return order;
}

template <typename Visit>
void for_each_comparable(std::span<const SurvivalTarget> targets, Visit&& visit) {
  const auto order = order_by_time(targets);
  const std::size_t n = order.size();
  std::size_t later = 0;  // first position with time strictly greater than the current one
  for (std::size_t pos = 0; pos < n; ++pos) {
    const std::size_t i = order[pos];
    if (later <= pos) later = pos + 1;
    while (later < n && targets[order[later]].time <= targets[i].time) ++later;
    if (!targets[i].event) continue;
    for (std::size_t q = later; q < n; ++q) visit(i, order[q]);
  }
}

}  // namespace

double ConcordanceCounts::index() const {
  const auto total = comparable();
  if (total == 0) throw Error("concordance index: no comparable pairs");
  return (static_cast<double>(concordant) + 0.5 * static_cast<double>(ties)) /
         static_cast<double>(total);
}

std::vector<std::pair<std::size_t, std::size_t>> comparable_pairs(
    std::span<const SurvivalTarget> targets) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for_each_comparable(targets, [&](std::size_t i, std::size_t j) { pairs.emplace_back(i, j); });
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

ConcordanceCounts concordance_counts(std::span<const double> scores,
                                     std::span<const SurvivalTarget> targets) {
  if (scores.size() != targets.size())
    throw Error("concordance: scores and targets differ in length");
  ConcordanceCounts counts;
  for_each_comparable(targets, [&](std::size_t i, std::size_t j) {
    if (scores[i] > scores[j])
      ++counts.concordant;
    else if (scores[i] < scores[j])
      ++counts.discordant;
    else
      ++counts.ties;
  });
  return counts;
}

double concordance_index(std::span<const double> scores,
                         std::span<const SurvivalTarget> targets) {
  return concordance_counts(scores, targets).index();
}

double auc(std::span<const double> scores, const std::vector<bool>& positive) {
  if (scores.size() != positive.size()) throw Error("auc: scores and labels differ in length");
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Sum of mid-ranks (1-based) of the positive class.
  double rank_sum = 0.0;
  std::size_t n_pos = 0;
  for (std::size_t start = 0; start < n;) {
    std::size_t stop = start + 1;
    while (stop < n && scores[order[stop]] == scores[order[start]]) ++stop;
    const double mid_rank = 0.5 * static_cast<double>(start + 1 + stop);
    for (std::size_t q = start; q < stop; ++q) {
      if (positive[order[q]]) {
        rank_sum += mid_rank;
        ++n_pos;
      }
    }
    start = stop;
  }
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) throw Error("auc: both classes must be non-empty");
  const double np = static_cast<double>(n_pos);
  const double u = rank_sum - np * (np + 1.0) / 2.0;
  return u / (np * static_cast<double>(n_neg));
}

}  // namespace smoothrank
