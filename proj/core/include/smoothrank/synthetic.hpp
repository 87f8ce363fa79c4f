#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "smoothrank/survival_data.hpp"

namespace smoothrank {

// Generator for artificial survival data whose features all depend linearly
// on a latent log-normal-like risk.
struct SyntheticConfig {
  std::size_t n_records = 400;
  std::size_t n_features = 5;
  double censoring_fraction = 0.5;
  std::uint64_t seed = 1;
  // risk = ln(v), v ~ Normal(mean, sd) truncated to v > 0
  double risk_source_mean = 10.0;
  double risk_source_sd = 2.0;

  void validate() const;
};

struct SyntheticSample {
  SurvivalDataset data;
  std::vector<double> risk;        // latent risk per record
  std::vector<double> event_time;  // latent t = risk + q per record
};

// t = risk + q with q ~ U[min(risk)/2, max(risk)/2]; each feature is
// risk + an independent q. round(censoring_fraction * N) records, chosen
// uniformly, are censored at t * z with z ~ U[0.2, 0.8].
SyntheticSample generate_with_latent(const SyntheticConfig& config);
SurvivalDataset generate(const SyntheticConfig& config);

// Seed for replicate `replicate` at dimension `n_features`, derived from the base seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t n_features, std::uint64_t replicate);

// `replicates` datasets per feature count, ordered by count then replicate.
std::vector<SurvivalDataset> sweep_feature_counts(const SyntheticConfig& base,
                                                  std::span<const std::size_t> counts,
                                                  std::size_t replicates);

}  // namespace smoothrank
