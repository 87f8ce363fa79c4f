#include "smoothrank/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "smoothrank/error.hpp"

namespace smoothrank {

namespace {

constexpr int kMaxRedraws = 10000;

std::mt19937_64 make_engine(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  return std::mt19937_64(seq);
}

// Uniform on [lo, hi]; degenerates to lo when the interval is empty.
double draw_uniform(std::mt19937_64& rng, double lo, double hi) {
  if (!(hi > lo)) return lo;
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace

void SyntheticConfig::validate() const {
  if (n_records < 4) throw Error("synthetic: n_records must be at least 4");
  if (n_features < 1) throw Error("synthetic: n_features must be at least 1");
  if (!(censoring_fraction >= 0.0 && censoring_fraction < 1.0))
    throw Error("synthetic: censoring_fraction must lie in [0, 1)");
  if (!(risk_source_sd > 0.0) || !std::isfinite(risk_source_mean))
    throw Error("synthetic: risk source needs a finite mean and positive sd");
}

SyntheticSample generate_with_latent(const SyntheticConfig& config) {
  config.validate();
  const std::size_t n = config.n_records;
  const std::size_t m = config.n_features;
  auto rng = make_engine(config.seed);

  std::normal_distribution<double> source(config.risk_source_mean, config.risk_source_sd);
  std::vector<double> risk(n);
  for (auto& r : risk) {
    double v = source(rng);
    for (int attempt = 0; v <= 0.0; ++attempt) {
      if (attempt == kMaxRedraws) throw Error("synthetic: risk source is almost never positive");
      v = source(rng);
    }
    r = std::log(v);
  }
  const auto [rmin, rmax] = std::minmax_element(risk.begin(), risk.end());
  const double q_lo = *rmin / 2.0;
  const double q_hi = *rmax / 2.0;

  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (risk[i] + q_hi <= 0.0)
      throw Error("synthetic: configuration implies non-positive event times");
    double ti = risk[i] + draw_uniform(rng, q_lo, q_hi);
    for (int attempt = 0; ti <= 0.0; ++attempt) {
      if (attempt == kMaxRedraws) throw Error("synthetic: could not draw a positive event time");
      ti = risk[i] + draw_uniform(rng, q_lo, q_hi);
    }
    t[i] = ti;
  }

  std::vector<SurvivalRecord> records(n);
  for (std::size_t i = 0; i < n; ++i) {
    records[i].covariates.resize(m);
    for (std::size_t f = 0; f < m; ++f) records[i].covariates[f] = risk[i] + draw_uniform(rng, q_lo, q_hi);
    records[i].time = t[i];
    records[i].event = true;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  const auto n_censored = static_cast<std::size_t>(std::llround(config.censoring_fraction * static_cast<double>(n)));
  for (std::size_t c = 0; c < n_censored; ++c) {
    auto& rec = records[order[c]];
    rec.event = false;
    rec.time = t[order[c]] * draw_uniform(rng, 0.2, 0.8);
  }

  std::vector<std::string> names(m);
  for (std::size_t f = 0; f < m; ++f) names[f] = "f" + std::to_string(f + 1);
  return {SurvivalDataset(std::move(records), std::move(names)), std::move(risk), std::move(t)};
}

SurvivalDataset generate(const SyntheticConfig& config) { return generate_with_latent(config).data; }

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t n_features, std::uint64_t replicate) {
  std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32),
                    static_cast<std::uint32_t>(n_features), static_cast<std::uint32_t>(replicate),
                    static_cast<std::uint32_t>(replicate >> 32)};
  std::array<std::uint32_t, 2> words{};
  seq.generate(words.begin(), words.end());
  return (static_cast<std::uint64_t>(words[1]) << 32) | words[0];
}

std::vector<SurvivalDataset> sweep_feature_counts(const SyntheticConfig& base,
                                                  std::span<const std::size_t> counts,
                                                  std::size_t replicates) {
  if (counts.empty()) throw Error("synthetic sweep: no feature counts");
  std::vector<SurvivalDataset> out;
  out.reserve(counts.size() * replicates);
  for (std::size_t m : counts) {
    if (m == 0) throw Error("synthetic sweep: feature counts must be positive");
    for (std::size_t r = 0; r < replicates; ++r) {
      SyntheticConfig cfg = base;
      cfg.n_features = m;
      cfg.seed = derive_seed(base.seed, m, r);
      out.push_back(generate(cfg));
    }
  }
  return out;
}

}  // namespace smoothrank
