#include "smoothrank/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <numeric>
#include <ostream>
#include <random>
#include <thread>

#include <json.hpp>

#include "smoothrank/error.hpp"

namespace smoothrank {

using nlohmann::json;

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = n;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

namespace {

// Independent stream per (seed, tags...). std::seed_seq is fully specified,
// so streams are identical across platforms for a given engine.
std::mt19937_64 stream(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) {
  std::vector<std::uint32_t> words{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  for (auto t : tags) {
    words.push_back(static_cast<std::uint32_t>(t));
    words.push_back(static_cast<std::uint32_t>(t >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

// Stream tags keeping the protocols' random streams apart.
enum StreamTag : std::uint64_t { kSplit = 1, kOuterTest = 2, kTrainDraw = 3, kSyntheticSplit = 4 };

bool has_comparable_pair(const SurvivalDataset& data) {
  const auto targets = data.targets();
  return concordance_counts(std::vector<double>(targets.size(), 0.0), targets).comparable() > 0;
}

struct RunOutcome {
  double ci = 0.0;
  std::size_t surviving = 0;
};

RunOutcome fit_and_evaluate(const SurvivalDataset& train_part, const SurvivalDataset& test_part,
                            const TrainOptions& options) {
  const auto model = train(train_part, options);
  const auto scores = score_all(model, test_part);
  return {concordance_index(scores, test_part.targets()), model.surviving_count()};
}

SurvivalDataset prepare(const SurvivalDataset& data, const ExperimentOptions& options) {
  if (options.impute_k) return impute_knn(data, *options.impute_k);
  return data;
}

TrainOptions single_threaded(TrainOptions o) {
  o.threads = 1;
  return o;
}

json train_options_json(const TrainOptions& o) {
  return {{"grid_points", o.grid_points},
          {"density_cutoff", o.density_cutoff},
          {"loess_span", o.loess_span},
          {"min_class_samples", o.min_class_samples},
          {"standardize", o.standardize}};
}

json options_json(const ExperimentOptions& o) {
  return {{"train", train_options_json(o.train)},
          {"impute_k", o.impute_k ? json(*o.impute_k) : json(nullptr)},
          {"max_redraws", o.max_redraws}};
}

std::pair<double, double> mean_sd(std::span<const double> v) {
  if (v.empty()) return {0.0, 0.0};
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  if (v.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(v.size() - 1))};
}

std::vector<std::size_t> iota_indices(std::size_t n) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  return idx;
}

}  // namespace

ExperimentResult run_random_splits(const SurvivalDataset& data, const SplitPlan& plan,
                                   const ExperimentOptions& options) {
  if (!(plan.train_fraction > 0.0 && plan.train_fraction < 1.0))
    throw Error("splits: train fraction must lie in (0, 1)");
  if (plan.n_splits == 0) throw Error("splits: need at least one split");
  const auto working = prepare(data, options);
  const std::size_t n = working.size();
  const auto n_train = static_cast<std::size_t>(std::llround(plan.train_fraction * static_cast<double>(n)));
  if (n_train < 2 || n - n_train < 2) throw Error("splits: dataset too small for the train fraction");
  const auto train_opts = single_threaded(options.train);

  std::vector<RunOutcome> outcomes(plan.n_splits);
  std::vector<std::size_t> redraws(plan.n_splits, 0);
  parallel_for(plan.n_splits, options.threads, [&](std::size_t split) {
    for (std::size_t attempt = 0; attempt <= options.max_redraws; ++attempt) {
      auto rng = stream(plan.seed, {kSplit, split, attempt});
      auto idx = iota_indices(n);
      std::shuffle(idx.begin(), idx.end(), rng);
      const auto train_part = working.subset(std::span(idx).first(n_train));
      const auto test_part = working.subset(std::span(idx).subspan(n_train));
      try {
        if (!has_comparable_pair(train_part) || !has_comparable_pair(test_part))
          throw Error("split without comparable pairs");
        outcomes[split] = fit_and_evaluate(train_part, test_part, train_opts);
        redraws[split] = attempt;
        return;
      } catch (const Error&) {
        // degenerate split: draw again
      }
    }
    throw Error("splits: no usable split after " + std::to_string(options.max_redraws) + " redraws");
  });

  ExperimentResult result;
  for (std::size_t s = 0; s < plan.n_splits; ++s) {
    result.per_run_ci.push_back(outcomes[s].ci);
    result.per_run_surviving.push_back(outcomes[s].surviving);
    result.redraws += redraws[s];
  }
  result.mean_ci = mean_sd(result.per_run_ci).first;
  result.surviving_features_mean =
      static_cast<double>(std::accumulate(result.per_run_surviving.begin(), result.per_run_surviving.end(),
                                          std::size_t{0})) /
      static_cast<double>(plan.n_splits);
  result.config_echo = json{{"protocol", "splits"},
                            {"records", n},
                            {"features", working.feature_count()},
                            {"train_fraction", plan.train_fraction},
                            {"n_splits", plan.n_splits},
                            {"seed", plan.seed},
                            {"options", options_json(options)}}
                           .dump();
  return result;
}

SweepTable run_size_sweep(const SurvivalDataset& data, const SizeSweepPlan& plan,
                          const ExperimentOptions& options) {
  if (plan.sizes.empty()) throw Error("size sweep: no training sizes");
  if (plan.draws_per_size == 0 || plan.outer_reps == 0) throw Error("size sweep: zero repetitions");
  if (!(plan.test_fraction > 0.0 && plan.test_fraction < 1.0))
    throw Error("size sweep: test fraction must lie in (0, 1)");
  const auto working = prepare(data, options);
  const std::size_t n = working.size();
  const auto n_test = static_cast<std::size_t>(std::llround(plan.test_fraction * static_cast<double>(n)));
  const std::size_t pool_size = n - n_test;
  for (std::size_t s : plan.sizes)
    if (s < 2 || s > pool_size)
      throw Error("size sweep: training size " + std::to_string(s) + " outside [2, " +
                  std::to_string(pool_size) + "]");
  if (n_test < 2) throw Error("size sweep: test set too small");
  const auto train_opts = single_threaded(options.train);

  SweepTable table;
  table.key_name = "size";

  // Fixed test set per outer repetition.
  std::vector<std::vector<std::size_t>> test_idx(plan.outer_reps), pool_idx(plan.outer_reps);
  for (std::size_t o = 0; o < plan.outer_reps; ++o) {
    for (std::size_t attempt = 0;; ++attempt) {
      if (attempt > options.max_redraws) throw Error("size sweep: no test set with comparable pairs");
      auto rng = stream(plan.seed, {kOuterTest, o, attempt});
      auto idx = iota_indices(n);
      std::shuffle(idx.begin(), idx.end(), rng);
      test_idx[o].assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_test));
      pool_idx[o].assign(idx.begin() + static_cast<std::ptrdiff_t>(n_test), idx.end());
      if (has_comparable_pair(working.subset(test_idx[o]))) {
        table.redraws += attempt;
        break;
      }
    }
  }

  const std::size_t n_sizes = plan.sizes.size();
  const std::size_t per_rep = n_sizes * plan.draws_per_size;
  const std::size_t tasks = plan.outer_reps * per_rep;
  std::vector<double> ci(tasks, 0.0);
  std::vector<std::size_t> redraws(tasks, 0);
  parallel_for(tasks, options.threads, [&](std::size_t task) {
    const std::size_t o = task / per_rep;
    const std::size_t s = (task % per_rep) / plan.draws_per_size;
    const std::size_t d = task % plan.draws_per_size;
    const std::size_t size = plan.sizes[s];
    const auto test_part = working.subset(test_idx[o]);
    for (std::size_t attempt = 0; attempt <= options.max_redraws; ++attempt) {
      auto rng = stream(plan.seed, {kTrainDraw, o, s, d, attempt});
      auto pool = pool_idx[o];
      std::shuffle(pool.begin(), pool.end(), rng);
      try {
        const auto train_part = working.subset(std::span(pool).first(size));
        ci[task] = fit_and_evaluate(train_part, test_part, train_opts).ci;
        redraws[task] = attempt;
        return;
      } catch (const Error&) {
        // untrainable subset: draw again
      }
    }
    throw Error("size sweep: no trainable subset of size " + std::to_string(size));
  });

  for (std::size_t s = 0; s < n_sizes; ++s) {
    std::vector<double> values;
    for (std::size_t o = 0; o < plan.outer_reps; ++o)
      for (std::size_t d = 0; d < plan.draws_per_size; ++d) values.push_back(ci[o * per_rep + s * plan.draws_per_size + d]);
    const auto [mean, sd] = mean_sd(values);
    table.rows.push_back({plan.sizes[s], mean, sd, values.size()});
  }
  for (auto r : redraws) table.redraws += r;
  table.config_echo = json{{"protocol", "size-sweep"},
                           {"records", n},
                           {"features", working.feature_count()},
                           {"sizes", plan.sizes},
                           {"draws_per_size", plan.draws_per_size},
                           {"outer_reps", plan.outer_reps},
                           {"test_fraction", plan.test_fraction},
                           {"seed", plan.seed},
                           {"options", options_json(options)}}
                          .dump();
  return table;
}

SweepTable run_dimensionality_sweep(const SyntheticConfig& base, std::span<const std::size_t> counts,
                                    std::size_t replicates, const ExperimentOptions& options) {
  if (counts.empty()) throw Error("dimensionality sweep: no feature counts");
  if (replicates == 0) throw Error("dimensionality sweep: zero replicates");
  base.validate();
  const auto train_opts = single_threaded(options.train);
  const std::size_t n = base.n_records;
  const std::size_t n_train = n / 2;

  const std::size_t tasks = counts.size() * replicates;
  std::vector<double> ci(tasks, 0.0);
  std::vector<std::size_t> redraws(tasks, 0);
  parallel_for(tasks, options.threads, [&](std::size_t task) {
    const std::size_t m = counts[task / replicates];
    const std::size_t r = task % replicates;
    SyntheticConfig cfg = base;
    cfg.n_features = m;
    cfg.seed = derive_seed(base.seed, m, r);
    const auto data = prepare(generate(cfg), options);
    for (std::size_t attempt = 0; attempt <= options.max_redraws; ++attempt) {
      auto rng = stream(cfg.seed, {kSyntheticSplit, attempt});
      auto idx = iota_indices(n);
      std::shuffle(idx.begin(), idx.end(), rng);
      const auto train_part = data.subset(std::span(idx).first(n_train));
      const auto test_part = data.subset(std::span(idx).subspan(n_train));
      try {
        if (!has_comparable_pair(test_part)) throw Error("test half without comparable pairs");
        ci[task] = fit_and_evaluate(train_part, test_part, train_opts).ci;
        redraws[task] = attempt;
        return;
      } catch (const Error&) {
        // degenerate split: draw again
      }
    }
    throw Error("dimensionality sweep: no usable split for M = " + std::to_string(m));
  });

  SweepTable table;
  table.key_name = "m";
  for (std::size_t c = 0; c < counts.size(); ++c) {
    const auto values = std::span(ci).subspan(c * replicates, replicates);
    const auto [mean, sd] = mean_sd(values);
    table.rows.push_back({counts[c], mean, sd, replicates});
  }
  for (auto r : redraws) table.redraws += r;
  table.config_echo = json{{"protocol", "dim-sweep"},
                           {"records", n},
                           {"counts", std::vector<std::size_t>(counts.begin(), counts.end())},
                           {"replicates", replicates},
                           {"censoring_fraction", base.censoring_fraction},
                           {"risk_source_mean", base.risk_source_mean},
                           {"risk_source_sd", base.risk_source_sd},
                           {"seed", base.seed},
                           {"options", options_json(options)}}
                          .dump();
  return table;
}

std::string format_number(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

namespace {

// json number that prints with 6 significant digits
json rounded(double v) { return json::parse(format_number(v)); }

}  // namespace

void emit_report(const ExperimentResult& result, ReportFormat format, std::ostream& out) {
  if (result.per_run_ci.empty()) throw Error("report: empty result");
  if (format == ReportFormat::Csv) {
    out << "split_index,ci,surviving_features\n";
    for (std::size_t i = 0; i < result.per_run_ci.size(); ++i)
      out << i << ',' << format_number(result.per_run_ci[i]) << ',' << result.per_run_surviving[i] << '\n';
    return;
  }
  json runs = json::array();
  for (std::size_t i = 0; i < result.per_run_ci.size(); ++i)
    runs.push_back({{"split_index", i}, {"ci", rounded(result.per_run_ci[i])},
                    {"surviving_features", result.per_run_surviving[i]}});
  json doc{{"config", json::parse(result.config_echo.empty() ? "{}" : result.config_echo)},
           {"mean_ci", rounded(result.mean_ci)},
           {"surviving_features_mean", rounded(result.surviving_features_mean)},
           {"redraws", result.redraws},
           {"runs", std::move(runs)}};
  out << doc.dump(2) << '\n';
}

void emit_report(const SweepTable& table, ReportFormat format, std::ostream& out) {
  if (table.rows.empty()) throw Error("report: empty sweep table");
  if (format == ReportFormat::Csv) {
    out << table.key_name << ",mean_ci,sd_ci,n_models\n";
    for (const auto& r : table.rows)
      out << r.key << ',' << format_number(r.mean_ci) << ',' << format_number(r.sd_ci) << ',' << r.n_models << '\n';
    return;
  }
  json rows = json::array();
  for (const auto& r : table.rows)
    rows.push_back({{table.key_name, r.key}, {"mean_ci", rounded(r.mean_ci)},
                    {"sd_ci", rounded(r.sd_ci)}, {"n_models", r.n_models}});
  json doc{{"config", json::parse(table.config_echo.empty() ? "{}" : table.config_echo)},
           {"redraws", table.redraws},
           {"rows", std::move(rows)}};
  out << doc.dump(2) << '\n';
}

namespace {

template <typename Report>
void emit_to_file(const Report& report, ReportFormat format, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  emit_report(report, format, out);
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

}  // namespace

void emit_report(const ExperimentResult& result, ReportFormat format, const std::filesystem::path& path) {
  emit_to_file(result, format, path);
}

void emit_report(const SweepTable& table, ReportFormat format, const std::filesystem::path& path) {
  emit_to_file(table, format, path);
}

}  // namespace smoothrank
