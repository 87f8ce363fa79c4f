#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "smoothrank/smooth_rank.hpp"
#include "smoothrank/synthetic.hpp"

namespace smoothrank {

struct ExperimentOptions {
  TrainOptions train;
  // k for k-NN imputation of the whole dataset before any split; nullopt keeps missing values.
  std::optional<std::size_t> impute_k;
  // Worker threads for independent runs; 0 picks hardware concurrency.
  unsigned threads = 0;
  // Attempts per run before giving up on drawing a usable split.
  std::size_t max_redraws = 1000;
};

struct SplitPlan {
  double train_fraction = 2.0 / 3.0;
  std::size_t n_splits = 100;
  std::uint64_t seed = 1;
};

struct ExperimentResult {
  std::vector<double> per_run_ci;
  std::vector<std::size_t> per_run_surviving;
  double mean_ci = 0.0;
  double surviving_features_mean = 0.0;
  std::size_t redraws = 0;
  std::string config_echo;  // JSON object
};

struct SweepRow {
  std::size_t key = 0;  // training size or feature count
  double mean_ci = 0.0;
  double sd_ci = 0.0;
  std::size_t n_models = 0;
};

struct SweepTable {
  std::string key_name;  // "size" or "m"
  std::vector<SweepRow> rows;
  std::size_t redraws = 0;
  std::string config_echo;  // JSON object
};

// Repeated random train/test splits; each split is trained, scored and
// evaluated by the concordance index on its test part. Split i depends only
// on (seed, i), so a longer run extends a shorter one.
ExperimentResult run_random_splits(const SurvivalDataset& data, const SplitPlan& plan,
                                   const ExperimentOptions& options = {});

struct SizeSweepPlan {
  std::vector<std::size_t> sizes;
  std::size_t draws_per_size = 20;
  std::size_t outer_reps = 10;
  double test_fraction = 0.2;
  std::uint64_t seed = 1;
};

// For every outer repetition a test set is fixed, then `draws_per_size`
// training subsets of each size are drawn from the remaining records.
SweepTable run_size_sweep(const SurvivalDataset& data, const SizeSweepPlan& plan,
                          const ExperimentOptions& options = {});

// Generates `replicates` datasets per feature count, splits each into equal
// train and test halves and reports the mean test concordance per count.
SweepTable run_dimensionality_sweep(const SyntheticConfig& base,
                                    std::span<const std::size_t> counts, std::size_t replicates,
                                    const ExperimentOptions& options = {});

enum class ReportFormat { Csv, Json };

// CSV: one row per run (split_index, ci, surviving_features) or per sweep
// point (key, mean_ci, sd_ci, n_models). JSON carries the same rows plus the
// configuration. Numbers use 6 significant digits.
void emit_report(const ExperimentResult& result, ReportFormat format, std::ostream& out);
void emit_report(const SweepTable& table, ReportFormat format, std::ostream& out);
void emit_report(const ExperimentResult& result, ReportFormat format,
                 const std::filesystem::path& path);
void emit_report(const SweepTable& table, ReportFormat format, const std::filesystem::path& path);

std::string format_number(double value);

// Runs fn(0..n-1) on up to `threads` workers (0 = hardware concurrency).
// The first exception thrown by any task is rethrown after all workers stop.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace smoothrank
