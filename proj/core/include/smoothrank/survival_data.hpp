#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "smoothrank/concordance.hpp"

namespace smoothrank {

// Covariate vector with missing values.
using Covariates = std::vector<std::optional<double>>;

struct SurvivalRecord {
  Covariates covariates;
  double time = 0.0;   // > 0
  bool event = false;  // true: failure observed, false: censored at `time`
};

// Immutable collection of records sharing one feature layout.
class SurvivalDataset {
 public:
  // Validates: N >= 2, time > 0 and covariates.size() == feature_names.size()
  // for every record.
  SurvivalDataset(std::vector<SurvivalRecord> records, std::vector<std::string> feature_names);

  std::size_t size() const noexcept { return records_.size(); }
  std::size_t feature_count() const noexcept { return feature_names_.size(); }

  const std::vector<SurvivalRecord>& records() const noexcept { return records_; }
  const std::vector<std::string>& feature_names() const noexcept { return feature_names_; }
  const SurvivalRecord& operator[](std::size_t i) const { return records_[i]; }

  std::vector<SurvivalTarget> targets() const;
  std::size_t missing_count() const;

  SurvivalDataset subset(std::span<const std::size_t> indices) const;

 private:
  std::vector<SurvivalRecord> records_;
  std::vector<std::string> feature_names_;
};

// Column mapping for CSV ingestion. An empty `feature_cols` selects every
// column other than the time and event columns, in file order.
struct CsvSchema {
  std::string time_col = "time";
  std::string event_col = "event";
  std::vector<std::string> feature_cols;
};

// Header row required. Empty cells and "NA" are missing covariates; time
// and event must be present, time > 0, event in {0, 1}.
SurvivalDataset read_csv(std::istream& in, const CsvSchema& schema = {});
SurvivalDataset load_csv(const std::filesystem::path& path, const CsvSchema& schema = {});

// Covariates for scoring, looked up by feature name. Targets are filled in
// only when the file has both the time and the event column.
struct ScoringTable {
  std::vector<Covariates> rows;
  std::optional<std::vector<SurvivalTarget>> targets;
};

ScoringTable read_scoring_table(std::istream& in, const std::vector<std::string>& feature_names,
                                const CsvSchema& schema = {});
ScoringTable load_scoring_table(const std::filesystem::path& path,
                                const std::vector<std::string>& feature_names,
                                const CsvSchema& schema = {});

// Writes time, event, then the features; missing cells as NA. Values are
// printed with round-trip precision.
void write_csv(const SurvivalDataset& data, std::ostream& out);
void save_csv(const SurvivalDataset& data, const std::filesystem::path& path);

// Splits "a,b,c" into names; "rest" (or empty) yields an empty list.
std::vector<std::string> parse_feature_list(const std::string& list);

struct BinarizationSpec {
  double threshold = 0.0;
};

enum class SampleClass {
  EarlyFailure = 1,  // event observed at or before the threshold
  Survivor = 2,      // recorded time beyond the threshold
};

struct BinarySample {
  Covariates covariates;
  SampleClass label = SampleClass::Survivor;
  std::size_t source_index = 0;
};

// Picks the observed event time that best balances the two classes; ties
// go to the smaller threshold.
BinarizationSpec select_threshold(const SurvivalDataset& data);

// EarlyFailure: event && time <= threshold. Survivor: time > threshold.
// Censored records at or before the threshold are dropped.
std::vector<BinarySample> binarize(const SurvivalDataset& data, const BinarizationSpec& spec);

// Replaces every missing cell by the mean of that feature over the k nearest
// records having it. Distance: features standardized over their observed
// values, root mean squared difference over the features both records have.
SurvivalDataset impute_knn(const SurvivalDataset& data, std::size_t k);

}  // namespace smoothrank
