#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "smoothrank/density.hpp"
#include "smoothrank/loess.hpp"
#include "smoothrank/survival_data.hpp"

namespace smoothrank {

struct TrainOptions {
  std::size_t grid_points = kDefaultGridPoints;
  // Mixture density below which the class-contrast ratio is not evaluated.
  double density_cutoff = 0.1;
  double loess_span = kDefaultLoessSpan;
  // Minimum number of present values per class for a feature to get a predictor.
  std::size_t min_class_samples = 4;
  // Z-score each feature on its training values before density estimation.
  // With false the cutoff applies to densities in raw feature units.
  bool standardize = true;
  // Worker threads for per-feature construction; 0 picks hardware concurrency.
  unsigned threads = 1;
};

// Class frequencies among training samples that have the feature present.
struct ClassPriors {
  double early = 0.5;  // EarlyFailure
  double survivor = 0.5;
};

// Affine map from raw feature units to the units the predictor was built in.
struct FeatureScaling {
  double center = 0.0;
  double scale = 1.0;

  double apply(double x) const noexcept { return (x - center) / scale; }
};

enum class PredictorStatus {
  Built,
  TooFewSamples,    // a class has fewer than min_class_samples present values
  ConstantFeature,  // no spread in the pooled sample
  AllMasked,        // mixture density below the cutoff everywhere
  TooFewPoints,     // not enough unmasked grid points to smooth
};

std::string_view to_string(PredictorStatus status) noexcept;
std::optional<PredictorStatus> predictor_status_from_string(std::string_view name) noexcept;

struct MarginalPredictor {
  std::size_t feature_index = 0;
  PredictorStatus status = PredictorStatus::TooFewSamples;
  FeatureScaling scaling;
  ClassPriors priors;
  EvaluationGrid grid;
  // (g1 - g2) / (pi1 g1 + pi2 g2) per grid point; nullopt where masked.
  std::vector<std::optional<double>> q_raw;
  LoessFit q_smooth;
  double raw_weight = 0.0;  // CI - 0.5 before shrinkage
  double weight = 0.0;      // after shrinkage

  bool built() const noexcept { return status == PredictorStatus::Built; }
  bool active() const noexcept { return built() && weight > 0.0; }

  // Smoothed predictor value at a raw feature value.
  double evaluate(double raw_value) const noexcept;
};

struct SmoothRankModel {
  std::vector<std::string> feature_names;
  std::vector<MarginalPredictor> predictors;  // one per feature, in feature order
  BinarizationSpec threshold;
  std::size_t early_count = 0;
  std::size_t survivor_count = 0;
  double shrinkage_mu = 0.0;
  TrainOptions options;
  std::vector<std::string> warnings;

  std::size_t feature_count() const noexcept { return predictors.size(); }
  // Predictors with positive weight after shrinkage.
  std::size_t surviving_count() const noexcept;
};

// Ratio of class-density contrast to the mixture density on the shared grid,
// masked where the mixture density is below `cutoff`. Throws if the grids differ.
std::vector<std::optional<double>> build_q_raw(const DensityEstimate& g1, const DensityEstimate& g2,
                                               const ClassPriors& priors, double cutoff = 0.1);

// Builds the per-feature predictor from the samples that have the feature.
// Unusable features come back with a non-Built status and zero weight.
MarginalPredictor build_predictor(std::span<const BinarySample> samples, std::size_t feature_index,
                                  const TrainOptions& options = {});

// AUC of the predictor over the samples with the feature (EarlyFailure as the
// positive class) minus 0.5. May be negative.
double predictor_weight(const MarginalPredictor& predictor, std::span<const BinarySample> samples);

// mu = max weight; w -> w - mu/3 where w > mu/3, else 0. All zero when mu <= 0.
std::vector<double> shrink_weights(std::span<const double> weights);

SmoothRankModel train(const SurvivalDataset& data, const TrainOptions& options = {});

struct ScoreDetail {
  double value = 0.0;
  std::size_t active_features = 0;  // 0 means the "no information" score
};

// Weighted mean of the smoothed predictors over the features that are
// present and carry positive weight. Higher means higher risk.
ScoreDetail score_detail(const SmoothRankModel& model, const Covariates& covariates);
double score(const SmoothRankModel& model, const Covariates& covariates);
std::vector<double> score_all(const SmoothRankModel& model, const SurvivalDataset& data);

}  // namespace smoothrank
