#include "smoothrank/smooth_rank.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include "smoothrank/concordance.hpp"
#include "smoothrank/error.hpp"
#include "smoothrank/experiment.hpp"

namespace smoothrank {

namespace {

constexpr std::array<std::pair<PredictorStatus, std::string_view>, 5> kStatusNames{{
    {PredictorStatus::Built, "built"},
    {PredictorStatus::TooFewSamples, "too_few_samples"},
    {PredictorStatus::ConstantFeature, "constant_feature"},
    {PredictorStatus::AllMasked, "all_masked"},
    {PredictorStatus::TooFewPoints, "too_few_points"},
}};

double mean_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

std::string_view to_string(PredictorStatus status) noexcept {
  for (const auto& [s, name] : kStatusNames)
    if (s == status) return name;
  return "unknown";
}

std::optional<PredictorStatus> predictor_status_from_string(std::string_view name) noexcept {
  for (const auto& [s, n] : kStatusNames)
    if (n == name) return s;
  return std::nullopt;
}

double MarginalPredictor::evaluate(double raw_value) const noexcept {
  return loess_predict(q_smooth, scaling.apply(raw_value));
}

std::size_t SmoothRankModel::surviving_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(predictors.begin(), predictors.end(), [](const auto& p) { return p.active(); }));
}

std::vector<std::optional<double>> build_q_raw(const DensityEstimate& g1, const DensityEstimate& g2,
                                               const ClassPriors& priors, double cutoff) {
  if (!(g1.grid == g2.grid)) throw Error("build_q_raw: class densities use different grids");
  if (g1.values.size() != g1.grid.size() || g2.values.size() != g2.grid.size())
    throw Error("build_q_raw: density length does not match its grid");

  std::vector<std::optional<double>> q(g1.values.size());
  for (std::size_t k = 0; k < q.size(); ++k) {
    const double a = g1.values[k];
    const double b = g2.values[k];
    const double mixture = priors.early * a + priors.survivor * b;
    if (mixture < cutoff || !(mixture > 0.0)) continue;
    q[k] = (a - b) / mixture;
  }
  return q;
}

MarginalPredictor build_predictor(std::span<const BinarySample> samples, std::size_t feature_index,
                                  const TrainOptions& options) {
  MarginalPredictor pred;
  pred.feature_index = feature_index;

  std::vector<double> early, survivor;
  for (const auto& s : samples) {
    if (feature_index >= s.covariates.size()) throw Error("build_predictor: feature index out of range");
    const auto& v = s.covariates[feature_index];
    if (!v) continue;
    (s.label == SampleClass::EarlyFailure ? early : survivor).push_back(*v);
  }
  const std::size_t min_count = std::max<std::size_t>(options.min_class_samples, 2);
  if (early.size() < min_count || survivor.size() < min_count) {
    pred.status = PredictorStatus::TooFewSamples;
    return pred;
  }
  const double total = static_cast<double>(early.size() + survivor.size());
  pred.priors.early = static_cast<double>(early.size()) / total;
  pred.priors.survivor = static_cast<double>(survivor.size()) / total;

  std::vector<double> pooled(early);
  pooled.insert(pooled.end(), survivor.begin(), survivor.end());
  const auto [lo, hi] = std::minmax_element(pooled.begin(), pooled.end());
  if (*lo == *hi) {
    pred.status = PredictorStatus::ConstantFeature;
    return pred;
  }
  if (options.standardize) {
    pred.scaling.center = mean_of(pooled);
    pred.scaling.scale = sample_sd(pooled);
  }
  for (auto* v : {&early, &survivor, &pooled})
    for (double& x : *v) x = pred.scaling.apply(x);

  pred.grid = make_grid(early, survivor, options.grid_points);
  const auto g1 = estimate_density(early, pred.grid, class_bandwidth(early, pooled));
  const auto g2 = estimate_density(survivor, pred.grid, class_bandwidth(survivor, pooled));
  pred.q_raw = build_q_raw(g1, g2, pred.priors, options.density_cutoff);

  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < pred.q_raw.size(); ++k) {
    if (!pred.q_raw[k]) continue;
    xs.push_back(pred.grid[k]);
    ys.push_back(*pred.q_raw[k]);
  }
  if (xs.empty()) {
    pred.status = PredictorStatus::AllMasked;
    return pred;
  }
  if (xs.size() < 4 || options.loess_span * static_cast<double>(xs.size()) < 2.0) {
    pred.status = PredictorStatus::TooFewPoints;
    return pred;
  }
  pred.q_smooth = loess_fit(xs, ys, options.loess_span);
  pred.status = PredictorStatus::Built;
  return pred;
}

double predictor_weight(const MarginalPredictor& predictor, std::span<const BinarySample> samples) {
  if (!predictor.built()) return 0.0;
  std::vector<double> scores;
  std::vector<bool> positive;
  for (const auto& s : samples) {
    const auto& v = s.covariates[predictor.feature_index];
    if (!v) continue;
    scores.push_back(predictor.evaluate(*v));
    positive.push_back(s.label == SampleClass::EarlyFailure);
  }
  const auto n_pos = static_cast<std::size_t>(std::count(positive.begin(), positive.end(), true));
  if (n_pos == 0 || n_pos == positive.size()) return 0.0;
  return auc(scores, positive) - 0.5;
}

std::vector<double> shrink_weights(std::span<const double> weights) {
  if (weights.empty()) throw Error("shrink_weights: no weights");
  const double mu = *std::max_element(weights.begin(), weights.end());
  std::vector<double> out(weights.size(), 0.0);
  if (mu <= 0.0) return out;
  const double cut = mu / 3.0;
  for (std::size_t i = 0; i < weights.size(); ++i)
    if (weights[i] > cut) out[i] = weights[i] - cut;
  return out;
}

SmoothRankModel train(const SurvivalDataset& data, const TrainOptions& options) {
  SmoothRankModel model;
  model.feature_names = data.feature_names();
  model.options = options;
  model.threshold = select_threshold(data);
  const auto samples = binarize(data, model.threshold);
  for (const auto& s : samples)
    (s.label == SampleClass::EarlyFailure ? model.early_count : model.survivor_count)++;

  const std::size_t m = data.feature_count();
  model.predictors.resize(m);
  parallel_for(m, options.threads, [&](std::size_t f) {
    auto pred = build_predictor(samples, f, options);
    pred.raw_weight = predictor_weight(pred, samples);
    model.predictors[f] = std::move(pred);
  });

  std::vector<double> raw(m);
  std::size_t built = 0;
  for (std::size_t f = 0; f < m; ++f) {
    const auto& p = model.predictors[f];
    raw[f] = p.raw_weight;
    if (p.built()) {
      ++built;
      if (p.q_smooth.degenerate_windows > 0)
        model.warnings.push_back("feature '" + model.feature_names[f] + "': " +
                                 std::to_string(p.q_smooth.degenerate_windows) +
                                 " smoothing windows fell back to a weighted mean");
    } else {
      model.warnings.push_back("feature '" + model.feature_names[f] + "' dropped: " +
                               std::string(to_string(p.status)));
    }
  }
  if (built == 0) throw Error("no feature produced a usable predictor");

  model.shrinkage_mu = *std::max_element(raw.begin(), raw.end());
  const auto shrunk = shrink_weights(raw);
  for (std::size_t f = 0; f < m; ++f) model.predictors[f].weight = shrunk[f];
  if (model.surviving_count() == 0)
    model.warnings.emplace_back("all predictor weights are zero after shrinkage");
  return model;
}

ScoreDetail score_detail(const SmoothRankModel& model, const Covariates& covariates) {
  if (covariates.size() != model.feature_count())
    throw Error("score: expected " + std::to_string(model.feature_count()) + " covariates, got " +
                std::to_string(covariates.size()));
  double num = 0.0;
  double den = 0.0;
  ScoreDetail out;
  for (const auto& p : model.predictors) {
    const auto& v = covariates[p.feature_index];
    if (!v || !p.active()) continue;
    num += p.weight * p.evaluate(*v);
    den += p.weight;
    ++out.active_features;
  }
  if (out.active_features > 0) out.value = num / den;
  return out;
}

double score(const SmoothRankModel& model, const Covariates& covariates) {
  return score_detail(model, covariates).value;
}

std::vector<double> score_all(const SmoothRankModel& model, const SurvivalDataset& data) {
  std::vector<double> out;
  out.reserve(data.size());
  for (const auto& r : data.records()) out.push_back(score(model, r.covariates));
  return out;
}

}  // namespace smoothrank
