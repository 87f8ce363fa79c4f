#include "smoothrank/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "smoothrank/error.hpp"

namespace smoothrank {

using nlohmann::json;

namespace {

constexpr int kFormatVersion = 1;

json options_to_json(const TrainOptions& o) {
  return {{"grid_points", o.grid_points},
          {"density_cutoff", o.density_cutoff},
          {"loess_span", o.loess_span},
          {"min_class_samples", o.min_class_samples},
          {"standardize", o.standardize}};
}

TrainOptions options_from_json(const json& j) {
  TrainOptions o;
  o.grid_points = j.at("grid_points").get<std::size_t>();
  o.density_cutoff = j.at("density_cutoff").get<double>();
  o.loess_span = j.at("loess_span").get<double>();
  o.min_class_samples = j.at("min_class_samples").get<std::size_t>();
  o.standardize = j.at("standardize").get<bool>();
  return o;
}

json predictor_to_json(const MarginalPredictor& p, const std::string& name) {
  json j{{"feature", name},
         {"feature_index", p.feature_index},
         {"status", std::string(to_string(p.status))},
         {"raw_weight", p.raw_weight},
         {"weight", p.weight}};
  if (!p.built()) return j;

  j["scaling"] = {{"center", p.scaling.center}, {"scale", p.scaling.scale}};
  j["priors"] = {{"early", p.priors.early}, {"survivor", p.priors.survivor}};
  j["grid"] = {{"lo", p.grid.lo()}, {"hi", p.grid.hi()}, {"points", p.grid.size()}};
  json q = json::array();
  for (const auto& v : p.q_raw) q.push_back(v ? json(*v) : json(nullptr));
  j["q_raw"] = std::move(q);
  j["smooth"] = {{"span", p.q_smooth.span},
                 {"degree", p.q_smooth.degree},
                 {"degenerate_windows", p.q_smooth.degenerate_windows},
                 {"x", p.q_smooth.design_x},
                 {"y", p.q_smooth.fitted_y}};
  return j;
}

MarginalPredictor predictor_from_json(const json& j) {
  MarginalPredictor p;
  p.feature_index = j.at("feature_index").get<std::size_t>();
  const auto status = predictor_status_from_string(j.at("status").get<std::string>());
  if (!status) throw Error("model: unknown predictor status '" + j.at("status").get<std::string>() + "'");
  p.status = *status;
  p.raw_weight = j.at("raw_weight").get<double>();
  p.weight = j.at("weight").get<double>();
  if (!p.built()) return p;

  p.scaling.center = j.at("scaling").at("center").get<double>();
  p.scaling.scale = j.at("scaling").at("scale").get<double>();
  p.priors.early = j.at("priors").at("early").get<double>();
  p.priors.survivor = j.at("priors").at("survivor").get<double>();
  const auto& g = j.at("grid");
  p.grid = EvaluationGrid(g.at("lo").get<double>(), g.at("hi").get<double>(),
                          g.at("points").get<std::size_t>());
  for (const auto& v : j.at("q_raw"))
    p.q_raw.push_back(v.is_null() ? std::nullopt : std::optional<double>(v.get<double>()));
  if (p.q_raw.size() != p.grid.size()) throw Error("model: q_raw length does not match grid");
  const auto& s = j.at("smooth");
  p.q_smooth.span = s.at("span").get<double>();
  p.q_smooth.degree = s.at("degree").get<int>();
  p.q_smooth.degenerate_windows = s.at("degenerate_windows").get<std::size_t>();
  p.q_smooth.design_x = s.at("x").get<std::vector<double>>();
  p.q_smooth.fitted_y = s.at("y").get<std::vector<double>>();
  if (p.q_smooth.design_x.size() != p.q_smooth.fitted_y.size() || p.q_smooth.design_x.empty())
    throw Error("model: malformed smoothed predictor");
  return p;
}

}  // namespace

std::string model_to_json(const SmoothRankModel& model, int indent) {
  json preds = json::array();
  for (const auto& p : model.predictors)
    preds.push_back(predictor_to_json(p, model.feature_names.at(p.feature_index)));
  json j{{"format", "smoothrank-model"},
         {"version", kFormatVersion},
         {"feature_names", model.feature_names},
         {"threshold", model.threshold.threshold},
         {"class_counts", {{"early", model.early_count}, {"survivor", model.survivor_count}}},
         {"shrinkage_mu", model.shrinkage_mu},
         {"options", options_to_json(model.options)},
         {"warnings", model.warnings},
         {"predictors", std::move(preds)}};
  return j.dump(indent);
}

SmoothRankModel model_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(std::string("model: invalid JSON: ") + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != "smoothrank-model")
      throw Error("model: not a smoothrank model document");
    if (j.at("version").get<int>() != kFormatVersion)
      throw Error("model: unsupported format version");
    SmoothRankModel m;
    m.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    m.threshold.threshold = j.at("threshold").get<double>();
    m.early_count = j.at("class_counts").at("early").get<std::size_t>();
    m.survivor_count = j.at("class_counts").at("survivor").get<std::size_t>();
    m.shrinkage_mu = j.at("shrinkage_mu").get<double>();
    m.options = options_from_json(j.at("options"));
    m.warnings = j.at("warnings").get<std::vector<std::string>>();
    for (const auto& p : j.at("predictors")) m.predictors.push_back(predictor_from_json(p));
    if (m.predictors.size() != m.feature_names.size())
      throw Error("model: predictor count does not match feature count");
    for (std::size_t i = 0; i < m.predictors.size(); ++i)
      if (m.predictors[i].feature_index != i) throw Error("model: predictors out of feature order");
    return m;
  } catch (const json::exception& e) {
    throw Error(std::string("model: ") + e.what());
  }
}

void save_model(const SmoothRankModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << model_to_json(model) << '\n';
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

SmoothRankModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return model_from_json(buf.str());
}

}  // namespace smoothrank
