// Command line front end: training, scoring, evaluation, the experiment
// protocols and the synthetic data generator.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "smoothrank/concordance.hpp"
#include "smoothrank/error.hpp"
#include "smoothrank/experiment.hpp"
#include "smoothrank/model_io.hpp"
#include "smoothrank/smooth_rank.hpp"
#include "smoothrank/survival_data.hpp"
#include "smoothrank/synthetic.hpp"

namespace sr = smoothrank;

namespace {

struct CommonFlags {
  std::string data;
  std::string time_col = "time";
  std::string event_col = "event";
  std::string feature_cols = "rest";
  std::string impute = "none";
  std::string out;
  std::string format = "csv";
  std::uint64_t seed = 1;
  unsigned threads = 0;
  bool raw_units = false;
};

void add_schema_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--time-col", f.time_col, "Survival time column")->capture_default_str();
  cmd->add_option("--event-col", f.event_col, "Event indicator column (0/1)")->capture_default_str();
  cmd->add_option("--feature-cols", f.feature_cols, "Comma separated feature columns, or 'rest'")
      ->capture_default_str();
}

void add_data_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--data", f.data, "Input CSV with a header row")->required()->check(CLI::ExistingFile);
  add_schema_flags(cmd, f);
  cmd->add_option("--impute", f.impute, "Missing value handling: none or knnK (e.g. knn5)")
      ->capture_default_str();
  cmd->add_flag("--raw-units", f.raw_units, "Build predictors in raw feature units (no standardization)");
}

void add_output_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--out", f.out, "Output path (default: stdout)");
  cmd->add_option("--format", f.format, "Report format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
}

void add_run_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--seed", f.seed, "Random seed")->capture_default_str();
  cmd->add_option("--threads", f.threads, "Worker threads (0 = all cores)")->capture_default_str();
}

sr::CsvSchema schema_of(const CommonFlags& f) {
  return {f.time_col, f.event_col, sr::parse_feature_list(f.feature_cols)};
}

std::optional<std::size_t> parse_impute(const std::string& mode) {
  if (mode == "none") return std::nullopt;
  if (mode.rfind("knn", 0) == 0 && mode.size() > 3) {
    try {
      std::size_t pos = 0;
      const auto k = std::stoul(mode.substr(3), &pos);
      if (pos == mode.size() - 3 && k > 0) return k;
    } catch (const std::exception&) {
    }
  }
  throw sr::Error("--impute must be 'none' or 'knnK' with K > 0, got '" + mode + "'");
}

sr::ExperimentOptions experiment_options(const CommonFlags& f) {
  sr::ExperimentOptions o;
  o.impute_k = parse_impute(f.impute);
  o.threads = f.threads;
  o.train.standardize = !f.raw_units;
  return o;
}

sr::ReportFormat format_of(const CommonFlags& f) {
  return f.format == "json" ? sr::ReportFormat::Json : sr::ReportFormat::Csv;
}

// Writes through `write` to --out, or to stdout when no path was given.
template <typename Write>
void with_output(const std::string& path, Write&& write) {
  if (path.empty()) {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path);
  if (!out) throw sr::Error("cannot write '" + path + "'");
  write(out);
  if (!out) throw sr::Error("write failed for '" + path + "'");
}

template <typename Report>
void emit(const Report& report, const CommonFlags& f) {
  with_output(f.out, [&](std::ostream& os) { sr::emit_report(report, format_of(f), os); });
}

std::vector<std::size_t> parse_counts(const std::string& list) {
  std::vector<std::size_t> out;
  for (const auto& item : sr::parse_feature_list(list)) {
    try {
      std::size_t pos = 0;
      const auto v = std::stoul(item, &pos);
      if (pos != item.size() || v == 0) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw sr::Error("expected a comma separated list of positive integers, got '" + list + "'");
    }
  }
  if (out.empty()) throw sr::Error("empty list");
  return out;
}

sr::SurvivalDataset load(const CommonFlags& f) {
  auto data = sr::load_csv(f.data, schema_of(f));
  if (const auto k = parse_impute(f.impute)) data = sr::impute_knn(data, *k);
  return data;
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Smooth Rank: ensemble bipartite ranking for censored survival data"};
  app.require_subcommand(1);

  // train
  CommonFlags train_f;
  auto* train_cmd = app.add_subcommand("train", "Train a model and write it as JSON");
  add_data_flags(train_cmd, train_f);
  train_cmd->add_option("--out", train_f.out, "Model path (default: stdout)");

  // score
  CommonFlags score_f;
  std::string model_path;
  auto* score_cmd = app.add_subcommand("score", "Score records with a trained model");
  score_cmd->add_option("--model", model_path, "Model JSON")->required()->check(CLI::ExistingFile);
  score_cmd->add_option("--data", score_f.data, "CSV with the model's feature columns")
      ->required()
      ->check(CLI::ExistingFile);
  add_schema_flags(score_cmd, score_f);
  score_cmd->add_option("--out", score_f.out, "Scores CSV (default: stdout)");

  // eval
  CommonFlags eval_f;
  std::string scores_path;
  auto* eval_cmd = app.add_subcommand("eval", "Concordance index of scores against survival targets");
  eval_cmd->add_option("--scores", scores_path, "CSV with a 'score' column")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--data", eval_f.data, "CSV holding the targets (default: the scores file)")
      ->check(CLI::ExistingFile);
  add_schema_flags(eval_cmd, eval_f);
  add_output_flags(eval_cmd, eval_f);

  // splits
  CommonFlags splits_f;
  sr::SplitPlan split_plan;
  auto* splits_cmd = app.add_subcommand("splits", "Repeated random train/test splits");
  add_data_flags(splits_cmd, splits_f);
  add_output_flags(splits_cmd, splits_f);
  add_run_flags(splits_cmd, splits_f);
  splits_cmd->add_option("--splits", split_plan.n_splits, "Number of splits")->capture_default_str();
  splits_cmd->add_option("--train-fraction", split_plan.train_fraction, "Training share of each split")
      ->capture_default_str();

  // size-sweep
  CommonFlags size_f;
  sr::SizeSweepPlan size_plan;
  std::string sizes;
  auto* size_cmd = app.add_subcommand("size-sweep", "Test concordance as a function of training size");
  add_data_flags(size_cmd, size_f);
  add_output_flags(size_cmd, size_f);
  add_run_flags(size_cmd, size_f);
  size_cmd->add_option("--sizes", sizes, "Comma separated training sizes")->required();
  size_cmd->add_option("--draws", size_plan.draws_per_size, "Training sets per size and repetition")
      ->capture_default_str();
  size_cmd->add_option("--reps", size_plan.outer_reps, "Outer repetitions (fresh test set each)")
      ->capture_default_str();
  size_cmd->add_option("--test-fraction", size_plan.test_fraction, "Held-out share")->capture_default_str();

  // dim-sweep
  CommonFlags dim_f;
  sr::SyntheticConfig dim_cfg;
  std::string counts = "5,10,15,20,25,30,35,40,45,50,55,60,65,70,75";
  std::size_t replicates = 20;
  auto* dim_cmd = app.add_subcommand("dim-sweep", "Synthetic data: test concordance vs feature count");
  add_output_flags(dim_cmd, dim_f);
  add_run_flags(dim_cmd, dim_f);
  dim_cmd->add_option("--counts", counts, "Comma separated feature counts")->capture_default_str();
  dim_cmd->add_option("--replicates", replicates, "Datasets per feature count")->capture_default_str();
  dim_cmd->add_option("--n-records", dim_cfg.n_records, "Records per dataset")->capture_default_str();
  dim_cmd->add_option("--censoring", dim_cfg.censoring_fraction, "Censored share")->capture_default_str();
  dim_cmd->add_option("--risk-mean", dim_cfg.risk_source_mean, "Mean of the risk source")->capture_default_str();
  dim_cmd->add_option("--risk-sd", dim_cfg.risk_source_sd, "SD of the risk source")->capture_default_str();
  dim_cmd->add_option("--impute", dim_f.impute, "Missing value handling")->capture_default_str();
  dim_cmd->add_flag("--raw-units", dim_f.raw_units, "Build predictors in raw feature units");

  // generate
  CommonFlags gen_f;
  sr::SyntheticConfig gen_cfg;
  auto* gen_cmd = app.add_subcommand("generate", "Write a synthetic survival dataset as CSV");
  gen_cmd->add_option("--n-records", gen_cfg.n_records, "Records")->capture_default_str();
  gen_cmd->add_option("--n-features", gen_cfg.n_features, "Features")->capture_default_str();
  gen_cmd->add_option("--censoring", gen_cfg.censoring_fraction, "Censored share")->capture_default_str();
  gen_cmd->add_option("--risk-mean", gen_cfg.risk_source_mean, "Mean of the risk source")->capture_default_str();
  gen_cmd->add_option("--risk-sd", gen_cfg.risk_source_sd, "SD of the risk source")->capture_default_str();
  gen_cmd->add_option("--seed", gen_cfg.seed, "Random seed")->capture_default_str();
  gen_cmd->add_option("--out", gen_f.out, "Output CSV (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*train_cmd) {
      const auto data = load(train_f);
      sr::TrainOptions opts;
      opts.standardize = !train_f.raw_units;
      opts.threads = 0;
      const auto model = sr::train(data, opts);
      with_output(train_f.out, [&](std::ostream& os) { os << sr::model_to_json(model) << '\n'; });
      std::cerr << "trained on " << data.size() << " records; threshold " << model.threshold.threshold
                << "; " << model.surviving_count() << " of " << model.feature_count()
                << " predictors kept\n";
      for (const auto& w : model.warnings) std::cerr << "warning: " << w << '\n';
    } else if (*score_cmd) {
      const auto model = sr::load_model(model_path);
      const auto table = sr::load_scoring_table(score_f.data, model.feature_names, schema_of(score_f));
      std::size_t uninformed = 0;
      with_output(score_f.out, [&](std::ostream& os) {
        os.precision(std::numeric_limits<double>::max_digits10);
        os << "row,score" << (table.targets ? ",time,event" : "") << '\n';
        for (std::size_t i = 0; i < table.rows.size(); ++i) {
          const auto s = sr::score_detail(model, table.rows[i]);
          if (s.active_features == 0) ++uninformed;
          os << i << ',' << s.value;
          if (table.targets) os << ',' << (*table.targets)[i].time << ',' << ((*table.targets)[i].event ? 1 : 0);
          os << '\n';
        }
      });
      if (uninformed > 0)
        std::cerr << "warning: " << uninformed << " records had no usable feature and scored 0\n";
    } else if (*eval_cmd) {
      const auto schema = schema_of(eval_f);
      const auto scored = sr::load_scoring_table(scores_path, {"score"}, schema);
      std::vector<double> scores;
      for (std::size_t i = 0; i < scored.rows.size(); ++i) {
        if (!scored.rows[i][0]) throw sr::Error("missing score in row " + std::to_string(i + 1));
        scores.push_back(*scored.rows[i][0]);
      }
      std::vector<sr::SurvivalTarget> targets;
      if (!eval_f.data.empty()) {
        targets = sr::load_csv(eval_f.data, schema).targets();
      } else if (scored.targets) {
        targets = *scored.targets;
      } else {
        throw sr::Error("no targets: pass --data or a scores file with time and event columns");
      }
      const auto counts_ = sr::concordance_counts(scores, targets);
      const double ci = counts_.index();
      with_output(eval_f.out, [&](std::ostream& os) {
        if (eval_f.format == "json") {
          os << "{\"ci\": " << sr::format_number(ci) << ", \"concordant\": " << counts_.concordant
             << ", \"discordant\": " << counts_.discordant << ", \"ties\": " << counts_.ties
             << ", \"comparable\": " << counts_.comparable() << "}\n";
        } else {
          os << "ci,concordant,discordant,ties,comparable\n"
             << sr::format_number(ci) << ',' << counts_.concordant << ',' << counts_.discordant << ','
             << counts_.ties << ',' << counts_.comparable() << '\n';
        }
      });
    } else if (*splits_cmd) {
      const Stopwatch clock;
      const auto data = sr::load_csv(splits_f.data, schema_of(splits_f));
      split_plan.seed = splits_f.seed;
      const auto result = sr::run_random_splits(data, split_plan, experiment_options(splits_f));
      emit(result, splits_f);
      std::cerr << "mean CI " << sr::format_number(result.mean_ci) << " over " << result.per_run_ci.size()
                << " splits; mean surviving features " << sr::format_number(result.surviving_features_mean)
                << "; redraws " << result.redraws << "; " << sr::format_number(clock.seconds()) << " s\n";
    } else if (*size_cmd) {
      const Stopwatch clock;
      const auto data = sr::load_csv(size_f.data, schema_of(size_f));
      size_plan.sizes = parse_counts(sizes);
      size_plan.seed = size_f.seed;
      const auto table = sr::run_size_sweep(data, size_plan, experiment_options(size_f));
      emit(table, size_f);
      std::cerr << "size sweep done; redraws " << table.redraws << "; " << sr::format_number(clock.seconds())
                << " s\n";
    } else if (*dim_cmd) {
      const Stopwatch clock;
      dim_cfg.seed = dim_f.seed;
      const auto ms = parse_counts(counts);
      const auto table = sr::run_dimensionality_sweep(dim_cfg, ms, replicates, experiment_options(dim_f));
      emit(table, dim_f);
      std::cerr << "dimensionality sweep done; redraws " << table.redraws << "; "
                << sr::format_number(clock.seconds()) << " s\n";
    } else if (*gen_cmd) {
      const auto data = sr::generate(gen_cfg);
      with_output(gen_f.out, [&](std::ostream& os) { sr::write_csv(data, os); });
    }
  } catch (const sr::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
