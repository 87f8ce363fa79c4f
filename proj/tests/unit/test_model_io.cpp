#include <doctest.h>

#include <cstring>
#include <filesystem>

#include <json.hpp>

#include "smoothrank/error.hpp"
#include "smoothrank/model_io.hpp"

using namespace smoothrank;

namespace {

const SmoothRankModel& pbc_model() {
  static const auto model = train(load_csv(std::filesystem::path(SMOOTHRANK_DATA_DIR) / "pbc.csv"));
  return model;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("round trip reproduces scores bit for bit") {
  const auto& model = pbc_model();
  const auto text = model_to_json(model);
  const auto back = model_from_json(text);
  CHECK(model_to_json(back) == text);
  CHECK(back.feature_names == model.feature_names);
  CHECK(back.threshold.threshold == model.threshold.threshold);
  CHECK(back.warnings == model.warnings);

  const auto data = load_csv(std::filesystem::path(SMOOTHRANK_DATA_DIR) / "pbc.csv");
  const auto a = score_all(model, data);
  const auto b = score_all(back, data);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(same_bits(a[i], b[i]));

  for (std::size_t f = 0; f < model.feature_count(); ++f) {
    const auto& p = model.predictors[f];
    const auto& q = back.predictors[f];
    CHECK(p.status == q.status);
    CHECK(same_bits(p.weight, q.weight));
    CHECK(p.q_raw == q.q_raw);
    CHECK(p.grid == q.grid);
  }
}

TEST_CASE("file round trip") {
  const auto path = std::filesystem::temp_directory_path() / "smoothrank_model_io_test.json";
  save_model(pbc_model(), path);
  CHECK(model_to_json(load_model(path)) == model_to_json(pbc_model()));
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_model(path), Error);
  CHECK_THROWS_AS(save_model(pbc_model(), "/nonexistent-dir/model.json"), Error);
}

TEST_CASE("malformed documents") {
  const auto good = nlohmann::json::parse(model_to_json(pbc_model()));
  CHECK_THROWS_AS(model_from_json("{"), Error);
  CHECK_THROWS_AS(model_from_json("[]"), Error);

  auto j = good;
  j["format"] = "other";
  CHECK_THROWS_AS(model_from_json(j.dump()), Error);

  j = good;
  j["version"] = 99;
  CHECK_THROWS_AS(model_from_json(j.dump()), Error);

  j = good;
  j["predictors"].erase(0);
  CHECK_THROWS_AS(model_from_json(j.dump()), Error);

  j = good;
  j["predictors"][0]["status"] = "bogus";
  CHECK_THROWS_AS(model_from_json(j.dump()), Error);

  j = good;
  j["predictors"][0]["q_raw"].erase(0);
  CHECK_THROWS_AS(model_from_json(j.dump()), Error);

  j = good;
  j["predictors"][0].erase("weight");
  CHECK_THROWS_AS(model_from_json(j.dump()), Error);
}
