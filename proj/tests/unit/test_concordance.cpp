#include <doctest.h>

#include <random>

#include "smoothrank/concordance.hpp"
#include "smoothrank/error.hpp"
#include "support/oracles.hpp"

using namespace smoothrank;

TEST_CASE("comparable pairs follow the strict risk order") {
  using P = std::pair<std::size_t, std::size_t>;
  SUBCASE("two events") {
    const std::vector<SurvivalTarget> t{{1.0, true}, {2.0, true}};
    CHECK(comparable_pairs(t) == std::vector<P>{{0, 1}});
  }
  SUBCASE("censored record cannot come first") {
    const std::vector<SurvivalTarget> t{{2.0, true}, {1.0, false}};
    CHECK(comparable_pairs(t).empty());
  }
  SUBCASE("later censoring is irrelevant") {
    const std::vector<SurvivalTarget> t{{1.0, true}, {2.0, false}};
    CHECK(comparable_pairs(t) == std::vector<P>{{0, 1}});
  }
  SUBCASE("equal times never compare") {
    const std::vector<SurvivalTarget> t{{3.0, true}, {3.0, true}, {3.0, false}};
    CHECK(comparable_pairs(t).empty());
  }
}

TEST_CASE("concordance index examples") {
  const std::vector<SurvivalTarget> t{{1, true}, {2, true}, {3, true}, {4, true}, {5, true}};
  SUBCASE("negated times give perfect risk ordering") {
    const std::vector<double> s{-1, -2, -3, -4, -5};
    CHECK(concordance_index(s, t) == 1.0);
  }
  SUBCASE("constant scores are all ties") {
    CHECK(concordance_index(std::vector<double>(5, 0.3), t) == 0.5);
  }
  SUBCASE("three concordant, one discordant") {
    CHECK(ConcordanceCounts{3, 1, 0}.index() == doctest::Approx(0.75));
    // Comparable: 0->1, 0->2, 0->3, 1->2. Only 1->2 is discordant.
    const std::vector<SurvivalTarget> t4{{1, true}, {2, true}, {3, false}, {2, false}};
    const std::vector<double> s4{5, 1, 2, 0};
    const auto c = concordance_counts(s4, t4);
    CHECK(c.concordant == 3);
    CHECK(c.discordant == 1);
    CHECK(c.ties == 0);
    CHECK(c.index() == 0.75);
  }
  SUBCASE("no comparable pair") {
    const std::vector<SurvivalTarget> censored{{1, false}, {2, false}};
    CHECK_THROWS_AS(concordance_index(std::vector<double>{1, 2}, censored), Error);
  }
  SUBCASE("length mismatch") {
    CHECK_THROWS_AS(concordance_counts(std::vector<double>{1}, t), Error);
  }
}

TEST_CASE("concordance matches brute-force pair counting") {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> size(2, 100);
  std::uniform_int_distribution<int> score_level(0, 7);  // forces score ties
  for (int trial = 0; trial < 300; ++trial) {
    const auto n = static_cast<std::size_t>(size(rng));
    const auto t = oracle::random_targets(rng, n, 12);  // forces time ties
    std::vector<double> s(n);
    for (auto& v : s) v = score_level(rng);
    const auto got = concordance_counts(s, t);
    const auto want = oracle::concordance(s, t);
    REQUIRE(got.concordant == want.concordant);
    REQUIRE(got.discordant == want.discordant);
    REQUIRE(got.ties == want.ties);
    REQUIRE(comparable_pairs(t).size() == got.comparable());
  }
}

TEST_CASE("concordance properties") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> noise;
  for (int trial = 0; trial < 50; ++trial) {
    const auto t = oracle::random_targets(rng, 60, 30);
    std::vector<double> s(t.size()), neg(t.size()), mono(t.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      s[i] = std::round(noise(rng) * 4.0) / 4.0;
      neg[i] = -s[i];
      mono[i] = std::exp(2.0 * s[i]) + 3.0;
    }
    const auto c = concordance_counts(s, t);
    if (c.comparable() == 0) continue;
    // Ties count one half on both sides, so the sum is 1 even with ties.
    CHECK(concordance_index(s, t) + concordance_index(neg, t) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(concordance_index(mono, t) == concordance_index(s, t));
  }
}

TEST_CASE("binary targets: concordance equals AUC") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> noise;
  std::bernoulli_distribution coin(0.4);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 80;
    std::vector<double> s(n);
    std::vector<bool> early(n);
    std::vector<SurvivalTarget> t(n);
    for (std::size_t i = 0; i < n; ++i) {
      early[i] = coin(rng);
      s[i] = std::round((noise(rng) + (early[i] ? 0.7 : 0.0)) * 3.0);
      t[i] = early[i] ? SurvivalTarget{1.0, true} : SurvivalTarget{2.0, false};
    }
    if (std::count(early.begin(), early.end(), true) == 0) continue;
    CHECK(concordance_index(s, t) == doctest::Approx(auc(s, early)).epsilon(1e-14));
  }
}

TEST_CASE("auc") {
  const std::vector<bool> pos{true, true, false, false};
  CHECK(auc(std::vector<double>{4, 3, 2, 1}, pos) == 1.0);
  CHECK(auc(std::vector<double>{1, 2, 3, 4}, pos) == 0.0);
  CHECK(auc(std::vector<double>{1, 1, 1, 1}, pos) == 0.5);
  CHECK_THROWS_AS(auc(std::vector<double>{1, 2}, std::vector<bool>{true, true}), Error);

  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> level(0, 9);
  std::bernoulli_distribution coin(0.5);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> s(50);
    std::vector<bool> p(50);
    for (std::size_t i = 0; i < s.size(); ++i) {
      s[i] = level(rng);
      p[i] = coin(rng);
    }
    const auto n_pos = std::count(p.begin(), p.end(), true);
    if (n_pos == 0 || n_pos == 50) continue;
    CHECK(auc(s, p) == doctest::Approx(oracle::auc(s, p)).epsilon(1e-14));
  }
}
