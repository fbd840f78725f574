#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <random>

#include "genre/decoder.hpp"
#include "genre/evaluator.hpp"
#include "test_util.hpp"

using namespace genre;

namespace {

Prediction predict(const std::string& id, const Triple& t) {
  Prediction p;
  p.source_id = id;
  p.triple = t;
  return p;
}

Prediction abstain(const std::string& id) {
  Prediction p;
  p.source_id = id;
  return p;
}

}  // namespace

TEST_CASE("all-correct predictions score 100 across the board") {
  std::mt19937 rng(41);
  std::unordered_map<std::string, Triple> golds;
  std::vector<Prediction> predictions;
  for (int i = 0; i < 25; ++i) {
    std::string id = "p-" + std::to_string(i);
    Triple t = testutil::random_triple(rng);
    golds.emplace(id, t);
    predictions.push_back(predict(id, t));
  }
  Prf prf = micro_prf(predictions, golds);
  CHECK(prf.precision == doctest::Approx(1.0));
  CHECK(prf.recall == doctest::Approx(1.0));
  CHECK(prf.f1 == doctest::Approx(1.0));
  CHECK(prf.correct == 25);
  CHECK(prf.abstained == 0);
}

TEST_CASE("abstentions leave precision but count against recall") {
  // 10 golds: 3 correct, 5 wrong, 2 abstained.
  std::mt19937 rng(43);
  std::unordered_map<std::string, Triple> golds;
  std::vector<Prediction> predictions;
  for (int i = 0; i < 10; ++i) {
    std::string id = "q-" + std::to_string(i);
    Triple gold = testutil::random_triple(rng);
    golds.emplace(id, gold);
    if (i < 3) {
      predictions.push_back(predict(id, gold));
    } else if (i < 8) {
      Triple wrong = gold;
      wrong.tail.push_back("definitely_wrong");
      predictions.push_back(predict(id, wrong));
    } else {
      predictions.push_back(abstain(id));
    }
  }
  Prf prf = micro_prf(predictions, golds);
  CHECK(prf.predicted == 8);
  CHECK(prf.abstained == 2);
  CHECK(prf.precision == doctest::Approx(3.0 / 8.0));
  CHECK(prf.recall == doctest::Approx(3.0 / 10.0));
  const double p = 3.0 / 8.0, r = 3.0 / 10.0;
  CHECK(prf.f1 == doctest::Approx(2.0 * p * r / (p + r)));
}

TEST_CASE("duplicate prediction ids are rejected") {
  std::unordered_map<std::string, Triple> golds{
      {"d", Triple{{"i"}, "[have_pet]", {"dog"}}}};
  std::vector<Prediction> predictions = {predict("d", golds.at("d")),
                                         predict("d", golds.at("d"))};
  CHECK_THROWS_AS(micro_prf(predictions, golds), std::runtime_error);
}

TEST_CASE("micro prf equals a naive counting oracle on random instances") {
  std::mt19937 rng(47);
  std::uniform_int_distribution<int> n_gold(1, 12), kind(0, 2);
  for (int instance = 0; instance < 200; ++instance) {
    std::unordered_map<std::string, Triple> golds;
    std::vector<Prediction> predictions;
    int n = n_gold(rng);
    for (int i = 0; i < n; ++i) {
      std::string id = "i" + std::to_string(instance) + "-" + std::to_string(i);
      Triple gold = testutil::random_triple(rng);
      golds.emplace(id, gold);
      switch (kind(rng)) {
        case 0:
          predictions.push_back(predict(id, gold));
          break;
        case 1:
          predictions.push_back(predict(id, testutil::random_triple(rng)));
          break;
        default:
          predictions.push_back(abstain(id));
      }
    }
    // Naive loop oracle.
    size_t correct = 0, predicted = 0, abstained = 0;
    for (const auto& p : predictions) {
      if (!p.triple) {
        ++abstained;
        continue;
      }
      ++predicted;
      if (*p.triple == golds.at(p.source_id)) ++correct;
    }
    double op = predicted ? static_cast<double>(correct) / static_cast<double>(predicted) : 0.0;
    double orr = static_cast<double>(correct) / static_cast<double>(golds.size());
    double of = (op + orr) > 0.0 ? 2.0 * op * orr / (op + orr) : 0.0;

    Prf prf = micro_prf(predictions, golds);
    CHECK(prf.correct == correct);
    CHECK(prf.predicted == predicted);
    CHECK(prf.abstained == abstained);
    CHECK(prf.precision == op);
    CHECK(prf.recall == orr);
    CHECK(prf.f1 == of);
  }
}

TEST_CASE("per-relation rows reconcile with the overall counts") {
  std::mt19937 rng(53);
  std::unordered_map<std::string, Triple> golds;
  std::vector<Prediction> predictions;
  for (int i = 0; i < 80; ++i) {
    std::string id = "pr-" + std::to_string(i);
    Triple gold = testutil::random_triple(rng);
    golds.emplace(id, gold);
    if (i % 3 == 0) {
      predictions.push_back(predict(id, gold));
    } else if (i % 3 == 1) {
      predictions.push_back(predict(id, testutil::random_triple(rng)));
    } else {
      predictions.push_back(abstain(id));
    }
  }
  Prf overall = micro_prf(predictions, golds);
  auto rows = per_relation_report(predictions, golds);
  size_t n_sum = 0, correct_sum = 0;
  for (const auto& row : rows) {
    n_sum += row.n;
    correct_sum += row.prf.correct;
    CHECK(row.prf.recall <= 1.0);
    for (const auto& entry : row.top_gold_tails) CHECK(entry.count >= 1);
  }
  CHECK(n_sum == golds.size());
  CHECK(correct_sum == overall.correct);
  CHECK(relation_report_to_table(rows).find("\t") != std::string::npos);
}

TEST_CASE("recall curve equals max_possible_recall at every k") {
  std::mt19937 rng(59);
  const auto& reg = RelationRegistry::builtin();
  std::unordered_map<std::string, Triple> golds;
  std::vector<CandidateSet> sets;
  std::uniform_int_distribution<int> n_cand(0, 5), coin(0, 3);
  for (int i = 0; i < 40; ++i) {
    std::string id = "rc-" + std::to_string(i);
    Triple gold = testutil::random_triple(rng);
    golds.emplace(id, gold);
    CandidateSet set;
    set.source_id = id;
    for (int rank = 0, n = n_cand(rng); rank < n; ++rank) {
      Triple t = coin(rng) == 0 ? gold : testutil::random_triple(rng);
      Candidate c;
      c.tokens = flatten(t, reg).tokens;
      c.parsed = t;
      c.rank = rank;
      set.candidates.push_back(c);
    }
    sets.push_back(set);
  }
  auto curve = recall_at_k_curve(sets, golds, 6);
  REQUIRE(curve.size() == 6);
  for (int k = 1; k <= 6; ++k) {
    CHECK(curve[static_cast<size_t>(k - 1)] ==
          doctest::Approx(max_possible_recall(sets, golds, k)));
  }
}

TEST_CASE("significance behaves like a two-tailed welch test") {
  // Identical runs are maximally insignificant.
  CHECK(significance({59.0, 59.0, 59.0}, {59.0, 59.0, 59.0}) == doctest::Approx(1.0));
  // Clearly separated seed runs are significant at the 5% level.
  std::vector<double> a = {59.0, 59.2, 59.4, 59.1, 59.3};
  std::vector<double> b = {55.1, 55.4, 55.2, 55.6, 55.2};
  double p = significance(a, b);
  CHECK(p < 0.05);
  CHECK(p > 0.0);
  CHECK(significance(a, b) == doctest::Approx(significance(b, a)));
  // Overlapping noisy runs are not significant.
  CHECK(significance({50.0, 55.0, 45.0}, {51.0, 46.0, 56.0}) > 0.05);
  // Fewer than two runs per side is a usage error.
  CHECK_THROWS_AS(significance({59.0}, b), std::invalid_argument);
  CHECK_THROWS_AS(significance(a, {}), std::invalid_argument);
}

TEST_CASE("prediction files roundtrip including abstentions") {
  std::vector<Prediction> predictions;
  Prediction p1 = predict("f1", Triple{{"i"}, "[have_pet]", {"two", "dogs"}});
  p1.rerank_score = 0.75;
  p1.generator_score = -2.5;
  predictions.push_back(p1);
  predictions.push_back(abstain("f2"));
  auto path = std::filesystem::temp_directory_path() / "genre_predictions_test.jsonl";
  write_predictions(path.string(), predictions);
  auto back = read_predictions(path.string());
  REQUIRE(back.size() == 2);
  CHECK(back[0].source_id == "f1");
  REQUIRE(back[0].triple.has_value());
  CHECK(*back[0].triple == *p1.triple);
  CHECK(back[0].rerank_score == doctest::Approx(0.75));
  CHECK(back[0].generator_score == doctest::Approx(-2.5));
  CHECK(back[1].source_id == "f2");
  CHECK_FALSE(back[1].triple.has_value());
  CHECK(prf_to_string(Prf{}).size() > 0);
}
