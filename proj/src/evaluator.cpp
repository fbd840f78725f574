#include "genre/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include <boost/math/distributions/students_t.hpp>
#include <json.hpp>

#include "genre/decoder.hpp"
#include "genre/tokenize.hpp"

namespace genre {

namespace {

std::string norm(const std::vector<std::string>& tokens) {
  return to_lower(join_tokens(tokens));
}

bool triples_match(const Triple& a, const Triple& b) {
  return norm(a.head) == norm(b.head) && to_lower(a.relation) == to_lower(b.relation) &&
         norm(a.tail) == norm(b.tail);
}

Prf finish_prf(size_t correct, size_t predicted, size_t gold, size_t abstained) {
  Prf prf;
  prf.correct = correct;
  prf.predicted = predicted;
  prf.gold = gold;
  prf.abstained = abstained;
  prf.precision = predicted ? static_cast<double>(correct) / static_cast<double>(predicted) : 0.0;
  prf.recall = gold ? static_cast<double>(correct) / static_cast<double>(gold) : 0.0;
  prf.f1 = (prf.precision + prf.recall) > 0.0
               ? 2.0 * prf.precision * prf.recall / (prf.precision + prf.recall)
               : 0.0;
  return prf;
}

}  // namespace

Prf micro_prf(const std::vector<Prediction>& predictions,
              const std::unordered_map<std::string, Triple>& golds) {
  std::unordered_set<std::string> seen;
  size_t correct = 0, predicted = 0, abstained = 0;
  for (const auto& p : predictions) {
    if (!seen.insert(p.source_id).second) {
      throw std::runtime_error("duplicate source_id in predictions: " + p.source_id);
    }
    if (!p.triple) {
      ++abstained;
      continue;
    }
    ++predicted;
    auto it = golds.find(p.source_id);
    if (it != golds.end() && triples_match(*p.triple, it->second)) ++correct;
  }
  return finish_prf(correct, predicted, golds.size(), abstained);
}

std::vector<RelationRow> per_relation_report(
    const std::vector<Prediction>& predictions,
    const std::unordered_map<std::string, Triple>& golds, size_t top_k) {
  std::unordered_map<std::string, const Prediction*> pred_by_id;
  for (const auto& p : predictions) {
    if (!pred_by_id.emplace(p.source_id, &p).second) {
      throw std::runtime_error("duplicate source_id in predictions: " + p.source_id);
    }
  }
  struct Agg {
    size_t n = 0, correct = 0, predicted_here = 0, abstained = 0;
    std::map<std::string, size_t> pred_relations, gold_tails, pred_tails;
  };
  std::map<std::string, Agg> by_relation;
  // Gold-side pass.
  for (const auto& [id, gold] : golds) {
    Agg& agg = by_relation[gold.relation];
    agg.n++;
    agg.gold_tails[norm(gold.tail)]++;
    auto it = pred_by_id.find(id);
    if (it == pred_by_id.end() || !it->second->triple) {
      agg.abstained++;
      continue;
    }
    const Triple& pred = *it->second->triple;
    agg.pred_relations[pred.relation]++;
    agg.pred_tails[norm(pred.tail)]++;
    if (triples_match(pred, gold)) agg.correct++;
  }
  // Precision denominator: predictions whose predicted relation is this row.
  std::map<std::string, size_t> predicted_with_relation;
  for (const auto& p : predictions) {
    if (p.triple) predicted_with_relation[p.triple->relation]++;
  }

  std::vector<RelationRow> rows;
  for (auto& [relation, agg] : by_relation) {
    RelationRow row;
    row.relation = relation;
    row.n = agg.n;
    row.prf = finish_prf(agg.correct, predicted_with_relation[relation], agg.n, agg.abstained);
    auto top = [&](const std::map<std::string, size_t>& m) {
      std::vector<FreqEntry> out;
      for (const auto& [v, c] : m) out.push_back({v, c});
      std::sort(out.begin(), out.end(), [](const FreqEntry& a, const FreqEntry& b) {
        if (a.count != b.count) return a.count > b.count;
        return a.value < b.value;
      });
      if (out.size() > top_k) out.resize(top_k);
      return out;
    };
    row.top_predicted_relations = top(agg.pred_relations);
    row.top_gold_tails = top(agg.gold_tails);
    row.top_predicted_tails = top(agg.pred_tails);
    rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end(),
            [](const RelationRow& a, const RelationRow& b) { return a.n > b.n; });
  return rows;
}

std::string relation_report_to_table(const std::vector<RelationRow>& rows) {
  std::ostringstream os;
  os.precision(1);
  os << std::fixed;
  for (const auto& row : rows) {
    os << row.relation << " (" << row.n << ")\tP " << row.prf.precision * 100 << "\tR "
       << row.prf.recall * 100 << "\tF1 " << row.prf.f1 * 100 << "\n";
    auto dump = [&](const char* name, const std::vector<FreqEntry>& entries) {
      os << "  " << name << ":";
      for (const auto& e : entries) os << " " << e.value << " (" << e.count << ")";
      os << "\n";
    };
    dump("top predicted relations", row.top_predicted_relations);
    dump("top gold tails", row.top_gold_tails);
    dump("top predicted tails", row.top_predicted_tails);
  }
  return os.str();
}

std::vector<double> recall_at_k_curve(const std::vector<CandidateSet>& sets,
                                      const std::unordered_map<std::string, Triple>& golds,
                                      int max_k) {
  std::vector<double> curve;
  for (int k = 1; k <= max_k; ++k) curve.push_back(max_possible_recall(sets, golds, k));
  return curve;
}

double significance(const std::vector<double>& runs_a, const std::vector<double>& runs_b) {
  if (runs_a.size() < 2 || runs_b.size() < 2) {
    throw std::invalid_argument("insufficient-runs: need at least 2 runs per side");
  }
  auto mean_var = [](const std::vector<double>& xs) {
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= static_cast<double>(xs.size() - 1);
    return std::pair{mean, var};
  };
  auto [ma, va] = mean_var(runs_a);
  auto [mb, vb] = mean_var(runs_b);
  const double na = static_cast<double>(runs_a.size());
  const double nb = static_cast<double>(runs_b.size());
  const double se2 = va / na + vb / nb;
  if (se2 == 0.0) return ma == mb ? 1.0 : 0.0;
  const double t = (ma - mb) / std::sqrt(se2);
  // Welch-Satterthwaite degrees of freedom.
  const double df = se2 * se2 / ((va / na) * (va / na) / (na - 1.0) +
                                 (vb / nb) * (vb / nb) / (nb - 1.0));
  boost::math::students_t dist(df);
  return 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
}

void write_predictions(const std::string& path, const std::vector<Prediction>& predictions) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write predictions: " + path);
  for (const auto& p : predictions) {
    nlohmann::json j;
    j["source_id"] = p.source_id;
    if (p.triple) {
      j["head"] = join_tokens(p.triple->head);
      j["relation"] = p.triple->relation;
      j["tail"] = join_tokens(p.triple->tail);
    } else {
      j["abstain"] = true;
    }
    j["rerank_score"] = p.rerank_score;
    j["generator_score"] = p.generator_score;
    out << j.dump() << "\n";
  }
}

std::vector<Prediction> read_predictions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read predictions: " + path);
  std::vector<Prediction> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line);
    Prediction p;
    p.source_id = j.at("source_id").get<std::string>();
    if (!j.value("abstain", false)) {
      Triple t;
      t.head = tokenize(j.at("head").get<std::string>());
      t.relation = j.at("relation").get<std::string>();
      t.tail = tokenize(j.at("tail").get<std::string>());
      p.triple = std::move(t);
    }
    p.rerank_score = j.value("rerank_score", 0.0);
    p.generator_score = j.value("generator_score", 0.0);
    out.push_back(std::move(p));
  }
  return out;
}

std::string prf_to_string(const Prf& prf) {
  std::ostringstream os;
  os.precision(1);
  os << std::fixed << "P " << prf.precision * 100 << "  R " << prf.recall * 100 << "  F1 "
     << prf.f1 * 100 << "  (correct " << prf.correct << ", predicted " << prf.predicted
     << ", gold " << prf.gold << ", abstained " << prf.abstained << ")";
  return os.str();
}

}  // namespace genre
