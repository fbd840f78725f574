#pragma once

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "genre/sample.hpp"

namespace genre {

struct Prediction {
  std::string source_id;
  std::optional<Triple> triple;  // nullopt = abstention
  double rerank_score = 0.0;
  double generator_score = 0.0;
};

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  size_t correct = 0;
  size_t predicted = 0;  // non-abstained predictions
  size_t gold = 0;
  size_t abstained = 0;
};

// Exact-match micro P/R/F1. Correct = head, relation and tail all match on
// lowercased whitespace-normalized strings. Abstentions leave the precision
// denominator but count against recall. Throws on duplicate source ids.
Prf micro_prf(const std::vector<Prediction>& predictions,
              const std::unordered_map<std::string, Triple>& golds);

struct FreqEntry {
  std::string value;
  size_t count = 0;
};

struct RelationRow {
  std::string relation;
  size_t n = 0;  // gold samples with this relation
  Prf prf;
  std::vector<FreqEntry> top_predicted_relations;
  std::vector<FreqEntry> top_gold_tails;
  std::vector<FreqEntry> top_predicted_tails;
};

std::vector<RelationRow> per_relation_report(
    const std::vector<Prediction>& predictions,
    const std::unordered_map<std::string, Triple>& golds, size_t top_k = 3);

std::string relation_report_to_table(const std::vector<RelationRow>& rows);

// recall@k for k = 1..max_k over a candidate file's rank lists (thin
// wrapper kept here so reports carry the curve).
std::vector<double> recall_at_k_curve(const std::vector<struct CandidateSet>& sets,
                                      const std::unordered_map<std::string, Triple>& golds,
                                      int max_k);

// Two-tailed Welch t-test p-value over per-seed metric lists. Throws
// std::invalid_argument with fewer than two runs per side.
double significance(const std::vector<double>& runs_a, const std::vector<double>& runs_b);

// Prediction file I/O:
// {source_id, head, relation, tail | abstain: true, rerank_score, generator_score}
void write_predictions(const std::string& path, const std::vector<Prediction>& predictions);
std::vector<Prediction> read_predictions(const std::string& path);

std::string prf_to_string(const Prf& prf);

}  // namespace genre
