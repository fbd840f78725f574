#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "genre/relation.hpp"
#include "genre/sample.hpp"

namespace genre {

struct RawRecord {
  std::string source_id;
  std::string sentence;
  std::string head_raw;
  std::string relation_raw;
  std::string tail_raw;
  Split split = Split::Train;
};

struct NormalizeResult {
  std::optional<Sample> sample;
  std::string drop_reason;  // non-empty iff sample is nullopt
};

// True iff entity tokens occur as a contiguous subsequence of the sentence
// tokens (token level, lowercased).
bool is_span_contained(const std::vector<std::string>& sentence_tokens,
                       const std::vector<std::string>& entity_tokens);

// Applies the corpus cleanup rules: drop None/<blank> triples, canonicalize
// the relation (drop when merged away), strip leading bare-number prefixes
// from tails, assign the task by span containment of head and tail.
NormalizeResult normalize(const RawRecord& record, const RelationRegistry& registry);

struct Partition {
  std::vector<Sample> extraction;
  std::vector<Sample> inference;
};

Partition partition(const std::vector<Sample>& samples);

struct DatasetStats {
  std::map<std::string, size_t> samples_per_split;
  size_t unique_heads = 0;
  size_t unique_relations = 0;
  size_t unique_tails = 0;
  double avg_head_words = 0.0;
  double avg_relation_words = 1.0;
  double avg_tail_words = 0.0;
  double avg_sentence_words = 0.0;
  // Fraction of samples whose head entity is exactly "i".
  double head_i_share = 0.0;
};

DatasetStats compute_stats(const std::vector<Sample>& dataset);

std::string stats_to_table(const DatasetStats& stats, const std::string& title);
std::string stats_to_json(const DatasetStats& stats);

// Raw corpus ingestion. Accepts either line-delimited JSON or a whole-file
// JSON array. Two record shapes are understood:
//   {source_id?, sentence, head, relation, tail}          (flat)
//   {id?, sentence1, triple1, sentence2, triple2, ...}    (NLI-style pairs;
//     each annotated (sentence, triple) side yields one record)
std::vector<RawRecord> read_raw_corpus(const std::string& path, Split split);

struct BuildReport {
  Partition partition;
  size_t raw_records = 0;
  std::map<std::string, size_t> dropped_by_reason;
};

BuildReport build_dataset(const std::vector<RawRecord>& records,
                          const RelationRegistry& registry);

}  // namespace genre
