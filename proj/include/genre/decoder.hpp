#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "genre/sample.hpp"
#include "genre/scorer.hpp"

namespace genre {

struct DecodeConfig {
  Task mode = Task::Extraction;
  int top_l = 10;       // candidates kept per sentence
  int beam_width = 10;  // beam size
  int max_length = 32;  // generated tokens after [sep]
  bool strict_span_tails = false;  // contiguous-span tail mask variant
  bool length_normalize = false;   // rank by score / length instead of sum
  bool constrained = true;         // false = free decode (ablation)
};

// Trie over tokenized tail entities observed per relation in training data;
// the inference-mode tail mask.
class RelationTailIndex {
 public:
  void insert(const std::string& relation, const std::vector<std::string>& tail_tokens);

  bool has_pair(const std::string& relation, const std::vector<std::string>& tail_tokens) const;

  // Tokens that extend `prefix` along some stored tail under `relation`.
  std::vector<std::string> continuations(const std::string& relation,
                                         const std::vector<std::string>& prefix) const;
  // True when `prefix` is itself a complete stored tail.
  bool is_complete(const std::string& relation, const std::vector<std::string>& prefix) const;

  bool empty() const { return roots_.empty(); }
  size_t relation_count() const { return roots_.size(); }

  // Fraction of samples whose gold tail is stored under its gold relation:
  // the recall ceiling the mask imposes.
  double max_recall_on(const std::vector<Sample>& eval_samples) const;

  void save(const std::string& path) const;  // relation<TAB>tail per line
  static RelationTailIndex load(const std::string& path);

 private:
  struct Node {
    std::map<std::string, std::unique_ptr<Node>> children;
    bool terminal = false;
  };
  std::map<std::string, Node> roots_;

  const Node* walk(const std::string& relation,
                   const std::vector<std::string>& prefix) const;
};

RelationTailIndex build_relation_tail_index(const std::vector<Sample>& train_samples);

struct Candidate {
  std::vector<std::string> tokens;      // flattened sequence, no [sep]/[eos]
  double score = 0.0;                   // sum of per-token log-probs
  std::optional<Triple> parsed;         // nullopt = malformed
  int rank = 0;                         // 0-based, by score
};

struct CandidateSet {
  std::string source_id;
  std::vector<Candidate> candidates;  // sorted best-first
};

// Grammar position within the flattened format during decoding.
enum class DecodePhase { AtStart, InHead, AtRelation, AfterRelation, InTail, Done };

struct DecodeState {
  DecodePhase phase = DecodePhase::AtStart;
  int field_tokens = 0;                  // tokens emitted in the current field
  std::string relation;                  // set once the relation token is emitted
  std::vector<std::string> tail_prefix;  // emitted tail tokens
};

// The set of vocabulary ids the grammar allows next. Throws
// std::logic_error on a Done state.
std::vector<int> allowed_tokens(const DecodeState& state, const DecodeConfig& config,
                                const std::vector<std::string>& sentence_tokens,
                                const RelationTailIndex& index, const Vocabulary& vocab,
                                const RelationRegistry& registry);

// Grammar-constrained beam search. Returns at most top_l complete
// candidates, best-first; empty set = no valid candidate.
CandidateSet beam_decode(const Scorer& scorer, const std::string& source_id,
                         const std::vector<std::string>& sentence_tokens,
                         const DecodeConfig& config, const RelationTailIndex& index,
                         const RelationRegistry& registry);

// Fraction of samples whose gold triple appears among the top-k candidates.
double max_possible_recall(const std::vector<CandidateSet>& candidate_sets,
                           const std::unordered_map<std::string, Triple>& golds, int k);

// Line-delimited candidate records:
// {source_id, rank, tokens, generator_score, parsed_ok, head, relation, tail}
void write_candidates(const std::string& path, const std::vector<CandidateSet>& sets);
std::vector<CandidateSet> read_candidates(const std::string& path,
                                          const RelationRegistry& registry);

}  // namespace genre
