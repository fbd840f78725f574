#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "genre/decoder.hpp"
#include "genre/sample.hpp"

namespace genre {

struct RerankExample {
  std::string source_id;
  int rank = 0;
  int label = 0;  // 1 iff candidate triple exactly equals the gold triple
  std::vector<std::string> sentence_tokens;
  std::vector<std::string> candidate_tokens;  // flattened sequence
  double generator_score = 0.0;
};

// One example per candidate; malformed candidates are labeled incorrect.
// Throws std::runtime_error on a candidate set without a gold pairing.
std::vector<RerankExample> build_rerank_dataset(
    const std::vector<CandidateSet>& candidate_sets,
    const std::unordered_map<std::string, Sample>& golds);

struct RerankTrainConfig {
  double learning_rate = 5e-6;
  int max_epochs = 8;
  int warmup_steps = 100;
  int batch_size = 10;
  unsigned seed = 40;
  double validate_every_epochs = 0.25;
  double positive_weight = 1.0;  // >1 reweights the correct class
};

// Binary classifier over (sentence, candidate) pairs: logistic regression
// on hashed features (candidate tokens, sentence x candidate token pairs,
// token-overlap buckets), trained with binary cross-entropy.
class Reranker {
 public:
  explicit Reranker(size_t feature_dim = 1u << 18);

  // Probability that the candidate is the correct triple for the sentence.
  double score(const std::vector<std::string>& sentence_tokens,
               const std::vector<std::string>& candidate_tokens) const;

  // SGD over shuffled examples; throws std::invalid_argument on an empty
  // training set. Dev examples drive the recorded validation accuracy.
  void train(const RerankTrainConfig& config, const std::vector<RerankExample>& examples,
             const std::vector<RerankExample>& dev);

  double accuracy(const std::vector<RerankExample>& examples) const;

  void save(const std::string& path) const;
  static Reranker load(const std::string& path);

 private:
  size_t dim_;
  std::vector<float> weights_;
  double bias_ = 0.0;

  std::vector<std::pair<size_t, float>> features(
      const std::vector<std::string>& sentence_tokens,
      const std::vector<std::string>& candidate_tokens) const;
};

struct Selection {
  std::optional<Triple> triple;  // nullopt = abstain
  double rerank_score = 0.0;
  double generator_score = 0.0;
};

// Highest-scoring well-formed candidate; abstains when none parse.
// scores[i] must align with candidate i; ties break by generator score,
// then by rank.
Selection select_best_scored(const CandidateSet& set, const std::vector<double>& scores);

Selection select_best(const CandidateSet& set,
                      const std::vector<std::string>& sentence_tokens,
                      const Reranker& reranker);

// Serialization of rerank examples:
// {source_id, rank, label, sequence} with [sep] between sentence and
// candidate inside `sequence`.
void write_rerank_examples(const std::string& path, const std::vector<RerankExample>& examples);
std::vector<RerankExample> read_rerank_examples(const std::string& path);

}  // namespace genre
