#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "genre/decoder.hpp"
#include "genre/evaluator.hpp"
#include "genre/reranker.hpp"
#include "genre/sample.hpp"
#include "genre/scorer.hpp"

namespace genre {

std::unordered_map<std::string, Triple> gold_map(const std::vector<Sample>& samples);
std::unordered_map<std::string, Sample> sample_map(const std::vector<Sample>& samples);

// Decodes every sample. Deterministic; parallel-safe per sentence.
std::vector<CandidateSet> decode_all(const Scorer& scorer, const std::vector<Sample>& samples,
                                     const DecodeConfig& config, const RelationTailIndex& index,
                                     const RelationRegistry& registry);

enum class SelectionPolicy {
  Reranked,   // trained reranker picks among well-formed candidates
  TopOne,     // rank-1 candidate (no-reranker ablation)
  Oracle,     // scores equal correctness labels (upper bound)
};

std::vector<Prediction> select_predictions(const std::vector<CandidateSet>& sets,
                                           const std::vector<Sample>& samples,
                                           SelectionPolicy policy,
                                           const Reranker* reranker);

struct AblationRow {
  std::string variant;  // full | no-constraints | no-reranker
  Prf prf;
};

struct AblationInputs {
  const Scorer& scorer;
  const std::vector<Sample>& eval_samples;
  const RelationTailIndex& index;
  const RelationRegistry& registry;
  DecodeConfig decode;
  const Reranker* reranker = nullptr;  // required for full / no-constraints
};

// Runs the full / no-constraints / no-reranker grid on one task.
std::vector<AblationRow> ablation_run(const AblationInputs& inputs);

std::string ablation_to_table(const std::vector<AblationRow>& rows);

}  // namespace genre
