#include "genre/pipeline.hpp"

#include <sstream>
#include <stdexcept>

#include "genre/tokenize.hpp"

namespace genre {

std::unordered_map<std::string, Triple> gold_map(const std::vector<Sample>& samples) {
  std::unordered_map<std::string, Triple> out;
  for (const auto& s : samples) out.emplace(s.source_id, s.gold);
  return out;
}

std::unordered_map<std::string, Sample> sample_map(const std::vector<Sample>& samples) {
  std::unordered_map<std::string, Sample> out;
  for (const auto& s : samples) out.emplace(s.source_id, s);
  return out;
}

std::vector<CandidateSet> decode_all(const Scorer& scorer, const std::vector<Sample>& samples,
                                     const DecodeConfig& config, const RelationTailIndex& index,
                                     const RelationRegistry& registry) {
  std::vector<CandidateSet> sets;
  sets.reserve(samples.size());
  for (const auto& s : samples) {
    sets.push_back(beam_decode(scorer, s.source_id, tokenize(s.sentence), config, index, registry));
  }
  return sets;
}

std::vector<Prediction> select_predictions(const std::vector<CandidateSet>& sets,
                                           const std::vector<Sample>& samples,
                                           SelectionPolicy policy,
                                           const Reranker* reranker) {
  auto by_id = sample_map(samples);
  std::vector<Prediction> predictions;
  predictions.reserve(sets.size());
  for (const auto& set : sets) {
    Prediction p;
    p.source_id = set.source_id;
    auto sample_it = by_id.find(set.source_id);
    Selection sel;
    switch (policy) {
      case SelectionPolicy::TopOne: {
        // Rank-1 candidate is the generator's prediction; a malformed
        // rank-1 means the generator abstains for this sample.
        if (!set.candidates.empty() && set.candidates.front().parsed) {
          sel.triple = set.candidates.front().parsed;
          sel.generator_score = set.candidates.front().score;
        }
        break;
      }
      case SelectionPolicy::Reranked: {
        if (!reranker) throw std::invalid_argument("reranked selection needs a reranker");
        std::vector<std::string> sentence_tokens =
            sample_it != by_id.end() ? tokenize(sample_it->second.sentence)
                                     : std::vector<std::string>{};
        sel = select_best(set, sentence_tokens, *reranker);
        break;
      }
      case SelectionPolicy::Oracle: {
        std::vector<double> scores;
        scores.reserve(set.candidates.size());
        for (const auto& c : set.candidates) {
          bool correct = sample_it != by_id.end() && c.parsed &&
                         *c.parsed == sample_it->second.gold;
          scores.push_back(correct ? 1.0 : 0.0);
        }
        sel = select_best_scored(set, scores);
        break;
      }
    }
    p.triple = sel.triple;
    p.rerank_score = sel.rerank_score;
    p.generator_score = sel.generator_score;
    predictions.push_back(std::move(p));
  }
  // Samples without a candidate set become abstentions so recall accounting
  // still sees them.
  std::unordered_map<std::string, bool> covered;
  for (const auto& set : sets) covered[set.source_id] = true;
  for (const auto& s : samples) {
    if (!covered.count(s.source_id)) {
      predictions.push_back(Prediction{s.source_id, std::nullopt, 0.0, 0.0});
    }
  }
  return predictions;
}

std::vector<AblationRow> ablation_run(const AblationInputs& inputs) {
  auto golds = gold_map(inputs.eval_samples);
  std::vector<AblationRow> rows;

  DecodeConfig constrained = inputs.decode;
  constrained.constrained = true;
  auto constrained_sets = decode_all(inputs.scorer, inputs.eval_samples, constrained,
                                     inputs.index, inputs.registry);

  DecodeConfig free_decode = inputs.decode;
  free_decode.constrained = false;
  auto free_sets = decode_all(inputs.scorer, inputs.eval_samples, free_decode, inputs.index,
                              inputs.registry);

  rows.push_back({"full", micro_prf(select_predictions(constrained_sets, inputs.eval_samples,
                                                       SelectionPolicy::Reranked,
                                                       inputs.reranker),
                                    golds)});
  rows.push_back({"no-constraints",
                  micro_prf(select_predictions(free_sets, inputs.eval_samples,
                                               SelectionPolicy::Reranked, inputs.reranker),
                            golds)});
  rows.push_back({"no-reranker",
                  micro_prf(select_predictions(constrained_sets, inputs.eval_samples,
                                               SelectionPolicy::TopOne, nullptr),
                            golds)});
  return rows;
}

std::string ablation_to_table(const std::vector<AblationRow>& rows) {
  std::ostringstream os;
  for (const auto& row : rows) {
    os << row.variant << "\t" << prf_to_string(row.prf) << "\n";
  }
  return os.str();
}

}  // namespace genre
