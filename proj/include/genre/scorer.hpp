#pragma once

#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "genre/sample.hpp"

namespace genre {

class Vocabulary {
 public:
  // id 0 is reserved for <unk>.
  Vocabulary();

  int add(const std::string& token);           // idempotent
  int id_of(const std::string& token) const;   // unk id when absent
  bool contains(const std::string& token) const;
  const std::string& token_of(int id) const;
  int size() const { return static_cast<int>(tokens_.size()); }
  int unk_id() const { return 0; }

  std::vector<int> encode(const std::vector<std::string>& tokens) const;
  std::vector<std::string> decode(const std::vector<int>& ids) const;

  void save(const std::string& path) const;
  static Vocabulary load(const std::string& path);

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
};

// The generator-side contract the constrained decoder consumes: a
// probability distribution over the vocabulary for the next token given a
// token context. Deterministic for a fixed handle and context.
class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual const Vocabulary& vocab() const = 0;
  virtual int context_limit() const = 0;
  // Throws std::length_error when the context exceeds the window limit.
  virtual std::vector<double> next_token_scores(std::span<const int> context) const = 0;
};

struct TrainConfig {
  double learning_rate = 7.5e-4;  // 2.5e-3 for the inference task
  int max_epochs = 8;
  int warmup_steps = 100;
  int batch_size = 16;
  unsigned seed = 40;
  double validate_every_epochs = 0.25;
  Task task = Task::Extraction;
  // Validation criterion for generator training: end-task dev F1 of a free
  // decode (default) or plain LM loss.
  bool validate_by_f1 = true;

  static TrainConfig defaults_for(Task task);
};

// Count-based scorer over sentence [sep] flattened-triple [eos] training
// sequences. Interpolates three count tables: bigram statistics, a copy
// bias toward tokens already in the context, and sentence-word to
// target-token co-occurrence counts (so relation and tail choices can
// depend on the sentence). Fully deterministic and cheap enough for
// desk-scale runs.
class CountScorer : public Scorer {
 public:
  CountScorer(Vocabulary vocab, int context_limit = 1024, double smoothing = 0.05,
              double copy_weight = 0.2, double assoc_weight = 0.35);

  const Vocabulary& vocab() const override { return vocab_; }
  int context_limit() const override { return context_limit_; }
  std::vector<double> next_token_scores(std::span<const int> context) const override;

  // Updates bigram counts over context+target and co-occurrence counts
  // between unique context tokens and the target's relation/tail payload
  // (non-control tokens from the relation marker onward; the whole target
  // when no relation marker is present).
  void observe_pair(const std::vector<int>& context_ids, const std::vector<int>& target_ids);

  void save(const std::string& dir) const;  // vocab + counts + config
  static CountScorer load(const std::string& dir);

 private:
  Vocabulary vocab_;
  int context_limit_;
  double smoothing_;
  double copy_weight_;
  double assoc_weight_;
  // bigram_[prev][next] = count; flat maps keyed by prev id.
  std::vector<std::unordered_map<int, double>> bigram_;
  std::vector<double> bigram_total_;
  // assoc_[context_word][target_token] = count.
  std::vector<std::unordered_map<int, double>> assoc_;
  std::vector<double> assoc_total_;
};

// Builds the training sequence for one sample:
// context = sentence tokens, target = [sep]-prefixed flattened gold triple
// terminated by [eos]. The loss mask covers only the target span.
struct TrainingSequence {
  std::vector<std::string> context;
  std::vector<std::string> target;  // starts after [sep]; ends with [eos]
  std::vector<int> loss_mask;       // over context+target, 1 on target positions
};

TrainingSequence build_training_sequence(const Sample& sample,
                                         const RelationRegistry& registry);

// Fits a CountScorer on the training split. The dev split drives the
// recorded validation metric; counts are unaffected by it.
CountScorer train_generator(const TrainConfig& config, const std::vector<Sample>& train,
                            const std::vector<Sample>& dev, const RelationRegistry& registry);

// Vocabulary over a sample set plus control, relation, separator and eos
// tokens (all atomic entries).
Vocabulary build_vocabulary(const std::vector<Sample>& samples,
                            const RelationRegistry& registry);

}  // namespace genre
