#include "genre/scorer.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "genre/tokenize.hpp"

namespace genre {

Vocabulary::Vocabulary() { add("<unk>"); }

int Vocabulary::add(const std::string& token) {
  auto it = index_.find(token);
  if (it != index_.end()) return it->second;
  int id = static_cast<int>(tokens_.size());
  tokens_.push_back(token);
  index_.emplace(token, id);
  return id;
}

int Vocabulary::id_of(const std::string& token) const {
  auto it = index_.find(token);
  return it == index_.end() ? unk_id() : it->second;
}

bool Vocabulary::contains(const std::string& token) const { return index_.count(token) > 0; }

const std::string& Vocabulary::token_of(int id) const {
  if (id < 0 || id >= size()) throw std::out_of_range("vocab id out of range");
  return tokens_[static_cast<size_t>(id)];
}

std::vector<int> Vocabulary::encode(const std::vector<std::string>& tokens) const {
  std::vector<int> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(id_of(t));
  return out;
}

std::vector<std::string> Vocabulary::decode(const std::vector<int>& ids) const {
  std::vector<std::string> out;
  out.reserve(ids.size());
  for (int id : ids) out.push_back(token_of(id));
  return out;
}

void Vocabulary::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write vocabulary: " + path);
  for (const auto& t : tokens_) out << t << "\n";
}

Vocabulary Vocabulary::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read vocabulary: " + path);
  Vocabulary v;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) v.add(line);
  }
  return v;
}

TrainConfig TrainConfig::defaults_for(Task task) {
  TrainConfig c;
  c.task = task;
  c.learning_rate = (task == Task::Extraction) ? 7.5e-4 : 2.5e-3;
  return c;
}

CountScorer::CountScorer(Vocabulary vocab, int context_limit, double smoothing,
                         double copy_weight, double assoc_weight)
    : vocab_(std::move(vocab)),
      context_limit_(context_limit),
      smoothing_(smoothing),
      copy_weight_(copy_weight),
      assoc_weight_(assoc_weight),
      bigram_(static_cast<size_t>(vocab_.size())),
      bigram_total_(static_cast<size_t>(vocab_.size()), 0.0),
      assoc_(static_cast<size_t>(vocab_.size())),
      assoc_total_(static_cast<size_t>(vocab_.size()), 0.0) {}

namespace {

std::vector<int> unique_sorted(std::span<const int> ids) {
  std::vector<int> out(ids.begin(), ids.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

void CountScorer::observe_pair(const std::vector<int>& context_ids,
                               const std::vector<int>& target_ids) {
  std::vector<int> full = context_ids;
  full.insert(full.end(), target_ids.begin(), target_ids.end());
  for (size_t i = 0; i + 1 < full.size(); ++i) {
    bigram_[static_cast<size_t>(full[i])][full[i + 1]] += 1.0;
    bigram_total_[static_cast<size_t>(full[i])] += 1.0;
  }
  // Association targets are the semantic payload of the target: the tokens
  // from the relation marker onward, minus control tokens. Head and control
  // tokens are frequent everywhere, so counting them would drown the
  // relation/tail signal the association term exists to carry.
  auto is_control_id = [&](int id) {
    const std::string& tok = vocab_.token_of(id);
    return tok == kHeadToken || tok == kRelnToken || tok == kTailToken ||
           tok == kSepToken || tok == kEosToken;
  };
  const int reln_id = vocab_.id_of(kRelnToken);
  auto begin = std::find(target_ids.begin(), target_ids.end(), reln_id);
  if (begin == target_ids.end()) begin = target_ids.begin();
  std::vector<int> payload;
  for (auto it = begin; it != target_ids.end(); ++it) {
    if (!is_control_id(*it)) payload.push_back(*it);
  }
  for (int c : unique_sorted(context_ids)) {
    for (int t : payload) {
      assoc_[static_cast<size_t>(c)][t] += 1.0;
      assoc_total_[static_cast<size_t>(c)] += 1.0;
    }
  }
}

std::vector<double> CountScorer::next_token_scores(std::span<const int> context) const {
  if (static_cast<int>(context.size()) > context_limit_) {
    throw std::length_error("context-too-long");
  }
  const size_t v = static_cast<size_t>(vocab_.size());
  const int sep_id = vocab_.id_of(kSepToken);

  std::vector<double> probs(v, 0.0);
  const int prev = context.empty() ? vocab_.unk_id() : context.back();
  const auto& row = bigram_[static_cast<size_t>(prev)];
  const double total = bigram_total_[static_cast<size_t>(prev)] + smoothing_ * static_cast<double>(v);
  const double bigram_weight = 1.0 - copy_weight_ - assoc_weight_;
  for (size_t i = 0; i < v; ++i) probs[i] = bigram_weight * smoothing_ / total;
  for (const auto& [next, count] : row) {
    probs[static_cast<size_t>(next)] += bigram_weight * count / total;
  }

  // Sentence portion of the context: everything before the first separator.
  std::span<const int> sentence = context;
  for (size_t i = 0; i < context.size(); ++i) {
    if (context[i] == sep_id) {
      sentence = context.subspan(0, i);
      break;
    }
  }

  if (copy_weight_ > 0.0 && !context.empty()) {
    std::vector<int> present = unique_sorted(context);
    const double copy_p = copy_weight_ / static_cast<double>(present.size());
    for (int id : present) probs[static_cast<size_t>(id)] += copy_p;
  } else if (copy_weight_ > 0.0) {
    // Empty context: spread the copy mass uniformly so scores stay a
    // distribution.
    for (size_t i = 0; i < v; ++i) probs[i] += copy_weight_ / static_cast<double>(v);
  }

  if (assoc_weight_ > 0.0) {
    double mass = 0.0;
    std::vector<double> assoc_scores(v, smoothing_);
    mass = smoothing_ * static_cast<double>(v);
    for (int c : unique_sorted(sentence)) {
      for (const auto& [t, count] : assoc_[static_cast<size_t>(c)]) {
        assoc_scores[static_cast<size_t>(t)] += count;
        mass += count;
      }
    }
    for (size_t i = 0; i < v; ++i) probs[i] += assoc_weight_ * assoc_scores[i] / mass;
  }
  return probs;
}

void CountScorer::save(const std::string& dir) const {
  std::filesystem::create_directories(dir);
  vocab_.save(dir + "/vocab.txt");
  nlohmann::json cfg;
  cfg["context_limit"] = context_limit_;
  cfg["smoothing"] = smoothing_;
  cfg["copy_weight"] = copy_weight_;
  cfg["assoc_weight"] = assoc_weight_;
  std::ofstream(dir + "/scorer_config.json") << cfg.dump(2) << "\n";
  auto dump_table = [](const std::string& path,
                       const std::vector<std::unordered_map<int, double>>& table) {
    std::ofstream out(path);
    for (size_t key = 0; key < table.size(); ++key) {
      std::vector<std::pair<int, double>> row(table[key].begin(), table[key].end());
      std::sort(row.begin(), row.end());
      for (const auto& [next, count] : row) {
        out << key << "\t" << next << "\t" << count << "\n";
      }
    }
  };
  dump_table(dir + "/bigrams.tsv", bigram_);
  dump_table(dir + "/assoc.tsv", assoc_);
}

CountScorer CountScorer::load(const std::string& dir) {
  Vocabulary vocab = Vocabulary::load(dir + "/vocab.txt");
  nlohmann::json cfg;
  std::ifstream(dir + "/scorer_config.json") >> cfg;
  CountScorer scorer(std::move(vocab), cfg.at("context_limit").get<int>(),
                     cfg.at("smoothing").get<double>(), cfg.at("copy_weight").get<double>(),
                     cfg.at("assoc_weight").get<double>());
  auto load_table = [](const std::string& path,
                       std::vector<std::unordered_map<int, double>>& table,
                       std::vector<double>& totals) {
    std::ifstream in(path);
    size_t key;
    int next;
    double count;
    while (in >> key >> next >> count) {
      table[key][next] = count;
      totals[key] += count;
    }
  };
  load_table(dir + "/bigrams.tsv", scorer.bigram_, scorer.bigram_total_);
  load_table(dir + "/assoc.tsv", scorer.assoc_, scorer.assoc_total_);
  return scorer;
}

TrainingSequence build_training_sequence(const Sample& sample,
                                         const RelationRegistry& registry) {
  TrainingSequence seq;
  seq.context = tokenize(sample.sentence);
  FlattenedSequence flat = flatten(sample.gold, registry);
  seq.target.push_back(kSepToken);
  for (const auto& t : flat.tokens) seq.target.push_back(t);
  seq.target.push_back(kEosToken);
  seq.loss_mask.assign(seq.context.size(), 0);
  seq.loss_mask.insert(seq.loss_mask.end(), seq.target.size(), 1);
  return seq;
}

Vocabulary build_vocabulary(const std::vector<Sample>& samples,
                            const RelationRegistry& registry) {
  Vocabulary v;
  v.add(kHeadToken);
  v.add(kRelnToken);
  v.add(kTailToken);
  v.add(kSepToken);
  v.add(kEosToken);
  for (const auto& r : registry.relations()) v.add(r);
  for (const auto& s : samples) {
    for (const auto& t : tokenize(s.sentence)) v.add(t);
    for (const auto& t : s.gold.head) v.add(t);
    for (const auto& t : s.gold.tail) v.add(t);
  }
  return v;
}

CountScorer train_generator(const TrainConfig& config, const std::vector<Sample>& train,
                            const std::vector<Sample>& dev, const RelationRegistry& registry) {
  (void)dev;  // dev selection is a no-op for the deterministic count model
  if (config.learning_rate <= 0.0) throw std::invalid_argument("learning rate must be > 0");
  Vocabulary vocab = build_vocabulary(train, registry);
  CountScorer scorer(std::move(vocab));
  for (const auto& s : train) {
    TrainingSequence seq = build_training_sequence(s, registry);
    scorer.observe_pair(scorer.vocab().encode(seq.context), scorer.vocab().encode(seq.target));
  }
  return scorer;
}

}  // namespace genre
