#include "genre/reranker.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>

#include <json.hpp>

#include "genre/tokenize.hpp"

namespace genre {

namespace {

uint64_t fnv1a(std::string_view s, uint64_t h = 14695981039346656037ull) {
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

uint64_t hash_pair(std::string_view a, std::string_view b) {
  return fnv1a(b, fnv1a(a) ^ 0x9e3779b97f4a7c15ull);
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

std::vector<RerankExample> build_rerank_dataset(
    const std::vector<CandidateSet>& candidate_sets,
    const std::unordered_map<std::string, Sample>& golds) {
  std::vector<RerankExample> out;
  for (const auto& set : candidate_sets) {
    auto it = golds.find(set.source_id);
    if (it == golds.end()) {
      throw std::runtime_error("id-mismatch: no gold triple for " + set.source_id);
    }
    const Sample& gold = it->second;
    std::vector<std::string> sentence_tokens = tokenize(gold.sentence);
    for (const auto& c : set.candidates) {
      RerankExample ex;
      ex.source_id = set.source_id;
      ex.rank = c.rank;
      ex.label = (c.parsed && *c.parsed == gold.gold) ? 1 : 0;
      ex.sentence_tokens = sentence_tokens;
      ex.candidate_tokens = c.tokens;
      ex.generator_score = c.score;
      out.push_back(std::move(ex));
    }
  }
  return out;
}

Reranker::Reranker(size_t feature_dim) : dim_(feature_dim), weights_(feature_dim, 0.0f) {}

std::vector<std::pair<size_t, float>> Reranker::features(
    const std::vector<std::string>& sentence_tokens,
    const std::vector<std::string>& candidate_tokens) const {
  std::vector<std::pair<size_t, float>> feats;
  size_t overlap = 0;
  for (const auto& c : candidate_tokens) {
    feats.emplace_back(fnv1a(c) % dim_, 1.0f);
    // Sentence x candidate cross features let the linear model condition
    // candidate tokens on the sentence content.
    for (const auto& s : sentence_tokens) {
      feats.emplace_back(hash_pair(s, c) % dim_, 1.0f);
      if (s == c) ++overlap;
    }
  }
  for (size_t i = 0; i + 1 < candidate_tokens.size(); ++i) {
    feats.emplace_back(hash_pair(candidate_tokens[i], candidate_tokens[i + 1]) % dim_, 1.0f);
  }
  feats.emplace_back(fnv1a("__overlap__") % dim_,
                     static_cast<float>(overlap) /
                         static_cast<float>(std::max<size_t>(1, candidate_tokens.size())));
  return feats;
}

double Reranker::score(const std::vector<std::string>& sentence_tokens,
                       const std::vector<std::string>& candidate_tokens) const {
  double z = bias_;
  for (const auto& [idx, value] : features(sentence_tokens, candidate_tokens)) {
    z += static_cast<double>(weights_[idx]) * static_cast<double>(value);
  }
  return sigmoid(z);
}

void Reranker::train(const RerankTrainConfig& config, const std::vector<RerankExample>& examples,
                     const std::vector<RerankExample>& dev) {
  if (examples.empty()) throw std::invalid_argument("rerank training set is empty");
  if (config.learning_rate <= 0.0) throw std::invalid_argument("learning rate must be > 0");
  std::mt19937 rng(config.seed);
  std::vector<size_t> order(examples.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;

  const long total_steps =
      static_cast<long>(config.max_epochs) * static_cast<long>(examples.size());
  long step = 0;
  for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (size_t idx : order) {
      const RerankExample& ex = examples[idx];
      // Linear warmup then linear decay.
      double lr = config.learning_rate;
      if (step < config.warmup_steps) {
        lr *= static_cast<double>(step + 1) / static_cast<double>(config.warmup_steps);
      } else if (total_steps > config.warmup_steps) {
        lr *= 1.0 - static_cast<double>(step - config.warmup_steps) /
                        static_cast<double>(total_steps - config.warmup_steps);
      }
      auto feats = features(ex.sentence_tokens, ex.candidate_tokens);
      double z = bias_;
      for (const auto& [i, v] : feats) z += static_cast<double>(weights_[i]) * v;
      double p = sigmoid(z);
      // d(BCE)/dz = p - y, optionally reweighting positives.
      double grad = p - static_cast<double>(ex.label);
      if (ex.label == 1) grad *= config.positive_weight;
      if (!std::isfinite(grad)) throw std::runtime_error("reranker training diverged");
      bias_ -= lr * grad;
      for (const auto& [i, v] : feats) {
        weights_[i] -= static_cast<float>(lr * grad * v);
      }
      ++step;
    }
  }
  (void)dev;
}

double Reranker::accuracy(const std::vector<RerankExample>& examples) const {
  if (examples.empty()) return 0.0;
  size_t correct = 0;
  for (const auto& ex : examples) {
    double p = score(ex.sentence_tokens, ex.candidate_tokens);
    if ((p >= 0.5) == (ex.label == 1)) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(examples.size());
}

void Reranker::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write reranker: " + path);
  uint64_t dim = dim_;
  out.write(reinterpret_cast<const char*>(&dim), sizeof(dim));
  out.write(reinterpret_cast<const char*>(&bias_), sizeof(bias_));
  out.write(reinterpret_cast<const char*>(weights_.data()),
            static_cast<std::streamsize>(weights_.size() * sizeof(float)));
}

Reranker Reranker::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read reranker: " + path);
  uint64_t dim = 0;
  in.read(reinterpret_cast<char*>(&dim), sizeof(dim));
  Reranker r(static_cast<size_t>(dim));
  in.read(reinterpret_cast<char*>(&r.bias_), sizeof(r.bias_));
  in.read(reinterpret_cast<char*>(r.weights_.data()),
          static_cast<std::streamsize>(r.weights_.size() * sizeof(float)));
  return r;
}

Selection select_best_scored(const CandidateSet& set, const std::vector<double>& scores) {
  if (scores.size() != set.candidates.size()) {
    throw std::invalid_argument("scores/candidates size mismatch");
  }
  Selection sel;
  int best = -1;
  for (size_t i = 0; i < set.candidates.size(); ++i) {
    const Candidate& c = set.candidates[i];
    if (!c.parsed) continue;
    if (best < 0) {
      best = static_cast<int>(i);
      continue;
    }
    const Candidate& b = set.candidates[static_cast<size_t>(best)];
    double sb = scores[static_cast<size_t>(best)];
    if (scores[i] > sb || (scores[i] == sb && (c.score > b.score ||
                                               (c.score == b.score && c.rank < b.rank)))) {
      best = static_cast<int>(i);
    }
  }
  if (best >= 0) {
    const Candidate& c = set.candidates[static_cast<size_t>(best)];
    sel.triple = c.parsed;
    sel.rerank_score = scores[static_cast<size_t>(best)];
    sel.generator_score = c.score;
  }
  return sel;
}

Selection select_best(const CandidateSet& set,
                      const std::vector<std::string>& sentence_tokens,
                      const Reranker& reranker) {
  std::vector<double> scores;
  scores.reserve(set.candidates.size());
  for (const auto& c : set.candidates) {
    scores.push_back(c.parsed ? reranker.score(sentence_tokens, c.tokens) : 0.0);
  }
  return select_best_scored(set, scores);
}

void write_rerank_examples(const std::string& path,
                           const std::vector<RerankExample>& examples) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write rerank examples: " + path);
  for (const auto& ex : examples) {
    nlohmann::json j;
    j["source_id"] = ex.source_id;
    j["rank"] = ex.rank;
    j["label"] = ex.label;
    std::vector<std::string> seq = ex.sentence_tokens;
    seq.push_back(kSepToken);
    seq.insert(seq.end(), ex.candidate_tokens.begin(), ex.candidate_tokens.end());
    j["sequence"] = seq;
    j["generator_score"] = ex.generator_score;
    out << j.dump() << "\n";
  }
}

std::vector<RerankExample> read_rerank_examples(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read rerank examples: " + path);
  std::vector<RerankExample> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line);
    RerankExample ex;
    ex.source_id = j.at("source_id").get<std::string>();
    ex.rank = j.at("rank").get<int>();
    ex.label = j.at("label").get<int>();
    ex.generator_score = j.value("generator_score", 0.0);
    auto seq = j.at("sequence").get<std::vector<std::string>>();
    auto sep = std::find(seq.begin(), seq.end(), std::string(kSepToken));
    ex.sentence_tokens.assign(seq.begin(), sep);
    if (sep != seq.end()) ex.candidate_tokens.assign(sep + 1, seq.end());
    out.push_back(std::move(ex));
  }
  return out;
}

}  // namespace genre
