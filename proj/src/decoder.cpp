#include "genre/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "genre/tokenize.hpp"

namespace genre {

void RelationTailIndex::insert(const std::string& relation,
                               const std::vector<std::string>& tail_tokens) {
  if (tail_tokens.empty()) return;
  Node* node = &roots_[relation];
  for (const auto& tok : tail_tokens) {
    auto& child = node->children[tok];
    if (!child) child = std::make_unique<Node>();
    node = child.get();
  }
  node->terminal = true;
}

const RelationTailIndex::Node* RelationTailIndex::walk(
    const std::string& relation, const std::vector<std::string>& prefix) const {
  auto it = roots_.find(relation);
  if (it == roots_.end()) return nullptr;
  const Node* node = &it->second;
  for (const auto& tok : prefix) {
    auto child = node->children.find(tok);
    if (child == node->children.end()) return nullptr;
    node = child->second.get();
  }
  return node;
}

bool RelationTailIndex::has_pair(const std::string& relation,
                                 const std::vector<std::string>& tail_tokens) const {
  const Node* node = walk(relation, tail_tokens);
  return node != nullptr && node->terminal;
}

std::vector<std::string> RelationTailIndex::continuations(
    const std::string& relation, const std::vector<std::string>& prefix) const {
  std::vector<std::string> out;
  const Node* node = walk(relation, prefix);
  if (!node) return out;
  out.reserve(node->children.size());
  for (const auto& [tok, child] : node->children) out.push_back(tok);
  return out;
}

bool RelationTailIndex::is_complete(const std::string& relation,
                                    const std::vector<std::string>& prefix) const {
  const Node* node = walk(relation, prefix);
  return node != nullptr && node->terminal;
}

double RelationTailIndex::max_recall_on(const std::vector<Sample>& eval_samples) const {
  if (eval_samples.empty()) return 0.0;
  size_t hits = 0;
  for (const auto& s : eval_samples) {
    if (has_pair(s.gold.relation, s.gold.tail)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(eval_samples.size());
}

void RelationTailIndex::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write index: " + path);
  // Depth-first enumeration of stored tails, deterministic order.
  struct Frame {
    const Node* node;
    std::vector<std::string> prefix;
  };
  for (const auto& [relation, root] : roots_) {
    std::vector<Frame> stack{{&root, {}}};
    while (!stack.empty()) {
      Frame f = std::move(stack.back());
      stack.pop_back();
      if (f.node->terminal) out << relation << "\t" << join_tokens(f.prefix) << "\n";
      // Reverse order so the map's smallest key is processed first.
      for (auto it = f.node->children.rbegin(); it != f.node->children.rend(); ++it) {
        Frame next{it->second.get(), f.prefix};
        next.prefix.push_back(it->first);
        stack.push_back(std::move(next));
      }
    }
  }
}

RelationTailIndex RelationTailIndex::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read index: " + path);
  RelationTailIndex index;
  std::string line;
  while (std::getline(in, line)) {
    auto tab = line.find('\t');
    if (tab == std::string::npos) continue;
    index.insert(line.substr(0, tab), tokenize(line.substr(tab + 1)));
  }
  return index;
}

RelationTailIndex build_relation_tail_index(const std::vector<Sample>& train_samples) {
  RelationTailIndex index;
  for (const auto& s : train_samples) index.insert(s.gold.relation, s.gold.tail);
  return index;
}

namespace {

bool is_control(const std::string& tok) {
  return tok == kHeadToken || tok == kRelnToken || tok == kTailToken || tok == kSepToken ||
         tok == kEosToken;
}

// Token ids a free (unconstrained) decode may emit: everything except the
// separator and the unknown placeholder.
std::vector<int> free_token_ids(const Vocabulary& vocab) {
  std::vector<int> out;
  for (int id = 0; id < vocab.size(); ++id) {
    if (id == vocab.unk_id()) continue;
    if (vocab.token_of(id) == kSepToken) continue;
    out.push_back(id);
  }
  return out;
}

std::vector<int> unique_ids(const Vocabulary& vocab, const std::vector<std::string>& tokens) {
  std::vector<int> out;
  for (const auto& t : tokens) {
    if (is_control(t)) continue;
    int id = vocab.id_of(t);
    if (id == vocab.unk_id()) continue;
    out.push_back(id);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Sentence tokens that can extend the current contiguous tail match.
std::vector<int> strict_span_continuations(const Vocabulary& vocab,
                                           const std::vector<std::string>& sentence,
                                           const std::vector<std::string>& prefix) {
  std::vector<std::string> next;
  const size_t m = prefix.size();
  for (size_t i = 0; i + m < sentence.size(); ++i) {
    bool match = true;
    for (size_t j = 0; j < m; ++j) {
      if (sentence[i + j] != prefix[j]) {
        match = false;
        break;
      }
    }
    if (match) next.push_back(sentence[i + m]);
  }
  if (m == 0) next = sentence;
  return unique_ids(vocab, next);
}

}  // namespace

std::vector<int> allowed_tokens(const DecodeState& state, const DecodeConfig& config,
                                const std::vector<std::string>& sentence_tokens,
                                const RelationTailIndex& index, const Vocabulary& vocab,
                                const RelationRegistry& registry) {
  if (!config.constrained) {
    if (state.phase == DecodePhase::Done) throw std::logic_error("invalid-state: done");
    return free_token_ids(vocab);
  }
  std::vector<int> out;
  switch (state.phase) {
    case DecodePhase::AtStart:
      out.push_back(vocab.id_of(kHeadToken));
      break;
    case DecodePhase::InHead: {
      if (config.mode == Task::Extraction) {
        out = unique_ids(vocab, sentence_tokens);
      } else {
        // Inference-mode heads are unconstrained text tokens.
        for (int id = 0; id < vocab.size(); ++id) {
          const std::string& tok = vocab.token_of(id);
          if (id == vocab.unk_id() || is_control(tok) || registry.contains(tok)) continue;
          out.push_back(id);
        }
      }
      if (state.field_tokens >= 1) out.push_back(vocab.id_of(kRelnToken));
      break;
    }
    case DecodePhase::AtRelation:
      for (const auto& r : registry.relations()) {
        if (vocab.contains(r)) out.push_back(vocab.id_of(r));
      }
      break;
    case DecodePhase::AfterRelation:
      out.push_back(vocab.id_of(kTailToken));
      break;
    case DecodePhase::InTail: {
      if (config.mode == Task::Extraction) {
        out = config.strict_span_tails
                  ? strict_span_continuations(vocab, sentence_tokens, state.tail_prefix)
                  : unique_ids(vocab, sentence_tokens);
        if (state.field_tokens >= 1) out.push_back(vocab.id_of(kEosToken));
      } else {
        out = unique_ids(vocab, index.continuations(state.relation, state.tail_prefix));
        if (index.is_complete(state.relation, state.tail_prefix)) {
          out.push_back(vocab.id_of(kEosToken));
        }
      }
      break;
    }
    case DecodePhase::Done:
      throw std::logic_error("invalid-state: done");
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

DecodeState advance(const DecodeState& state, const std::string& token) {
  DecodeState next = state;
  switch (state.phase) {
    case DecodePhase::AtStart:
      next.phase = DecodePhase::InHead;
      next.field_tokens = 0;
      break;
    case DecodePhase::InHead:
      if (token == kRelnToken) {
        next.phase = DecodePhase::AtRelation;
        next.field_tokens = 0;
      } else {
        next.field_tokens++;
      }
      break;
    case DecodePhase::AtRelation:
      next.relation = token;
      next.phase = DecodePhase::AfterRelation;
      break;
    case DecodePhase::AfterRelation:
      next.phase = DecodePhase::InTail;
      next.field_tokens = 0;
      break;
    case DecodePhase::InTail:
      if (token == kEosToken) {
        next.phase = DecodePhase::Done;
      } else {
        next.field_tokens++;
        next.tail_prefix.push_back(token);
      }
      break;
    case DecodePhase::Done:
      break;
  }
  return next;
}

struct Beam {
  std::vector<int> generated;  // ids after the separator
  double logprob = 0.0;
  DecodeState state;
};

bool beam_less(const Beam& a, const Beam& b, bool length_normalize) {
  double sa = length_normalize && !a.generated.empty()
                  ? a.logprob / static_cast<double>(a.generated.size())
                  : a.logprob;
  double sb = length_normalize && !b.generated.empty()
                  ? b.logprob / static_cast<double>(b.generated.size())
                  : b.logprob;
  if (sa != sb) return sa > sb;
  return a.generated < b.generated;  // deterministic tie-break on token ids
}

}  // namespace

CandidateSet beam_decode(const Scorer& scorer, const std::string& source_id,
                         const std::vector<std::string>& sentence_tokens,
                         const DecodeConfig& config, const RelationTailIndex& index,
                         const RelationRegistry& registry) {
  const Vocabulary& vocab = scorer.vocab();
  std::vector<int> context = vocab.encode(sentence_tokens);
  context.push_back(vocab.id_of(kSepToken));

  std::vector<Beam> beams{Beam{}};
  std::vector<Beam> finished;

  for (int step = 0; step < config.max_length && !beams.empty(); ++step) {
    std::vector<Beam> expanded;
    for (const auto& beam : beams) {
      std::vector<int> full = context;
      full.insert(full.end(), beam.generated.begin(), beam.generated.end());
      std::vector<double> probs = scorer.next_token_scores(full);

      std::vector<int> allowed;
      try {
        allowed = allowed_tokens(beam.state, config, sentence_tokens, index, vocab, registry);
      } catch (const std::logic_error&) {
        continue;
      }
      // Zero out disallowed probabilities, renormalize over the rest.
      double mass = 0.0;
      for (int id : allowed) mass += probs[static_cast<size_t>(id)];
      if (mass <= 0.0) continue;  // dead beam
      for (int id : allowed) {
        double p = probs[static_cast<size_t>(id)] / mass;
        if (p <= 0.0) continue;
        Beam next = beam;
        next.generated.push_back(id);
        next.logprob += std::log(p);
        next.state = advance(beam.state, vocab.token_of(id));
        if (next.state.phase == DecodePhase::Done ||
            (!config.constrained && vocab.token_of(id) == kEosToken)) {
          finished.push_back(std::move(next));
        } else {
          expanded.push_back(std::move(next));
        }
      }
    }
    std::sort(expanded.begin(), expanded.end(), [&](const Beam& a, const Beam& b) {
      return beam_less(a, b, config.length_normalize);
    });
    if (static_cast<int>(expanded.size()) > config.beam_width) {
      expanded.resize(static_cast<size_t>(config.beam_width));
    }
    beams = std::move(expanded);
  }

  std::sort(finished.begin(), finished.end(), [&](const Beam& a, const Beam& b) {
    return beam_less(a, b, config.length_normalize);
  });
  if (static_cast<int>(finished.size()) > config.top_l) {
    finished.resize(static_cast<size_t>(config.top_l));
  }

  CandidateSet set;
  set.source_id = source_id;
  int rank = 0;
  for (const auto& beam : finished) {
    Candidate c;
    for (int id : beam.generated) {
      const std::string& tok = vocab.token_of(id);
      if (tok == kEosToken) break;
      c.tokens.push_back(tok);
    }
    c.score = beam.logprob;
    c.parsed = parse_flattened(c.tokens, registry);
    c.rank = rank++;
    set.candidates.push_back(std::move(c));
  }
  return set;
}

double max_possible_recall(const std::vector<CandidateSet>& candidate_sets,
                           const std::unordered_map<std::string, Triple>& golds, int k) {
  if (candidate_sets.empty()) return 0.0;
  size_t hits = 0;
  for (const auto& set : candidate_sets) {
    auto it = golds.find(set.source_id);
    if (it == golds.end()) continue;
    const int limit = std::min<int>(k, static_cast<int>(set.candidates.size()));
    for (int i = 0; i < limit; ++i) {
      if (set.candidates[static_cast<size_t>(i)].parsed &&
          *set.candidates[static_cast<size_t>(i)].parsed == it->second) {
        ++hits;
        break;
      }
    }
  }
  return static_cast<double>(hits) / static_cast<double>(candidate_sets.size());
}

void write_candidates(const std::string& path, const std::vector<CandidateSet>& sets) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write candidates: " + path);
  for (const auto& set : sets) {
    for (const auto& c : set.candidates) {
      nlohmann::json j;
      j["source_id"] = set.source_id;
      j["rank"] = c.rank;
      j["tokens"] = c.tokens;
      j["generator_score"] = c.score;
      j["parsed_ok"] = c.parsed.has_value();
      if (c.parsed) {
        j["head"] = join_tokens(c.parsed->head);
        j["relation"] = c.parsed->relation;
        j["tail"] = join_tokens(c.parsed->tail);
      }
      out << j.dump() << "\n";
    }
  }
}

std::vector<CandidateSet> read_candidates(const std::string& path,
                                          const RelationRegistry& registry) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read candidates: " + path);
  std::vector<CandidateSet> sets;
  std::unordered_map<std::string, size_t> by_id;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line);
    std::string id = j.at("source_id").get<std::string>();
    auto [it, inserted] = by_id.emplace(id, sets.size());
    if (inserted) {
      sets.push_back(CandidateSet{id, {}});
    }
    Candidate c;
    c.rank = j.at("rank").get<int>();
    c.tokens = j.at("tokens").get<std::vector<std::string>>();
    c.score = j.at("generator_score").get<double>();
    c.parsed = parse_flattened(c.tokens, registry);
    sets[it->second].candidates.push_back(std::move(c));
  }
  for (auto& set : sets) {
    std::sort(set.candidates.begin(), set.candidates.end(),
              [](const Candidate& a, const Candidate& b) { return a.rank < b.rank; });
  }
  return sets;
}

}  // namespace genre
