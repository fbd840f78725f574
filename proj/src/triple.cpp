#include "genre/triple.hpp"

#include <stdexcept>

#include "genre/tokenize.hpp"

namespace genre {

FlattenedSequence flatten(const Triple& triple, const RelationRegistry& registry) {
  if (triple.head.empty()) throw std::invalid_argument("invalid-triple: empty head");
  if (triple.tail.empty()) throw std::invalid_argument("invalid-triple: empty tail");
  if (!registry.contains(triple.relation)) {
    throw std::invalid_argument("invalid-triple: unregistered relation " + triple.relation);
  }
  FlattenedSequence seq;
  seq.tokens.push_back(kHeadToken);
  seq.head_begin = seq.tokens.size();
  for (const auto& t : triple.head) seq.tokens.push_back(t);
  seq.tokens.push_back(kRelnToken);
  seq.reln_index = seq.tokens.size();
  seq.tokens.push_back(triple.relation);
  seq.tokens.push_back(kTailToken);
  seq.tail_begin = seq.tokens.size();
  for (const auto& t : triple.tail) seq.tokens.push_back(t);
  return seq;
}

std::optional<Triple> parse_flattened(const std::vector<std::string>& tokens,
                                      const RelationRegistry& registry) {
  // Expected shape: [head] h+ [reln] R [tail] t+ with no stray control
  // tokens anywhere else.
  size_t head_pos = std::string::npos, reln_pos = std::string::npos,
         tail_pos = std::string::npos;
  for (size_t i = 0; i < tokens.size(); ++i) {
    const auto& tok = tokens[i];
    if (tok == kHeadToken) {
      if (head_pos != std::string::npos) return std::nullopt;
      head_pos = i;
    } else if (tok == kRelnToken) {
      if (reln_pos != std::string::npos) return std::nullopt;
      reln_pos = i;
    } else if (tok == kTailToken) {
      if (tail_pos != std::string::npos) return std::nullopt;
      tail_pos = i;
    }
  }
  if (head_pos == std::string::npos || reln_pos == std::string::npos ||
      tail_pos == std::string::npos) {
    return std::nullopt;
  }
  if (head_pos != 0 || !(head_pos < reln_pos && reln_pos < tail_pos)) return std::nullopt;
  if (reln_pos + 2 != tail_pos) return std::nullopt;  // exactly one relation token
  if (reln_pos == head_pos + 1) return std::nullopt;  // empty head
  if (tail_pos + 1 >= tokens.size()) return std::nullopt;  // empty tail

  Triple t;
  for (size_t i = head_pos + 1; i < reln_pos; ++i) t.head.push_back(tokens[i]);
  t.relation = tokens[reln_pos + 1];
  if (!registry.contains(t.relation)) return std::nullopt;
  for (size_t i = tail_pos + 1; i < tokens.size(); ++i) {
    if (tokens[i] == kEosToken) return std::nullopt;  // decoders strip eos first
    t.tail.push_back(tokens[i]);
  }
  return t;
}

std::string triple_to_string(const Triple& t) {
  return "(" + join_tokens(t.head) + ", " + t.relation + ", " + join_tokens(t.tail) + ")";
}

}  // namespace genre
