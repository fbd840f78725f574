#pragma once

#include <optional>
#include <string>
#include <vector>

#include "genre/relation.hpp"

namespace genre {

// Control tokens of the flattened-triple format.
inline constexpr const char* kHeadToken = "[head]";
inline constexpr const char* kRelnToken = "[reln]";
inline constexpr const char* kTailToken = "[tail]";
// Separator between sentence context and flattened target, and the
// end-of-sequence marker used by scorers and decoders.
inline constexpr const char* kSepToken = "[sep]";
inline constexpr const char* kEosToken = "[eos]";

struct Triple {
  std::vector<std::string> head;  // non-empty token sequence
  std::string relation;           // canonical bracketed name
  std::vector<std::string> tail;  // non-empty token sequence

  bool operator==(const Triple&) const = default;
};

struct FlattenedSequence {
  std::vector<std::string> tokens;
  // Index of the first token of each field within tokens.
  size_t head_begin = 0;
  size_t reln_index = 0;
  size_t tail_begin = 0;
};

// Serializes a triple as [head] h... [reln] [relation] [tail] t...
// Throws std::invalid_argument when head/tail are empty or the relation is
// not in the registry.
FlattenedSequence flatten(const Triple& triple, const RelationRegistry& registry);

// Total inverse of flatten: returns the triple when the token sequence is a
// well-formed flattened triple, nullopt otherwise. Never throws.
std::optional<Triple> parse_flattened(const std::vector<std::string>& tokens,
                                      const RelationRegistry& registry);

std::string triple_to_string(const Triple& t);

}  // namespace genre
