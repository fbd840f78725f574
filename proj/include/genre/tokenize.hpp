#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace genre {

// Lowercasing word/punctuation tokenizer shared by every stage.
// Bracketed tokens of the form [word_chars] stay atomic so control
// tokens ([HEAD], [RELN], [TAIL]) and relation tokens survive intact.
std::vector<std::string> tokenize(std::string_view text);

std::string to_lower(std::string_view text);

// Joins tokens with single spaces; inverse enough of tokenize for
// exact-match comparisons on normalized strings.
std::string join_tokens(const std::vector<std::string>& tokens);

bool is_bracketed_token(std::string_view token);

}  // namespace genre
