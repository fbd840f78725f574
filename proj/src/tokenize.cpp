#include "genre/tokenize.hpp"

#include <cctype>

namespace genre {

namespace {

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '\'' || c == '_';
}

}  // namespace

std::string to_lower(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return out;
}

bool is_bracketed_token(std::string_view token) {
  if (token.size() < 3 || token.front() != '[' || token.back() != ']') return false;
  for (char c : token.substr(1, token.size() - 2)) {
    if (!is_word_char(c)) return false;
  }
  return true;
}

std::vector<std::string> tokenize(std::string_view text) {
  const std::string lower = to_lower(text);
  std::vector<std::string> tokens;
  size_t i = 0;
  const size_t n = lower.size();
  while (i < n) {
    char c = lower[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '[') {
      // Try to read an atomic bracketed token.
      size_t j = i + 1;
      while (j < n && is_word_char(lower[j])) ++j;
      if (j < n && lower[j] == ']' && j > i + 1) {
        tokens.emplace_back(lower.substr(i, j - i + 1));
        i = j + 1;
        continue;
      }
      tokens.emplace_back(1, c);
      ++i;
      continue;
    }
    if (is_word_char(c)) {
      size_t j = i;
      while (j < n && is_word_char(lower[j])) ++j;
      tokens.emplace_back(lower.substr(i, j - i));
      i = j;
      continue;
    }
    // Punctuation becomes its own token.
    tokens.emplace_back(1, c);
    ++i;
  }
  return tokens;
}

std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

}  // namespace genre
