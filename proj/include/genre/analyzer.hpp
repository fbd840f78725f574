#pragma once

#include <map>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "genre/sample.hpp"

namespace genre {

// Porter's 1980 suffix-stripping algorithm over a single lowercase word.
std::string porter_stem(const std::string& word);

bool same_stem(const std::string& word_a, const std::string& word_b);

enum class ResourceKind {
  ConceptNetRelated,
  ConceptNetConnect,
  WordNetSynonym,
  WordNetHypernym,
  WordNetHyponym,
};

ResourceKind resource_kind_from_string(const std::string& s);
std::string to_string(ResourceKind kind);

// word -> neighbor words, loaded from a tab-separated
// `word<TAB>n1,n2,...` file. ConceptNet kinds cap at 100 neighbors.
class LexicalResource {
 public:
  LexicalResource(ResourceKind kind,
                  std::unordered_map<std::string, std::unordered_set<std::string>> neighbors);

  static LexicalResource load(ResourceKind kind, const std::string& path);

  ResourceKind kind() const { return kind_; }
  bool related(const std::string& word, const std::string& neighbor) const;
  size_t word_count() const { return neighbors_.size(); }

 private:
  ResourceKind kind_;
  std::unordered_map<std::string, std::unordered_set<std::string>> neighbors_;
};

std::unordered_set<std::string> load_stopwords(const std::string& path);
const std::unordered_set<std::string>& default_stopwords();

// A tail is covered when every tail word is reachable from some non-stopword
// sentence word through the resource. Returns the covered percentage.
double transformation_coverage(const std::vector<Sample>& inference_samples,
                               const LexicalResource& resource,
                               const std::unordered_set<std::string>& stopwords);

// Same_stem transformation: tail word stems found among sentence word stems.
double same_stem_coverage(const std::vector<Sample>& inference_samples);

// Fraction of samples whose tail is a token-level span of the sentence.
double directly_identifiable_share(const std::vector<Sample>& samples);

struct ParsedToken {
  std::string token;
  std::string pos;
  int head_index = -1;
  std::string dep_label;
};

struct ParsedSentence {
  std::vector<ParsedToken> tokens;
};

// Column file, one token per line: token<TAB>pos<TAB>head-index<TAB>dep,
// blank line between sentences.
std::vector<ParsedSentence> read_parse_file(const std::string& path);

struct HistogramResult {
  std::map<std::string, size_t> counts;
  size_t located_tokens = 0;
  size_t alignment_failures = 0;
};

// Histogram over dependency labels (or POS tags) of tail-entity tokens.
// Samples align positionally with parses; a sample whose tail cannot be
// located in its parse tokens counts as an alignment failure.
HistogramResult tail_dependency_distribution(const std::vector<ParsedSentence>& parses,
                                             const std::vector<Sample>& samples);
HistogramResult tail_pos_distribution(const std::vector<ParsedSentence>& parses,
                                      const std::vector<Sample>& samples);

std::string histogram_to_table(const HistogramResult& hist, size_t top_k = 10);

}  // namespace genre
