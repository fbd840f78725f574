#include "genre/analyzer.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "genre/dataset.hpp"
#include "genre/tokenize.hpp"

namespace genre {

ResourceKind resource_kind_from_string(const std::string& s) {
  if (s == "conceptnet_related") return ResourceKind::ConceptNetRelated;
  if (s == "conceptnet_connect") return ResourceKind::ConceptNetConnect;
  if (s == "wordnet_synonym") return ResourceKind::WordNetSynonym;
  if (s == "wordnet_hypernym") return ResourceKind::WordNetHypernym;
  if (s == "wordnet_hyponym") return ResourceKind::WordNetHyponym;
  throw std::invalid_argument("unknown resource kind: " + s);
}

std::string to_string(ResourceKind kind) {
  switch (kind) {
    case ResourceKind::ConceptNetRelated: return "conceptnet_related";
    case ResourceKind::ConceptNetConnect: return "conceptnet_connect";
    case ResourceKind::WordNetSynonym: return "wordnet_synonym";
    case ResourceKind::WordNetHypernym: return "wordnet_hypernym";
    default: return "wordnet_hyponym";
  }
}

namespace {

bool is_conceptnet(ResourceKind kind) {
  return kind == ResourceKind::ConceptNetRelated || kind == ResourceKind::ConceptNetConnect;
}

}  // namespace

LexicalResource::LexicalResource(
    ResourceKind kind,
    std::unordered_map<std::string, std::unordered_set<std::string>> neighbors)
    : kind_(kind), neighbors_(std::move(neighbors)) {
  if (is_conceptnet(kind_)) {
    for (auto& [word, set] : neighbors_) {
      if (set.size() > 100) {
        // Deterministic truncation to the 100 lexicographically smallest.
        std::vector<std::string> sorted(set.begin(), set.end());
        std::sort(sorted.begin(), sorted.end());
        sorted.resize(100);
        set = std::unordered_set<std::string>(sorted.begin(), sorted.end());
      }
    }
  }
}

LexicalResource LexicalResource::load(ResourceKind kind, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("missing-resource: " + path);
  std::unordered_map<std::string, std::unordered_set<std::string>> neighbors;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) continue;
    std::string word = to_lower(line.substr(0, tab));
    auto& set = neighbors[word];
    std::stringstream rest(line.substr(tab + 1));
    std::string neighbor;
    while (std::getline(rest, neighbor, ',')) {
      if (!neighbor.empty()) set.insert(to_lower(neighbor));
    }
  }
  return LexicalResource(kind, std::move(neighbors));
}

bool LexicalResource::related(const std::string& word, const std::string& neighbor) const {
  auto it = neighbors_.find(word);
  return it != neighbors_.end() && it->second.count(neighbor) > 0;
}

std::unordered_set<std::string> load_stopwords(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("missing-resource: " + path);
  std::unordered_set<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') out.insert(to_lower(line));
  }
  return out;
}

const std::unordered_set<std::string>& default_stopwords() {
  static const std::unordered_set<std::string> words = {
      "a", "an", "the", "i", "me", "my", "mine", "you", "your", "yours", "he", "him",
      "his", "she", "her", "hers", "it", "its", "we", "us", "our", "ours", "they",
      "them", "their", "theirs", "am", "is", "are", "was", "were", "be", "been",
      "being", "do", "does", "did", "doing", "have", "has", "had", "having", "will",
      "would", "can", "could", "shall", "should", "may", "might", "must", "and", "or",
      "but", "if", "then", "because", "as", "of", "at", "by", "for", "with", "about",
      "to", "from", "in", "out", "on", "off", "up", "down", "into", "over", "under",
      "again", "so", "than", "too", "very", "not", "no", "nor", "only", "just",
      "that", "this", "these", "those", "what", "which", "who", "whom", "when",
      "where", "why", "how", "all", "any", "both", "each", "few", "more", "most",
      "some", "such", "own", "same", "also", "there", "here", "'s", "'m", "'re",
      "'ve", "'ll", "'d", "n't", ".", ",", "!", "?", ";", ":", "-", "'", "\"",
  };
  return words;
}

namespace {

std::vector<std::string> content_words(const std::vector<std::string>& tokens,
                                       const std::unordered_set<std::string>& stopwords) {
  std::vector<std::string> out;
  for (const auto& t : tokens) {
    if (!stopwords.count(t)) out.push_back(t);
  }
  return out;
}

}  // namespace

double transformation_coverage(const std::vector<Sample>& inference_samples,
                               const LexicalResource& resource,
                               const std::unordered_set<std::string>& stopwords) {
  if (inference_samples.empty()) return 0.0;
  size_t covered = 0;
  for (const auto& s : inference_samples) {
    std::vector<std::string> sentence = content_words(tokenize(s.sentence), stopwords);
    bool all_reachable = !s.gold.tail.empty();
    for (const auto& tail_word : s.gold.tail) {
      bool reachable = false;
      for (const auto& sent_word : sentence) {
        if (resource.related(sent_word, tail_word)) {
          reachable = true;
          break;
        }
      }
      if (!reachable) {
        all_reachable = false;
        break;
      }
    }
    if (all_reachable) ++covered;
  }
  return 100.0 * static_cast<double>(covered) / static_cast<double>(inference_samples.size());
}

double same_stem_coverage(const std::vector<Sample>& inference_samples) {
  if (inference_samples.empty()) return 0.0;
  size_t covered = 0;
  for (const auto& s : inference_samples) {
    std::vector<std::string> sentence_stems;
    for (const auto& t : tokenize(s.sentence)) sentence_stems.push_back(porter_stem(t));
    std::vector<std::string> tail_stems;
    for (const auto& t : s.gold.tail) tail_stems.push_back(porter_stem(t));
    // The stemmed tail must occur as a contiguous span of the stemmed
    // sentence, mirroring the span search on raw tokens.
    if (is_span_contained(sentence_stems, tail_stems)) ++covered;
  }
  return 100.0 * static_cast<double>(covered) / static_cast<double>(inference_samples.size());
}

double directly_identifiable_share(const std::vector<Sample>& samples) {
  if (samples.empty()) return 0.0;
  size_t contained = 0;
  for (const auto& s : samples) {
    if (is_span_contained(tokenize(s.sentence), s.gold.tail)) ++contained;
  }
  return 100.0 * static_cast<double>(contained) / static_cast<double>(samples.size());
}

std::vector<ParsedSentence> read_parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read parse file: " + path);
  std::vector<ParsedSentence> sentences;
  ParsedSentence current;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) {
      if (!current.tokens.empty()) {
        sentences.push_back(std::move(current));
        current = ParsedSentence{};
      }
      continue;
    }
    std::stringstream ss(line);
    ParsedToken tok;
    std::string head;
    std::getline(ss, tok.token, '\t');
    std::getline(ss, tok.pos, '\t');
    std::getline(ss, head, '\t');
    std::getline(ss, tok.dep_label, '\t');
    tok.head_index = head.empty() ? -1 : std::stoi(head);
    current.tokens.push_back(std::move(tok));
  }
  if (!current.tokens.empty()) sentences.push_back(std::move(current));
  return sentences;
}

namespace {

HistogramResult tail_distribution(const std::vector<ParsedSentence>& parses,
                                  const std::vector<Sample>& samples,
                                  bool use_dep_label) {
  if (parses.size() != samples.size()) {
    throw std::runtime_error("alignment-failure: parse/sample count mismatch");
  }
  HistogramResult hist;
  for (size_t i = 0; i < samples.size(); ++i) {
    const auto& parse = parses[i];
    const auto& tail = samples[i].gold.tail;
    std::vector<std::string> parse_tokens;
    for (const auto& t : parse.tokens) parse_tokens.push_back(to_lower(t.token));
    // Locate the tail span in the parse tokens.
    bool found = false;
    for (size_t start = 0; start + tail.size() <= parse_tokens.size() && !found; ++start) {
      bool match = true;
      for (size_t j = 0; j < tail.size(); ++j) {
        if (parse_tokens[start + j] != tail[j]) {
          match = false;
          break;
        }
      }
      if (match) {
        for (size_t j = 0; j < tail.size(); ++j) {
          const ParsedToken& tok = parse.tokens[start + j];
          hist.counts[use_dep_label ? tok.dep_label : tok.pos]++;
          hist.located_tokens++;
        }
        found = true;
      }
    }
    if (!found) hist.alignment_failures++;
  }
  return hist;
}

}  // namespace

HistogramResult tail_dependency_distribution(const std::vector<ParsedSentence>& parses,
                                             const std::vector<Sample>& samples) {
  return tail_distribution(parses, samples, true);
}

HistogramResult tail_pos_distribution(const std::vector<ParsedSentence>& parses,
                                      const std::vector<Sample>& samples) {
  return tail_distribution(parses, samples, false);
}

std::string histogram_to_table(const HistogramResult& hist, size_t top_k) {
  std::vector<std::pair<std::string, size_t>> entries(hist.counts.begin(), hist.counts.end());
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (entries.size() > top_k) entries.resize(top_k);
  std::ostringstream os;
  os.precision(1);
  os << std::fixed;
  for (const auto& [label, count] : entries) {
    double share = hist.located_tokens
                       ? 100.0 * static_cast<double>(count) /
                             static_cast<double>(hist.located_tokens)
                       : 0.0;
    os << label << "\t" << count << "\t" << share << "%\n";
  }
  os << "(located tokens " << hist.located_tokens << ", alignment failures "
     << hist.alignment_failures << ")\n";
  return os.str();
}

}  // namespace genre
