#include "genre/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "genre/tokenize.hpp"

namespace genre {

namespace {

bool is_all_digits(const std::string& tok) {
  if (tok.empty()) return false;
  return std::all_of(tok.begin(), tok.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

bool is_null_marker(const std::string& text) {
  std::string low = to_lower(text);
  return low == "none" || low == "<blank>" || low == "blank" || low.empty();
}

}  // namespace

bool is_span_contained(const std::vector<std::string>& sentence_tokens,
                       const std::vector<std::string>& entity_tokens) {
  if (entity_tokens.empty() || entity_tokens.size() > sentence_tokens.size()) return false;
  const size_t n = sentence_tokens.size(), m = entity_tokens.size();
  for (size_t i = 0; i + m <= n; ++i) {
    bool match = true;
    for (size_t j = 0; j < m; ++j) {
      if (sentence_tokens[i + j] != entity_tokens[j]) {
        match = false;
        break;
      }
    }
    if (match) return true;
  }
  return false;
}

NormalizeResult normalize(const RawRecord& record, const RelationRegistry& registry) {
  if (record.sentence.empty() || record.relation_raw.empty()) {
    return {std::nullopt, "malformed-record"};
  }
  if (is_null_marker(record.head_raw) || is_null_marker(record.tail_raw)) {
    return {std::nullopt, "null-entity"};
  }
  auto relation = registry.canonicalize(record.relation_raw);
  if (!relation) return {std::nullopt, "relation-dropped"};

  std::vector<std::string> sentence_tokens = tokenize(record.sentence);
  if (sentence_tokens.empty()) {
    std::cerr << "warning: empty sentence after tokenization, record " << record.source_id
              << " dropped\n";
    return {std::nullopt, "empty-sentence"};
  }
  std::vector<std::string> head = tokenize(record.head_raw);
  std::vector<std::string> tail = tokenize(record.tail_raw);
  // Strip leading bare-number prefixes: "11 dogs" -> "dogs". A tail that is
  // only a number (e.g. an age) keeps it.
  while (tail.size() > 1 && is_all_digits(tail.front())) tail.erase(tail.begin());
  if (head.empty() || tail.empty()) return {std::nullopt, "empty-entity"};

  Sample s;
  s.source_id = record.source_id;
  s.sentence = record.sentence;
  s.gold = Triple{head, *relation, tail};
  s.split = record.split;
  s.task = (is_span_contained(sentence_tokens, head) && is_span_contained(sentence_tokens, tail))
               ? Task::Extraction
               : Task::Inference;
  return {s, ""};
}

Partition partition(const std::vector<Sample>& samples) {
  Partition p;
  for (const auto& s : samples) {
    (s.task == Task::Extraction ? p.extraction : p.inference).push_back(s);
  }
  return p;
}

DatasetStats compute_stats(const std::vector<Sample>& dataset) {
  DatasetStats st;
  std::set<std::string> heads, relations, tails;
  double head_words = 0, tail_words = 0, sent_words = 0;
  size_t head_is_i = 0;
  for (const auto& s : dataset) {
    st.samples_per_split[to_string(s.split)]++;
    std::string head = join_tokens(s.gold.head);
    std::string tail = join_tokens(s.gold.tail);
    heads.insert(head);
    relations.insert(s.gold.relation);
    tails.insert(tail);
    head_words += static_cast<double>(s.gold.head.size());
    tail_words += static_cast<double>(s.gold.tail.size());
    sent_words += static_cast<double>(tokenize(s.sentence).size());
    if (head == "i") ++head_is_i;
  }
  st.unique_heads = heads.size();
  st.unique_relations = relations.size();
  st.unique_tails = tails.size();
  if (!dataset.empty()) {
    const double n = static_cast<double>(dataset.size());
    st.avg_head_words = head_words / n;
    st.avg_tail_words = tail_words / n;
    st.avg_sentence_words = sent_words / n;
    st.head_i_share = static_cast<double>(head_is_i) / n;
  }
  return st;
}

std::string stats_to_table(const DatasetStats& st, const std::string& title) {
  std::ostringstream os;
  os << "== " << title << " ==\n";
  os << "samples:\n";
  for (const auto& [split, n] : st.samples_per_split) os << "  " << split << "\t" << n << "\n";
  os << "unique heads\t" << st.unique_heads << "\n";
  os << "unique relations\t" << st.unique_relations << "\n";
  os << "unique tails\t" << st.unique_tails << "\n";
  os.precision(3);
  os << "avg head words\t" << st.avg_head_words << "\n";
  os << "avg relation words\t" << st.avg_relation_words << "\n";
  os << "avg tail words\t" << st.avg_tail_words << "\n";
  os << "avg sentence words\t" << st.avg_sentence_words << "\n";
  os << "head 'i' share\t" << st.head_i_share * 100.0 << "%\n";
  return os.str();
}

std::string stats_to_json(const DatasetStats& st) {
  nlohmann::json j;
  j["samples_per_split"] = st.samples_per_split;
  j["unique_heads"] = st.unique_heads;
  j["unique_relations"] = st.unique_relations;
  j["unique_tails"] = st.unique_tails;
  j["avg_head_words"] = st.avg_head_words;
  j["avg_relation_words"] = st.avg_relation_words;
  j["avg_tail_words"] = st.avg_tail_words;
  j["avg_sentence_words"] = st.avg_sentence_words;
  j["head_i_share"] = st.head_i_share;
  return j.dump();
}

namespace {

void push_pair_record(std::vector<RawRecord>& out, const nlohmann::json& j,
                      const std::string& sent_key, const std::string& triple_key,
                      const std::string& base_id, Split split) {
  if (!j.contains(sent_key) || !j.contains(triple_key)) return;
  const auto& triple = j.at(triple_key);
  if (!triple.is_array() || triple.size() != 3) return;
  RawRecord r;
  r.source_id = base_id + ":" + triple_key;
  r.sentence = j.at(sent_key).get<std::string>();
  r.head_raw = triple[0].is_string() ? triple[0].get<std::string>() : "";
  r.relation_raw = triple[1].is_string() ? triple[1].get<std::string>() : "";
  r.tail_raw = triple[2].is_string() ? triple[2].get<std::string>() : "";
  r.split = split;
  out.push_back(r);
}

void parse_record(std::vector<RawRecord>& out, const nlohmann::json& j, size_t index,
                  Split split) {
  std::string base_id;
  if (j.contains("id") && j.at("id").is_string()) {
    base_id = j.at("id").get<std::string>();
  } else if (j.contains("source_id") && j.at("source_id").is_string()) {
    base_id = j.at("source_id").get<std::string>();
  } else {
    base_id = to_string(split) + "-" + std::to_string(index);
  }
  if (j.contains("sentence") && j.contains("relation")) {
    RawRecord r;
    r.source_id = base_id;
    r.sentence = j.at("sentence").get<std::string>();
    r.head_raw = j.at("head").get<std::string>();
    r.relation_raw = j.at("relation").get<std::string>();
    r.tail_raw = j.at("tail").get<std::string>();
    r.split = split;
    out.push_back(r);
    return;
  }
  push_pair_record(out, j, "sentence1", "triple1", base_id, split);
  push_pair_record(out, j, "sentence2", "triple2", base_id, split);
}

}  // namespace

std::vector<RawRecord> read_raw_corpus(const std::string& path, Split split) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read raw corpus: " + path);
  std::vector<RawRecord> out;
  // Peek: a whole-file JSON array starts with '['.
  char first = 0;
  in >> std::ws;
  first = static_cast<char>(in.peek());
  if (first == '[') {
    nlohmann::json arr = nlohmann::json::parse(in);
    size_t i = 0;
    for (const auto& j : arr) parse_record(out, j, i++, split);
  } else {
    std::string line;
    size_t i = 0;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      parse_record(out, nlohmann::json::parse(line), i++, split);
    }
  }
  return out;
}

BuildReport build_dataset(const std::vector<RawRecord>& records,
                          const RelationRegistry& registry) {
  BuildReport report;
  report.raw_records = records.size();
  std::vector<Sample> normalized;
  normalized.reserve(records.size());
  for (const auto& r : records) {
    auto res = normalize(r, registry);
    if (res.sample) {
      normalized.push_back(*res.sample);
    } else {
      report.dropped_by_reason[res.drop_reason]++;
    }
  }
  report.partition = partition(normalized);
  return report;
}

}  // namespace genre
