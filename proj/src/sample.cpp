#include "genre/sample.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "genre/tokenize.hpp"

namespace genre {

std::string to_string(Task t) { return t == Task::Extraction ? "extraction" : "inference"; }
std::string to_string(Split s) {
  switch (s) {
    case Split::Train: return "train";
    case Split::Dev: return "dev";
    default: return "test";
  }
}

Task task_from_string(const std::string& s) {
  if (s == "extraction") return Task::Extraction;
  if (s == "inference") return Task::Inference;
  throw std::invalid_argument("unknown task: " + s);
}

Split split_from_string(const std::string& s) {
  if (s == "train") return Split::Train;
  if (s == "dev") return Split::Dev;
  if (s == "test") return Split::Test;
  throw std::invalid_argument("unknown split: " + s);
}

std::string sample_to_jsonl(const Sample& s) {
  nlohmann::json j;
  j["source_id"] = s.source_id;
  j["sentence"] = s.sentence;
  j["head"] = join_tokens(s.gold.head);
  j["relation"] = s.gold.relation;
  j["tail"] = join_tokens(s.gold.tail);
  j["task"] = to_string(s.task);
  j["split"] = to_string(s.split);
  return j.dump();
}

Sample sample_from_jsonl(const std::string& line) {
  nlohmann::json j = nlohmann::json::parse(line);
  Sample s;
  s.source_id = j.at("source_id").get<std::string>();
  s.sentence = j.at("sentence").get<std::string>();
  s.gold.head = tokenize(j.at("head").get<std::string>());
  s.gold.relation = j.at("relation").get<std::string>();
  s.gold.tail = tokenize(j.at("tail").get<std::string>());
  s.task = task_from_string(j.at("task").get<std::string>());
  s.split = split_from_string(j.at("split").get<std::string>());
  return s;
}

void write_samples(const std::string& path, const std::vector<Sample>& samples) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (const auto& s : samples) out << sample_to_jsonl(s) << "\n";
}

std::vector<Sample> read_samples(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::vector<Sample> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(sample_from_jsonl(line));
  }
  return out;
}

}  // namespace genre
