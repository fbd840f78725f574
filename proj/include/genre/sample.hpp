#pragma once

#include <string>
#include <vector>

#include "genre/triple.hpp"

namespace genre {

enum class Task { Extraction, Inference };
enum class Split { Train, Dev, Test };

std::string to_string(Task t);
std::string to_string(Split s);
Task task_from_string(const std::string& s);
Split split_from_string(const std::string& s);

// An utterance paired with one gold triple.
struct Sample {
  std::string source_id;
  std::string sentence;  // raw text; tokenize() gives the canonical tokens
  Triple gold;
  Task task = Task::Extraction;
  Split split = Split::Train;
};

// Line-delimited JSON records:
// {source_id, sentence, head, relation, tail, task, split}
std::string sample_to_jsonl(const Sample& s);
Sample sample_from_jsonl(const std::string& line);

void write_samples(const std::string& path, const std::vector<Sample>& samples);
std::vector<Sample> read_samples(const std::string& path);

}  // namespace genre
