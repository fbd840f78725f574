#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "genre/analyzer.hpp"
#include "test_util.hpp"

using namespace genre;

namespace {

std::filesystem::path temp_dir() {
  auto dir = std::filesystem::temp_directory_path() / "genre_analyzer_test";
  std::filesystem::create_directories(dir);
  return dir;
}

Sample inference_sample(const std::string& sentence, const std::string& tail_word) {
  Sample s;
  s.source_id = "a-" + sentence.substr(0, 8) + tail_word;
  s.sentence = sentence;
  s.gold = Triple{{"i"}, "[misc_attribute]", {tail_word}};
  s.task = Task::Inference;
  return s;
}

}  // namespace

TEST_CASE("porter stemmer matches the classic reference outputs") {
  // Reference pairs from the published description of the algorithm.
  const std::vector<std::pair<std::string, std::string>> expected = {
      {"caresses", "caress"}, {"ponies", "poni"},       {"ties", "ti"},
      {"caress", "caress"},   {"cats", "cat"},          {"feed", "feed"},
      {"agreed", "agre"},     {"plastered", "plaster"}, {"bled", "bled"},
      {"motoring", "motor"},  {"sing", "sing"},         {"hopping", "hop"},
      {"falling", "fall"},    {"hissing", "hiss"},      {"fizzed", "fizz"},
      {"failing", "fail"},    {"filing", "file"},       {"happy", "happi"},
      {"sky", "sky"},         {"relational", "relat"},  {"conditional", "condit"},
      {"rational", "ration"}, {"digitizer", "digit"},   {"operator", "oper"},
      {"feudalism", "feudal"},{"hopefulness", "hope"},  {"formative", "form"},
      {"formalize", "formal"},{"electrical", "electr"}, {"hopeful", "hope"},
      {"goodness", "good"},   {"allowance", "allow"},   {"inference", "infer"},
      {"adjustable", "adjust"},{"replacement", "replac"},{"adjustment", "adjust"},
      {"dependent", "depend"},{"adoption", "adopt"},    {"communism", "commun"},
      {"activate", "activ"},  {"effective", "effect"},  {"rate", "rate"},
      {"roll", "roll"},       {"swimming", "swim"},     {"running", "run"},
      {"dogs", "dog"},        {"happiness", "happi"},   {"generalizations", "gener"},
  };
  for (const auto& [word, stem] : expected) {
    CHECK_MESSAGE(porter_stem(word) == stem, word, " -> ", porter_stem(word));
  }
  // Short words and non-alphabetic input pass through.
  CHECK(porter_stem("a") == "a");
  CHECK(porter_stem("is") == "is");
  CHECK(porter_stem("60") == "60");
  CHECK(porter_stem("Swimming") == "swim");  // lowercased first
}

TEST_CASE("same_stem is reflexive and symmetric") {
  const std::vector<std::string> words = {"swim",   "swimming", "swims", "runner",
                                          "running","happy",    "dogs",  "dog"};
  for (const auto& w : words) CHECK(same_stem(w, w));
  for (const auto& a : words) {
    for (const auto& b : words) CHECK(same_stem(a, b) == same_stem(b, a));
  }
  CHECK(same_stem("swimming", "swims"));
  CHECK(same_stem("dog", "dogs"));
  CHECK_FALSE(same_stem("dog", "cat"));
}

TEST_CASE("lexical resources load from tsv and cap conceptnet neighbors") {
  auto dir = temp_dir();
  auto path = dir / "related.tsv";
  {
    std::ofstream out(path);
    out << "drum\tinstrument,music,beat\n";
    out << "dog\tanimal,pet\n";
    // 120 neighbors: only the 100 lexicographically smallest survive for
    // ConceptNet kinds.
    out << "busy";
    for (int i = 0; i < 120; ++i) out << (i ? "," : "\t") << "n" << 1000 + i;
    out << "\n";
  }
  LexicalResource related = LexicalResource::load(ResourceKind::ConceptNetRelated, path.string());
  CHECK(related.kind() == ResourceKind::ConceptNetRelated);
  CHECK(related.word_count() == 3);
  CHECK(related.related("drum", "instrument"));
  CHECK(related.related("dog", "pet"));
  CHECK_FALSE(related.related("dog", "instrument"));
  CHECK(related.related("busy", "n1000"));
  CHECK(related.related("busy", "n1099"));
  CHECK_FALSE(related.related("busy", "n1100"));  // capped away
  CHECK_FALSE(related.related("busy", "n1119"));

  // WordNet kinds keep everything.
  LexicalResource syn = LexicalResource::load(ResourceKind::WordNetSynonym, path.string());
  CHECK(syn.related("busy", "n1119"));

  CHECK(resource_kind_from_string("conceptnet_related") == ResourceKind::ConceptNetRelated);
  CHECK(resource_kind_from_string("wordnet_hypernym") == ResourceKind::WordNetHypernym);
  CHECK(to_string(ResourceKind::WordNetHyponym) == "wordnet_hyponym");
}

TEST_CASE("transformation coverage follows the resource edges") {
  auto dir = temp_dir();
  auto path = dir / "cover.tsv";
  {
    std::ofstream out(path);
    out << "drums\tinstrument\n";
    out << "piano\tinstrument\n";
  }
  LexicalResource res = LexicalResource::load(ResourceKind::ConceptNetConnect, path.string());
  std::unordered_set<std::string> stopwords = {"i", "the", "play"};

  std::vector<Sample> samples = {
      inference_sample("i play the drums", "instrument"),   // covered via drums
      inference_sample("i play the guitar", "instrument"),  // no edge: uncovered
  };
  CHECK(transformation_coverage(samples, res, stopwords) == doctest::Approx(50.0));
  // Stopwords may not serve as the source of an edge.
  std::vector<Sample> blocked = {inference_sample("i play daily", "instrument")};
  {
    std::ofstream out(path);
    out << "play\tinstrument\n";
  }
  LexicalResource res2 = LexicalResource::load(ResourceKind::ConceptNetConnect, path.string());
  CHECK(transformation_coverage(blocked, res2, stopwords) == doctest::Approx(0.0));
  CHECK(transformation_coverage({}, res, stopwords) == doctest::Approx(0.0));
}

TEST_CASE("coverage is invariant to sample order and bounded") {
  auto dir = temp_dir();
  auto path = dir / "order.tsv";
  {
    std::ofstream out(path);
    out << "swim\twater\n";
    out << "bike\twheels\n";
  }
  LexicalResource res = LexicalResource::load(ResourceKind::WordNetHypernym, path.string());
  std::vector<Sample> samples = {
      inference_sample("i swim at dawn", "water"),
      inference_sample("i bike to work", "wheels"),
      inference_sample("i nap at noon", "water"),
  };
  double a = transformation_coverage(samples, res, default_stopwords());
  std::reverse(samples.begin(), samples.end());
  double b = transformation_coverage(samples, res, default_stopwords());
  CHECK(a == doctest::Approx(b));
  CHECK(a >= 0.0);
  CHECK(a <= 100.0);
}

TEST_CASE("same_stem coverage accepts inflectional variants and verbatim tails") {
  std::vector<Sample> samples = {
      inference_sample("i love swimming in lakes", "swim"),   // stem match
      inference_sample("i love my dogs dearly", "dog"),       // stem match
      inference_sample("i stay out late", "nightowl"),        // no match
  };
  CHECK(same_stem_coverage(samples) == doctest::Approx(100.0 * 2.0 / 3.0));
  // A tail that appears verbatim always shares its own stem.
  std::vector<Sample> verbatim = {inference_sample("i play chess daily", "chess")};
  CHECK(same_stem_coverage(verbatim) == doctest::Approx(100.0));
}

TEST_CASE("directly identifiable share counts span-contained tails") {
  std::vector<Sample> samples;
  Sample a;
  a.sentence = "i work as a receptionist";
  a.gold = Triple{{"i"}, "[has_profession]", {"receptionist"}};
  samples.push_back(a);
  Sample b;
  b.sentence = "i answer phones all day";
  b.gold = Triple{{"i"}, "[has_profession]", {"receptionist"}};
  samples.push_back(b);
  Sample c;
  c.sentence = "my two dogs bark a lot";
  c.gold = Triple{{"i"}, "[have_pet]", {"two", "dogs"}};
  samples.push_back(c);
  CHECK(directly_identifiable_share(samples) == doctest::Approx(100.0 * 2.0 / 3.0));
}

TEST_CASE("parse files and tail histograms align positionally") {
  auto dir = temp_dir();
  auto path = dir / "parses.conll";
  {
    std::ofstream out(path);
    out << "i\tPRP\t2\tnsubj\n"
        << "love\tVBP\t0\troot\n"
        << "dogs\tNNS\t2\tdobj\n"
        << "\n"
        << "i\tPRP\t2\tnsubj\n"
        << "am\tVBP\t0\troot\n"
        << "tall\tJJ\t2\tacomp\n"
        << "\n"
        << "so\tRB\t2\tadvmod\n"
        << "true\tJJ\t0\troot\n";
  }
  auto parses = read_parse_file(path.string());
  REQUIRE(parses.size() == 3);
  CHECK(parses[0].tokens.size() == 3);
  CHECK(parses[0].tokens[2].token == "dogs");
  CHECK(parses[0].tokens[2].pos == "NNS");
  CHECK(parses[0].tokens[2].head_index == 2);
  CHECK(parses[0].tokens[2].dep_label == "dobj");

  std::vector<Sample> samples;
  Sample s1;
  s1.sentence = "i love dogs";
  s1.gold = Triple{{"i"}, "[like_animal]", {"dogs"}};
  Sample s2;
  s2.sentence = "i am tall";
  s2.gold = Triple{{"i"}, "[physical_attribute]", {"tall"}};
  Sample s3;
  s3.sentence = "so true";
  s3.gold = Triple{{"i"}, "[misc_attribute]", {"missing"}};  // not locatable
  samples = {s1, s2, s3};

  HistogramResult deps = tail_dependency_distribution(parses, samples);
  CHECK(deps.counts.at("dobj") == 1);
  CHECK(deps.counts.at("acomp") == 1);
  CHECK(deps.located_tokens == 2);
  CHECK(deps.alignment_failures == 1);

  HistogramResult pos = tail_pos_distribution(parses, samples);
  CHECK(pos.counts.at("NNS") == 1);
  CHECK(pos.counts.at("JJ") == 1);
  CHECK(histogram_to_table(pos).find("NNS") != std::string::npos);

  // Positional alignment demands equal counts.
  samples.pop_back();
  CHECK_THROWS_AS(tail_dependency_distribution(parses, samples), std::runtime_error);
}

TEST_CASE("stopword files load and defaults include function words") {
  const auto& defaults = default_stopwords();
  CHECK(defaults.count("the") == 1);
  CHECK(defaults.count("i") == 1);
  CHECK(defaults.count("receptionist") == 0);
  auto dir = temp_dir();
  auto path = dir / "stop.txt";
  {
    std::ofstream out(path);
    out << "alpha\nbeta\n\n";
  }
  auto loaded = load_stopwords(path.string());
  CHECK(loaded == std::unordered_set<std::string>{"alpha", "beta"});
  auto shipped = load_stopwords(GENRE_DATA_DIR "/stopwords.txt");
  CHECK(shipped.count("the") == 1);
}
