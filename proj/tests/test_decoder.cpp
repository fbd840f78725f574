#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <random>
#include <set>

#include "genre/decoder.hpp"
#include "genre/pipeline.hpp"
#include "genre/tokenize.hpp"
#include "test_util.hpp"

using namespace genre;

namespace {

std::set<std::string> allowed_set(const DecodeState& state, const DecodeConfig& cfg,
                                  const std::vector<std::string>& sentence,
                                  const RelationTailIndex& index, const Vocabulary& vocab,
                                  const RelationRegistry& reg) {
  std::set<std::string> out;
  for (int id : allowed_tokens(state, cfg, sentence, index, vocab, reg)) {
    out.insert(vocab.token_of(id));
  }
  return out;
}

}  // namespace

TEST_CASE("relation tail index stores and replays training pairs") {
  auto corpus = testutil::make_synthetic_corpus(80, 9, Task::Inference);
  RelationTailIndex index = build_relation_tail_index(corpus.train);
  CHECK_FALSE(index.empty());
  for (const auto& s : corpus.train) {
    CHECK(index.has_pair(s.gold.relation, s.gold.tail));
  }
  CHECK_FALSE(index.has_pair("[has_age]", {"registered", "nowhere"}));
  // Continuations from the empty prefix are exactly the stored first tokens.
  auto first = index.continuations(corpus.train.front().gold.relation, {});
  CHECK_FALSE(first.empty());
  CHECK(index.max_recall_on(corpus.train) == doctest::Approx(1.0));
}

TEST_CASE("empty index admits nothing") {
  RelationTailIndex index;
  CHECK(index.empty());
  CHECK_FALSE(index.has_pair("[has_age]", {"60"}));
  CHECK(index.continuations("[has_age]", {}).empty());
  CHECK(index.max_recall_on({}) == doctest::Approx(0.0));
  auto corpus = testutil::make_synthetic_corpus(30, 9, Task::Inference);
  CHECK(index.max_recall_on(corpus.test) == doctest::Approx(0.0));
}

TEST_CASE("index roundtrips through its tsv file") {
  RelationTailIndex index;
  index.insert("[have_pet]", {"two", "dogs"});
  index.insert("[have_pet]", {"two"});
  index.insert("[has_age]", {"60"});
  auto path = std::filesystem::temp_directory_path() / "genre_index_test.tsv";
  index.save(path.string());
  RelationTailIndex back = RelationTailIndex::load(path.string());
  CHECK(back.relation_count() == 2);
  CHECK(back.has_pair("[have_pet]", {"two", "dogs"}));
  CHECK(back.has_pair("[have_pet]", {"two"}));
  CHECK(back.has_pair("[has_age]", {"60"}));
  CHECK_FALSE(back.has_pair("[have_pet]", {"dogs"}));
}

TEST_CASE("grammar masks follow the flattened format") {
  const auto& reg = RelationRegistry::builtin();
  std::vector<Sample> vocab_samples;
  Sample s;
  s.sentence = "i wear a short skinny coat";
  s.gold = Triple{{"i"}, "[physical_attribute]", {"short"}};
  vocab_samples.push_back(s);
  Sample other;
  other.sentence = "my dog wears boots";
  other.gold = Triple{{"i"}, "[have_pet]", {"dog"}};
  vocab_samples.push_back(other);
  Vocabulary vocab = build_vocabulary(vocab_samples, reg);
  RelationTailIndex index;
  index.insert("[physical_attribute]", {"short"});
  index.insert("[physical_attribute]", {"skinny"});
  index.insert("[physical_attribute]", {"wears", "boots"});
  DecodeConfig cfg;
  cfg.mode = Task::Extraction;
  auto sentence = tokenize(s.sentence);

  DecodeState at_start;
  CHECK(allowed_set(at_start, cfg, sentence, index, vocab, reg) ==
        std::set<std::string>{"[head]"});

  DecodeState in_head;
  in_head.phase = DecodePhase::InHead;
  auto head_opts = allowed_set(in_head, cfg, sentence, index, vocab, reg);
  // Empty head so far: the field may not close yet.
  CHECK(head_opts.count("[reln]") == 0);
  CHECK(head_opts == std::set<std::string>(sentence.begin(), sentence.end()));
  in_head.field_tokens = 1;
  CHECK(allowed_set(in_head, cfg, sentence, index, vocab, reg).count("[reln]") == 1);

  DecodeState at_relation;
  at_relation.phase = DecodePhase::AtRelation;
  auto rel_opts = allowed_set(at_relation, cfg, sentence, index, vocab, reg);
  CHECK(rel_opts.size() == 39);
  for (const auto& r : rel_opts) CHECK(reg.contains(r));

  DecodeState after_relation;
  after_relation.phase = DecodePhase::AfterRelation;
  after_relation.relation = "[physical_attribute]";
  CHECK(allowed_set(after_relation, cfg, sentence, index, vocab, reg) ==
        std::set<std::string>{"[tail]"});

  // Extraction tails come from the sentence bag; closing needs >= 1 token.
  DecodeState in_tail = after_relation;
  in_tail.phase = DecodePhase::InTail;
  auto tail_opts = allowed_set(in_tail, cfg, sentence, index, vocab, reg);
  CHECK(tail_opts.count("short") == 1);
  CHECK(tail_opts.count("skinny") == 1);
  CHECK(tail_opts.count("dog") == 0);
  CHECK(tail_opts.count("[eos]") == 0);
  in_tail.field_tokens = 1;
  in_tail.tail_prefix = {"short"};
  CHECK(allowed_set(in_tail, cfg, sentence, index, vocab, reg).count("[eos]") == 1);

  // Inference tails walk the relation index instead.
  DecodeConfig inf_cfg;
  inf_cfg.mode = Task::Inference;
  DecodeState inf_tail;
  inf_tail.phase = DecodePhase::InTail;
  inf_tail.relation = "[physical_attribute]";
  auto inf_opts = allowed_set(inf_tail, inf_cfg, sentence, index, vocab, reg);
  CHECK(inf_opts == std::set<std::string>{"short", "skinny", "wears"});
  inf_tail.tail_prefix = {"wears"};
  inf_tail.field_tokens = 1;
  auto cont = allowed_set(inf_tail, inf_cfg, sentence, index, vocab, reg);
  // "wears" alone is not a stored tail, so the sequence may not close.
  CHECK(cont == std::set<std::string>{"boots"});
  inf_tail.tail_prefix = {"short"};
  CHECK(allowed_set(inf_tail, inf_cfg, sentence, index, vocab, reg) ==
        std::set<std::string>{"[eos]"});

  DecodeState done;
  done.phase = DecodePhase::Done;
  CHECK_THROWS_AS((void)allowed_tokens(done, cfg, sentence, index, vocab, reg),
                  std::logic_error);
}

TEST_CASE("strict span tails require contiguous sentence matches") {
  const auto& reg = RelationRegistry::builtin();
  std::vector<Sample> vocab_samples;
  Sample s;
  s.sentence = "i have two big dogs";
  s.gold = Triple{{"i"}, "[have_pet]", {"two", "big", "dogs"}};
  vocab_samples.push_back(s);
  Vocabulary vocab = build_vocabulary(vocab_samples, reg);
  RelationTailIndex index;
  DecodeConfig cfg;
  cfg.mode = Task::Extraction;
  cfg.strict_span_tails = true;
  auto sentence = tokenize(s.sentence);

  DecodeState in_tail;
  in_tail.phase = DecodePhase::InTail;
  in_tail.field_tokens = 1;
  in_tail.tail_prefix = {"two"};
  auto opts = allowed_set(in_tail, cfg, sentence, index, vocab, reg);
  // Only the token right after "two" continues the span; the bag variant
  // would also offer "i", "have" and "dogs".
  CHECK(opts == std::set<std::string>{"big", "[eos]"});
}

TEST_CASE("beam decode is deterministic and respects its masks") {
  const auto& reg = RelationRegistry::builtin();
  auto corpus = testutil::make_synthetic_corpus(80, 21, Task::Extraction);
  CountScorer scorer =
      train_generator(TrainConfig::defaults_for(Task::Extraction), corpus.train, {}, reg);
  RelationTailIndex index;
  DecodeConfig cfg;
  cfg.mode = Task::Extraction;

  const auto& sample = corpus.test.front();
  auto sentence = tokenize(sample.sentence);
  CandidateSet a = beam_decode(scorer, sample.source_id, sentence, cfg, index, reg);
  CandidateSet b = beam_decode(scorer, sample.source_id, sentence, cfg, index, reg);
  REQUIRE(a.candidates.size() == b.candidates.size());
  REQUIRE(!a.candidates.empty());
  CHECK(a.candidates.size() <= static_cast<size_t>(cfg.top_l));
  for (size_t i = 0; i < a.candidates.size(); ++i) {
    CHECK(a.candidates[i].tokens == b.candidates[i].tokens);
    CHECK(a.candidates[i].score == b.candidates[i].score);
    CHECK(a.candidates[i].rank == static_cast<int>(i));
  }
  // Best-first ordering.
  for (size_t i = 1; i < a.candidates.size(); ++i) {
    CHECK(a.candidates[i - 1].score >= a.candidates[i].score);
  }
  // Every constrained extraction candidate parses, and its tail tokens all
  // come from the sentence.
  std::set<std::string> bag(sentence.begin(), sentence.end());
  for (const auto& c : a.candidates) {
    REQUIRE(c.parsed.has_value());
    for (const auto& t : c.parsed->tail) CHECK(bag.count(t) == 1);
    CHECK(reg.contains(c.parsed->relation));
  }
}

TEST_CASE("beam width one with a single slot is greedy") {
  const auto& reg = RelationRegistry::builtin();
  auto corpus = testutil::make_synthetic_corpus(60, 23, Task::Extraction);
  CountScorer scorer =
      train_generator(TrainConfig::defaults_for(Task::Extraction), corpus.train, {}, reg);
  RelationTailIndex index;
  DecodeConfig greedy;
  greedy.mode = Task::Extraction;
  greedy.beam_width = 1;
  greedy.top_l = 1;
  const auto& sample = corpus.train.front();
  auto set = beam_decode(scorer, sample.source_id, tokenize(sample.sentence), greedy, index, reg);
  REQUIRE(set.candidates.size() == 1);
  REQUIRE(set.candidates.front().parsed.has_value());

  // The greedy sequence must appear as one of the wide-beam candidates.
  DecodeConfig wide;
  wide.mode = Task::Extraction;
  auto wide_set =
      beam_decode(scorer, sample.source_id, tokenize(sample.sentence), wide, index, reg);
  bool found = false;
  for (const auto& c : wide_set.candidates) {
    if (c.tokens == set.candidates.front().tokens) found = true;
  }
  CHECK(found);
}

TEST_CASE("recall at k is monotone and k=1 matches the top candidate") {
  std::mt19937 rng(31);
  const auto& reg = RelationRegistry::builtin();
  std::unordered_map<std::string, Triple> golds;
  std::vector<CandidateSet> sets;
  std::uniform_int_distribution<int> n_cand(0, 6), coin(0, 1);
  for (int i = 0; i < 60; ++i) {
    std::string id = "r-" + std::to_string(i);
    Triple gold = testutil::random_triple(rng);
    golds.emplace(id, gold);
    CandidateSet set;
    set.source_id = id;
    int n = n_cand(rng);
    for (int rank = 0; rank < n; ++rank) {
      Candidate c;
      Triple t = coin(rng) ? gold : testutil::random_triple(rng);
      c.tokens = flatten(t, reg).tokens;
      c.parsed = t;
      c.rank = rank;
      c.score = -static_cast<double>(rank);
      set.candidates.push_back(c);
    }
    sets.push_back(set);
  }
  double prev = 0.0;
  for (int k = 1; k <= 8; ++k) {
    double r = max_possible_recall(sets, golds, k);
    CHECK(r >= prev);
    CHECK(r <= 1.0);
    prev = r;
  }
  // k = 1 is by definition the share of sets whose rank-0 candidate is gold.
  size_t hits = 0;
  for (const auto& set : sets) {
    if (!set.candidates.empty() && set.candidates.front().parsed &&
        *set.candidates.front().parsed == golds.at(set.source_id)) {
      ++hits;
    }
  }
  CHECK(max_possible_recall(sets, golds, 1) ==
        doctest::Approx(static_cast<double>(hits) / static_cast<double>(sets.size())));
}

TEST_CASE("candidate files roundtrip") {
  const auto& reg = RelationRegistry::builtin();
  auto corpus = testutil::make_synthetic_corpus(40, 27, Task::Extraction);
  CountScorer scorer =
      train_generator(TrainConfig::defaults_for(Task::Extraction), corpus.train, {}, reg);
  RelationTailIndex index;
  DecodeConfig cfg;
  std::vector<CandidateSet> sets;
  for (size_t i = 0; i < 3; ++i) {
    const auto& s = corpus.test[i];
    sets.push_back(beam_decode(scorer, s.source_id, tokenize(s.sentence), cfg, index, reg));
  }
  auto path = std::filesystem::temp_directory_path() / "genre_candidates_test.jsonl";
  write_candidates(path.string(), sets);
  auto back = read_candidates(path.string(), reg);
  REQUIRE(back.size() == sets.size());
  for (size_t i = 0; i < sets.size(); ++i) {
    CHECK(back[i].source_id == sets[i].source_id);
    REQUIRE(back[i].candidates.size() == sets[i].candidates.size());
    for (size_t j = 0; j < sets[i].candidates.size(); ++j) {
      CHECK(back[i].candidates[j].tokens == sets[i].candidates[j].tokens);
      CHECK(back[i].candidates[j].score ==
            doctest::Approx(sets[i].candidates[j].score).epsilon(1e-12));
      CHECK(back[i].candidates[j].parsed == sets[i].candidates[j].parsed);
    }
  }
}
