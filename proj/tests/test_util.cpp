#include "test_util.hpp"

#include <stdexcept>

#include "genre/tokenize.hpp"

namespace genre::testutil {

namespace {

struct TemplateGroup {
  std::string relation;                 // canonical bracketed name
  std::vector<std::string> frames;      // contain one {} placeholder
  std::vector<std::string> fillers;     // base trigger words
  bool mapped_tail = false;             // inference: tail = filler + "ness"
};

std::string instantiate(const std::string& frame, const std::string& filler) {
  auto pos = frame.find("{}");
  if (pos == std::string::npos) throw std::logic_error("frame lacks placeholder");
  return frame.substr(0, pos) + filler + frame.substr(pos + 2);
}

// Extraction groups: tail appears verbatim in the sentence. The last two
// groups form an ambiguous pair sharing frame vocabulary; the marker word
// "seriously" flags the less frequent relation.
std::vector<TemplateGroup> extraction_groups() {
  return {
      {"[like_food]",
       {"i really savor eating {} every week", "i think {} tastes best at dinner"},
       {"pizza", "pasta", "sushi", "salad", "tacos", "curry", "soup", "bread", "cheese",
        "rice"}},
      {"[have_pet]",
       {"i cuddle my {} on the couch daily", "i adopted a {} from the shelter recently"},
       {"dog", "cat", "hamster", "parrot", "rabbit", "turtle", "puppy", "kitten", "pony",
        "lizard"}},
      {"[like_music]",
       {"i listen to {} each morning loudly", "i hum {} tunes around the kitchen"},
       {"jazz", "rap", "rock", "blues", "metal", "opera", "folk", "techno", "reggae",
        "country"}},
      {"[has_profession]",
       {"i work as a {} downtown nowadays", "i earn a living as a {}"},
       {"nurse", "teacher", "lawyer", "plumber", "barista", "chef", "clerk", "guard",
        "painter", "driver"}},
      {"[like_activity]",
       {"i spend my weekends on {} mostly", "i fill weekends doing {} outdoors"},
       {"hiking", "chess", "knitting", "fishing", "sketching", "gardening", "cycling",
        "surfing", "baking", "archery"}},
      {"[has_hobby]",
       {"i seriously truly spend my weekends on {}"},
       {"hiking", "chess", "knitting", "fishing", "sketching", "gardening", "cycling",
        "surfing", "baking", "archery"}},
  };
}

// Inference groups: the gold tail never appears in the sentence; it is a
// deterministic function of the trigger word.
std::vector<TemplateGroup> inference_groups() {
  return {
      {"[physical_attribute]",
       {"people i meet call me {} sometimes", "everyone says i look {} lately"},
       {"lanky", "wiry", "sturdy", "slender", "brawny", "petite", "lean", "stocky",
        "nimble", "spry"},
       true},
      {"[misc_attribute]",
       {"friends describe me as {} most days", "my family thinks i am {} deep down"},
       {"cheerful", "stubborn", "curious", "patient", "daring", "gentle", "honest",
        "modest", "witty", "loyal"},
       true},
      {"[like_general]",
       {"i keep coming back to {} things", "anything {} makes my day better"},
       {"shiny", "quiet", "colorful", "vintage", "cozy", "minimal", "rustic", "sleek",
        "ornate", "playful"},
       true},
      {"[want_do]",
       {"someday i hope to try {} abroad", "i dream of {} once i retire"},
       {"sailing", "climbing", "painting", "touring", "farming", "writing", "diving",
        "trekking", "foraging", "carving"},
       true},
      {"[has_hobby]",
       {"i seriously truly hope to try {} abroad"},
       {"sailing", "climbing", "painting", "touring", "farming", "writing", "diving",
        "trekking", "foraging", "carving"},
       true},
  };
}

std::string mapped_tail(const std::string& filler) { return filler + "ness"; }

}  // namespace

SyntheticCorpus make_synthetic_corpus(int templates, unsigned seed, Task task) {
  auto groups = task == Task::Extraction ? extraction_groups() : inference_groups();
  size_t frame_slots = 0;
  for (const auto& g : groups) frame_slots += g.frames.size();
  // Extend filler lists until frame_slots * fillers >= templates.
  const size_t fillers_needed =
      (static_cast<size_t>(templates) + frame_slots - 1) / frame_slots;
  for (auto& g : groups) {
    const size_t base = g.fillers.size();
    while (g.fillers.size() < fillers_needed) {
      g.fillers.push_back(g.fillers[g.fillers.size() % base] + "o" +
                          std::to_string(g.fillers.size() / base));
    }
    g.fillers.resize(fillers_needed);
  }

  SyntheticCorpus corpus;
  std::mt19937 rng(seed);
  size_t counter = 0;
  size_t frame_ordinal = 0;
  for (const auto& g : groups) {
    for (const auto& frame : g.frames) {
      for (size_t filler_idx = 0; filler_idx < g.fillers.size(); ++filler_idx) {
        const auto& filler = g.fillers[filler_idx];
        Sample s;
        s.source_id = "syn-" + std::to_string(counter);
        s.sentence = instantiate(frame, filler);
        s.gold.head = {"i"};
        s.gold.relation = g.relation;
        s.gold.tail = {g.mapped_tail ? mapped_tail(filler) : filler};
        s.task = task;
        // Roughly every 7th combination is held out. The offset rotates
        // with the frame so a filler held out under one frame still shows
        // up in training under the others, whatever the list sizes are.
        if ((filler_idx + 3 * frame_ordinal) % 7 == 3) {
          s.split = Split::Test;
          corpus.test.push_back(s);
        } else {
          s.split = Split::Train;
          corpus.train.push_back(s);
        }
        ++counter;
      }
      ++frame_ordinal;
    }
  }
  (void)rng;
  return corpus;
}

}  // namespace genre::testutil
