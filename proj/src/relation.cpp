#include "genre/relation.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "genre/tokenize.hpp"

namespace genre {

namespace {

// The frozen canonical set. The ten most frequent relations in the source
// corpus are all here; the remainder completes the closed set of 39.
const char* kCanonical[] = {
    "attend_school",
    "dislike",
    "employed_by_general",
    "favorite_color",
    "favorite_music_artist",
    "favorite_season",
    "favorite_show",
    "gender",
    "has_ability",
    "has_age",
    "has_degree",
    "has_hobby",
    "has_profession",
    "have_children",
    "have_family",
    "have_pet",
    "have_sibling",
    "have_vehicle",
    "like_activity",
    "like_animal",
    "like_drink",
    "like_food",
    "like_general",
    "like_goto",
    "like_movie",
    "like_music",
    "like_read",
    "like_sports",
    "live_in_citystatecountry",
    "live_in_general",
    "marital_status",
    "member_of",
    "misc_attribute",
    "nationality",
    "other",
    "physical_attribute",
    "place_origin",
    "want_do",
    "want_job",
};

// raw -> canonical merges. favourite_* variants of like_* style relations
// collapse onto their canonical counterpart.
const std::pair<const char*, const char*> kAliases[] = {
    {"favorite_activity", "like_activity"},
    {"favourite_activity", "like_activity"},
    {"favorite_animal", "like_animal"},
    {"favourite_animal", "like_animal"},
    {"favorite_book", "like_read"},
    {"favourite_book", "like_read"},
    {"favorite_drink", "like_drink"},
    {"favourite_drink", "like_drink"},
    {"favorite_food", "like_food"},
    {"favourite_food", "like_food"},
    {"favorite_hobby", "has_hobby"},
    {"favourite_hobby", "has_hobby"},
    {"favorite_movie", "like_movie"},
    {"favourite_movie", "like_movie"},
    {"favorite_music", "like_music"},
    {"favourite_music", "like_music"},
    {"favorite_sport", "like_sports"},
    {"favourite_sport", "like_sports"},
    {"favorite_place", "like_goto"},
    {"favourite_place", "like_goto"},
    {"like_watching", "favorite_show"},
    {"employed_by_company", "employed_by_general"},
    {"school_status", "attend_school"},
    {"previous_profession", "has_profession"},
    {"favourite_color", "favorite_color"},
    {"favourite_season", "favorite_season"},
    {"favourite_show", "favorite_show"},
    {"favourite_music_artist", "favorite_music_artist"},
    {"have_chidren", "have_children"},  // source-corpus spelling
};

// Under-specified relations that the pipeline removes outright.
const char* kDropped[] = {
    "favorite", "favourite", "have", "others", "own", "not_have", "want", "teach",
};

}  // namespace

std::string bare_relation_name(std::string_view raw) {
  std::string s = to_lower(raw);
  // Trim whitespace.
  auto b = s.find_first_not_of(" \t\r\n");
  auto e = s.find_last_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  s = s.substr(b, e - b + 1);
  if (s.size() >= 2 && s.front() == '[' && s.back() == ']') s = s.substr(1, s.size() - 2);
  return s;
}

RelationRegistry::RelationRegistry(std::vector<std::string> canonical_names,
                                   std::unordered_map<std::string, std::string> aliases,
                                   std::unordered_set<std::string> dropped)
    : aliases_(std::move(aliases)), dropped_(std::move(dropped)) {
  for (auto& n : canonical_names) {
    std::string bracketed = "[" + bare_relation_name(n) + "]";
    names_.push_back(bracketed);
  }
  std::sort(names_.begin(), names_.end());
  names_.erase(std::unique(names_.begin(), names_.end()), names_.end());
  name_set_.insert(names_.begin(), names_.end());
}

const RelationRegistry& RelationRegistry::builtin() {
  static const RelationRegistry* instance = [] {
    std::vector<std::string> names(std::begin(kCanonical), std::end(kCanonical));
    std::unordered_map<std::string, std::string> aliases;
    for (const auto& [raw, canon] : kAliases) aliases.emplace(raw, canon);
    std::unordered_set<std::string> dropped(std::begin(kDropped), std::end(kDropped));
    return new RelationRegistry(std::move(names), std::move(aliases), std::move(dropped));
  }();
  return *instance;
}

bool RelationRegistry::contains(std::string_view bracketed_name) const {
  return name_set_.count(std::string(bracketed_name)) > 0;
}

std::optional<std::string> RelationRegistry::canonicalize(std::string_view raw) const {
  std::string bare = bare_relation_name(raw);
  if (bare.empty()) return std::nullopt;
  if (dropped_.count(bare)) return std::nullopt;
  auto it = aliases_.find(bare);
  if (it != aliases_.end()) bare = it->second;
  std::string bracketed = "[" + bare + "]";
  if (name_set_.count(bracketed)) return bracketed;
  return std::nullopt;
}

RelationRegistry RelationRegistry::from_files(const std::string& registry_path,
                                              const std::string& alias_path) {
  std::ifstream reg(registry_path);
  if (!reg) throw std::runtime_error("cannot open relation registry: " + registry_path);
  std::vector<std::string> names;
  std::string line;
  while (std::getline(reg, line)) {
    std::string bare = bare_relation_name(line);
    if (!bare.empty() && bare[0] != '#') names.push_back(bare);
  }
  std::unordered_map<std::string, std::string> aliases;
  std::unordered_set<std::string> dropped;
  std::ifstream al(alias_path);
  if (!al) throw std::runtime_error("cannot open relation alias table: " + alias_path);
  while (std::getline(al, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) continue;
    std::string raw = bare_relation_name(line.substr(0, tab));
    std::string canon = bare_relation_name(line.substr(tab + 1));
    if (canon == "-") {
      dropped.insert(raw);
    } else {
      aliases.emplace(raw, canon);
    }
  }
  return RelationRegistry(std::move(names), std::move(aliases), std::move(dropped));
}

void RelationRegistry::save(const std::string& registry_path, const std::string& alias_path) const {
  std::ofstream reg(registry_path);
  for (const auto& n : names_) reg << bare_relation_name(n) << "\n";
  std::ofstream al(alias_path);
  std::vector<std::pair<std::string, std::string>> rows(aliases_.begin(), aliases_.end());
  for (const auto& d : dropped_) rows.emplace_back(d, "-");
  std::sort(rows.begin(), rows.end());
  for (const auto& [raw, canon] : rows) al << raw << "\t" << canon << "\n";
}

}  // namespace genre
