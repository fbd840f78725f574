#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace genre {

// Closed registry of canonical relations plus the alias/merge table that
// maps raw corpus relation strings onto it. Canonical names are stored in
// bracketed token form, e.g. "[has_profession]".
//
// The registry is immutable after construction. canonicalize() is total:
// unknown or deliberately removed relations come back as std::nullopt,
// never as an exception.
class RelationRegistry {
 public:
  // The frozen default registry (39 relations) with its merge table.
  static const RelationRegistry& builtin();

  // Load from a one-relation-per-line registry file and a two-column
  // tab-separated alias file (raw<TAB>canonical, canonical "-" = drop).
  static RelationRegistry from_files(const std::string& registry_path,
                                     const std::string& alias_path);

  RelationRegistry(std::vector<std::string> canonical_names,
                   std::unordered_map<std::string, std::string> aliases,
                   std::unordered_set<std::string> dropped);

  bool contains(std::string_view bracketed_name) const;

  // Maps a raw relation string (with or without brackets, any case) to its
  // canonical bracketed form, or nullopt when the relation is merged away,
  // under-specified, or unknown.
  std::optional<std::string> canonicalize(std::string_view raw) const;

  const std::vector<std::string>& relations() const { return names_; }
  size_t size() const { return names_.size(); }

  void save(const std::string& registry_path, const std::string& alias_path) const;

 private:
  std::vector<std::string> names_;                       // bracketed, sorted
  std::unordered_set<std::string> name_set_;             // bracketed
  std::unordered_map<std::string, std::string> aliases_; // bare -> bare
  std::unordered_set<std::string> dropped_;              // bare
};

// Strips surrounding brackets if present and lowercases.
std::string bare_relation_name(std::string_view raw);

}  // namespace genre
