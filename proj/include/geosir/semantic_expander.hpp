#pragma once

#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "geosir/gazetteer.hpp"
#include "geosir/geo.hpp"

namespace geosir {

struct Concept {
  std::string id;
  std::string preferred;
  std::vector<std::string> synonyms;
  std::optional<std::string> parent;  // may name a concept not in the lexicon

  friend bool operator==(const Concept&, const Concept&) = default;
};

// A lexicon term occurrence in a token sequence: tokens [start, end).
struct ConceptMatch {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string concept_id;
};

// Domain concept vocabulary with a broader/narrower hierarchy.
class ConceptLexicon {
 public:
  ConceptLexicon() = default;

  // Throws InvalidArgument, DuplicateId, CyclicHierarchy or AmbiguousTerm.
  static ConceptLexicon from_concepts(std::vector<Concept> concepts);
  // JSON array of {id, preferred, synonyms, parent?}. Malformed JSON or
  // fields raise ParseError.
  static ConceptLexicon load_json(std::istream& in);
  void write_json(std::ostream& out) const;

  std::size_t size() const noexcept { return concepts_.size(); }
  bool empty() const noexcept { return concepts_.empty(); }
  const std::map<std::string, Concept>& concepts() const noexcept { return concepts_; }
  const Concept* find(const std::string& id) const;
  // Concept owning a name_key()-normalized term.
  const Concept* concept_for_key(const std::string& key) const;

  // `id` and every concept below it, following parent links downward.
  std::set<std::string> subtree(const std::string& id) const;
  const std::vector<std::string>& children(const std::string& id) const;

  // Greedy longest, left-to-right, non-overlapping term matches.
  std::vector<ConceptMatch> match(std::span<const std::string> tokens) const;

 private:
  std::map<std::string, Concept> concepts_;
  std::unordered_map<std::string, std::string> term_index_;
  std::map<std::string, std::vector<std::string>> children_;
  std::size_t max_term_tokens_ = 0;
};

// One conjunct of an expanded query: any of `terms` satisfies it.
struct TermGroup {
  std::set<std::string> terms;
  std::optional<std::string> concept_id;  // set when a lexicon term matched

  friend bool operator==(const TermGroup&, const TermGroup&) = default;
};

// Synonym expansion. A matched concept contributes the surface tokens, the
// preferred and synonym tokens of itself and of every concept below it.
// Unmatched tokens become singleton groups.
std::vector<TermGroup> expand_terms(std::span<const std::string> tokens, const ConceptLexicon& lex);

std::vector<std::set<std::string>> term_sets(std::span<const TermGroup> groups);

enum class MatchKind { Canonical, Alternate };

struct PlaceSense {
  PlaceId id = 0;
  std::string matched_name;
  MatchKind kind = MatchKind::Canonical;
};

// Homonym resolution: nearest to `context` when given, else most populous;
// then canonical over alternate matches; then smallest id. Throws
// UnknownPlace.
PlaceSense resolve_place(std::string_view name, const Gazetteer& g,
                         const std::optional<GeoPoint>& context = std::nullopt);

inline constexpr double kDefaultFootprintPadDeg = 0.1;

// Box around the entry and all of its descendants, padded by `pad_deg` and
// clamped to the valid coordinate range. Throws UnknownId, or
// InvalidArgument for a negative pad.
BBox place_footprint(PlaceId id, const Gazetteer& g, double pad_deg = kDefaultFootprintPadDeg);

}  // namespace geosir
