#include "geosir/semantic_expander.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "json.hpp"

#include "geosir/error.hpp"
#include "geosir/text.hpp"

namespace geosir {

namespace {

const std::vector<std::string> kNone;

void add_tokens(std::set<std::string>& out, std::string_view text) {
  for (auto& t : tokenize(text)) out.insert(std::move(t));
}

}  // namespace

ConceptLexicon ConceptLexicon::from_concepts(std::vector<Concept> concepts) {
  ConceptLexicon lex;
  for (auto& c : concepts) {
    if (c.id.empty()) throw InvalidArgument("concept id is empty");
    if (name_key(c.preferred).empty()) {
      throw InvalidArgument("concept " + c.id + " has no usable preferred term");
    }
    const std::string id = c.id;
    if (!lex.concepts_.emplace(id, std::move(c)).second) {
      throw DuplicateId("duplicate concept id " + id);
    }
  }
  for (const auto& [id, c] : lex.concepts_) {
    std::vector<std::string> terms{c.preferred};
    terms.insert(terms.end(), c.synonyms.begin(), c.synonyms.end());
    for (const auto& term : terms) {
      const auto tokens = tokenize(term);
      if (tokens.empty()) throw InvalidArgument("concept " + id + " has an empty term");
      const std::string key = join_tokens(tokens);
      auto [it, fresh] = lex.term_index_.emplace(key, id);
      if (!fresh && it->second != id) {
        throw AmbiguousTerm("term '" + key + "' belongs to both " + it->second + " and " + id);
      }
      lex.max_term_tokens_ = std::max(lex.max_term_tokens_, tokens.size());
    }
    if (c.parent) {
      if (*c.parent == id) throw CyclicHierarchy("concept " + id + " is its own parent");
      lex.children_[*c.parent].push_back(id);
    }
  }
  for (const auto& [id, c] : lex.concepts_) {
    std::set<std::string> seen{id};
    const Concept* cur = &c;
    while (cur->parent) {
      if (!seen.insert(*cur->parent).second) {
        throw CyclicHierarchy("concept hierarchy cycle through " + *cur->parent);
      }
      cur = lex.find(*cur->parent);
      if (cur == nullptr) break;
    }
  }
  return lex;
}

ConceptLexicon ConceptLexicon::load_json(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(0, std::string("invalid lexicon JSON: ") + e.what());
  }
  if (!doc.is_array()) throw ParseError(0, "lexicon must be a JSON array");
  std::vector<Concept> concepts;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& obj = doc[i];
    const std::string where = "lexicon entry " + std::to_string(i) + ": ";
    if (!obj.is_object()) throw ParseError(0, where + "expected an object");
    Concept c;
    auto str = [&](const char* key) -> std::string {
      auto it = obj.find(key);
      if (it == obj.end() || !it->is_string()) {
        throw ParseError(0, where + "'" + key + "' must be a string");
      }
      return it->get<std::string>();
    };
    c.id = str("id");
    c.preferred = str("preferred");
    if (auto it = obj.find("synonyms"); it != obj.end()) {
      if (!it->is_array()) throw ParseError(0, where + "'synonyms' must be an array");
      for (const auto& s : *it) {
        if (!s.is_string()) throw ParseError(0, where + "synonyms must be strings");
        c.synonyms.push_back(s.get<std::string>());
      }
    }
    if (auto it = obj.find("parent"); it != obj.end() && !it->is_null()) {
      if (!it->is_string()) throw ParseError(0, where + "'parent' must be a string");
      c.parent = it->get<std::string>();
    }
    concepts.push_back(std::move(c));
  }
  try {
    return from_concepts(std::move(concepts));
  } catch (const InvalidArgument& e) {
    throw ParseError(0, e.what());
  }
}

void ConceptLexicon::write_json(std::ostream& out) const {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& [id, c] : concepts_) {
    nlohmann::ordered_json obj;
    obj["id"] = c.id;
    obj["preferred"] = c.preferred;
    obj["synonyms"] = c.synonyms;
    if (c.parent) obj["parent"] = *c.parent;
    arr.push_back(std::move(obj));
  }
  out << arr.dump(2) << '\n';
}

const Concept* ConceptLexicon::find(const std::string& id) const {
  auto it = concepts_.find(id);
  return it == concepts_.end() ? nullptr : &it->second;
}

const Concept* ConceptLexicon::concept_for_key(const std::string& key) const {
  auto it = term_index_.find(key);
  return it == term_index_.end() ? nullptr : find(it->second);
}

const std::vector<std::string>& ConceptLexicon::children(const std::string& id) const {
  auto it = children_.find(id);
  return it == children_.end() ? kNone : it->second;
}

std::set<std::string> ConceptLexicon::subtree(const std::string& id) const {
  std::set<std::string> out;
  std::vector<std::string> stack{id};
  while (!stack.empty()) {
    std::string cur = std::move(stack.back());
    stack.pop_back();
    if (!out.insert(cur).second) continue;
    for (const auto& c : children(cur)) stack.push_back(c);
  }
  return out;
}

std::vector<ConceptMatch> ConceptLexicon::match(std::span<const std::string> tokens) const {
  std::vector<ConceptMatch> out;
  std::size_t i = 0;
  while (i < tokens.size()) {
    bool matched = false;
    const std::size_t longest = std::min(max_term_tokens_, tokens.size() - i);
    for (std::size_t n = longest; n >= 1; --n) {
      std::string key = tokens[i];
      for (std::size_t k = 1; k < n; ++k) {
        key += ' ';
        key += tokens[i + k];
      }
      auto it = term_index_.find(key);
      if (it != term_index_.end()) {
        out.push_back({i, i + n, it->second});
        i += n;
        matched = true;
        break;
      }
    }
    if (!matched) ++i;
  }
  return out;
}

std::vector<TermGroup> expand_terms(std::span<const std::string> tokens, const ConceptLexicon& lex) {
  std::vector<TermGroup> groups;
  const auto matches = lex.match(tokens);
  std::size_t next = 0;
  std::size_t i = 0;
  while (i < tokens.size()) {
    if (next < matches.size() && matches[next].start == i) {
      const ConceptMatch& m = matches[next++];
      TermGroup g;
      g.concept_id = m.concept_id;
      for (std::size_t k = m.start; k < m.end; ++k) g.terms.insert(tokens[k]);
      for (const auto& id : lex.subtree(m.concept_id)) {
        const Concept* c = lex.find(id);
        if (c == nullptr) continue;
        add_tokens(g.terms, c->preferred);
        for (const auto& s : c->synonyms) add_tokens(g.terms, s);
      }
      groups.push_back(std::move(g));
      i = m.end;
    } else {
      groups.push_back(TermGroup{{tokens[i]}, std::nullopt});
      ++i;
    }
  }
  return groups;
}

std::vector<std::set<std::string>> term_sets(std::span<const TermGroup> groups) {
  std::vector<std::set<std::string>> out;
  out.reserve(groups.size());
  for (const auto& g : groups) out.push_back(g.terms);
  return out;
}

PlaceSense resolve_place(std::string_view name, const Gazetteer& g,
                         const std::optional<GeoPoint>& context) {
  const std::string key = name_key(name);
  const auto* ids = g.lookup_key(key);
  if (ids == nullptr || ids->empty()) {
    throw UnknownPlace("no gazetteer entry named '" + std::string(name) + "'");
  }
  struct Candidate {
    const GazetteerEntry* entry;
    double distance;
    bool canonical;
  };
  std::vector<Candidate> candidates;
  for (PlaceId id : *ids) {
    const GazetteerEntry& e = g.at(id);
    const double d = context ? haversine_km(*context, e.location) : 0.0;
    candidates.push_back({&e, d, name_key(e.name) == key});
  }
  // Lower tuple wins.
  auto rank = [&](const Candidate& c) {
    return std::make_tuple(c.distance, -c.entry->population, c.canonical ? 0 : 1, c.entry->id);
  };
  const auto best = std::min_element(candidates.begin(), candidates.end(),
                                     [&](const Candidate& a, const Candidate& b) { return rank(a) < rank(b); });
  PlaceSense sense;
  sense.id = best->entry->id;
  sense.kind = best->canonical ? MatchKind::Canonical : MatchKind::Alternate;
  if (best->canonical) {
    sense.matched_name = best->entry->name;
  } else {
    for (const auto& alt : best->entry->alt_names) {
      if (name_key(alt) == key) {
        sense.matched_name = alt;
        break;
      }
    }
  }
  return sense;
}

BBox place_footprint(PlaceId id, const Gazetteer& g, double pad_deg) {
  if (!(pad_deg >= 0.0) || !std::isfinite(pad_deg)) throw InvalidArgument("pad must be non-negative");
  const GazetteerEntry& e = g.at(id);
  BBox box = BBox::of(e.location);
  for (PlaceId d : g.descendants(id)) box.expand(g.at(d).location);
  box.min_lat = std::max(-90.0, box.min_lat - pad_deg);
  box.min_lon = std::max(-180.0, box.min_lon - pad_deg);
  box.max_lat = std::min(90.0, box.max_lat + pad_deg);
  box.max_lon = std::min(180.0, box.max_lon + pad_deg);
  return box;
}

}  // namespace geosir
