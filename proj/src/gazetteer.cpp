#include "geosir/gazetteer.hpp"

#include <algorithm>
#include <unordered_set>

#include "geosir/error.hpp"
#include "geosir/strings.hpp"
#include "geosir/text.hpp"

namespace geosir {

namespace vocab {
std::string gn(std::string_view local) { return std::string(kGeoNames) + std::string(local); }
std::string wgs84(std::string_view local) { return std::string(kWgs84) + std::string(local); }
std::string xsd(std::string_view local) { return std::string(kXsd) + std::string(local); }
}  // namespace vocab

namespace {

const std::vector<PlaceId> kNoChildren;

bool has_control(std::string_view s) {
  return s.find_first_of("\t\n\r") != std::string_view::npos;
}

// Empty string when the entry is well-formed, else the reason.
std::string entry_problem(const GazetteerEntry& e) {
  if (e.id <= 0) return "id must be a positive integer";
  if (e.name.empty()) return "name is empty";
  if (has_control(e.name)) return "name contains a tab or newline";
  for (const auto& alt : e.alt_names) {
    if (alt.empty()) return "empty alternate name";
    if (has_control(alt) || alt.find(',') != std::string::npos) {
      return "alternate name contains a comma, tab or newline";
    }
  }
  if (!is_valid(e.location)) return "coordinates out of range";
  if (!is_feature_class(e.feature_class)) {
    return std::string("invalid feature class '") + e.feature_class + "'";
  }
  if (has_control(e.feature_code) || e.feature_code.find('.') != std::string::npos) {
    return "feature code contains a '.', tab or newline";
  }
  if (e.population < 0) return "population is negative";
  if (e.parent_id && *e.parent_id == e.id) return "entry is its own parent";
  return {};
}

void canonicalize(GazetteerEntry& e) {
  std::sort(e.alt_names.begin(), e.alt_names.end());
  e.alt_names.erase(std::unique(e.alt_names.begin(), e.alt_names.end()), e.alt_names.end());
}

// Parent ids that do not resolve; checked before building so loaders can
// attach line numbers.
std::optional<PlaceId> first_dangling_parent(const std::vector<GazetteerEntry>& entries,
                                             const std::unordered_set<PlaceId>& ids,
                                             std::size_t* index) {
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& p = entries[i].parent_id;
    if (p && !ids.contains(*p)) {
      *index = i;
      return *p;
    }
  }
  return std::nullopt;
}

std::string literal_of(const Term& t) { return t.value; }

}  // namespace

std::string entity_iri(PlaceId id) {
  return std::string(vocab::kEntityPrefix) + std::to_string(id) + "/";
}

std::optional<PlaceId> parse_entity_iri(std::string_view iri) {
  std::string_view rest;
  if (iri.starts_with("https://sws.geonames.org/")) {
    rest = iri.substr(25);
  } else if (iri.starts_with("http://sws.geonames.org/")) {
    rest = iri.substr(24);
  } else {
    return std::nullopt;
  }
  if (!rest.ends_with('/')) return std::nullopt;
  rest.remove_suffix(1);
  if (rest.empty() || rest.find_first_not_of("0123456789") != std::string_view::npos) {
    return std::nullopt;
  }
  auto id = parse_int(rest);
  if (!id || *id <= 0) return std::nullopt;
  return id;
}

bool is_feature_class(char c) noexcept {
  return std::string_view("AHLPRSTUV").find(c) != std::string_view::npos;
}

Gazetteer Gazetteer::from_entries(std::vector<GazetteerEntry> entries) {
  Gazetteer g;
  for (auto& e : entries) {
    if (auto problem = entry_problem(e); !problem.empty()) {
      throw InvalidArgument("entry " + std::to_string(e.id) + ": " + problem);
    }
    canonicalize(e);
    const PlaceId id = e.id;
    if (!g.entries_.emplace(id, std::move(e)).second) {
      throw DuplicateId("duplicate gazetteer id " + std::to_string(id));
    }
  }
  for (const auto& [id, e] : g.entries_) {
    if (e.parent_id) {
      if (!g.entries_.contains(*e.parent_id)) {
        throw InvalidArgument("entry " + std::to_string(id) + ": parent " +
                              std::to_string(*e.parent_id) + " does not exist");
      }
      g.children_[*e.parent_id].push_back(id);
    }
    g.name_index_[name_key(e.name)].insert(id);
    for (const auto& alt : e.alt_names) g.name_index_[name_key(alt)].insert(id);
  }

  // Three-colour walk up the parent chains.
  std::unordered_map<PlaceId, int> state;  // 1 = on current chain, 2 = done
  for (const auto& [id, e] : g.entries_) {
    std::vector<PlaceId> chain;
    std::optional<PlaceId> cur = id;
    while (cur && state[*cur] == 0) {
      state[*cur] = 1;
      chain.push_back(*cur);
      cur = g.entries_.at(*cur).parent_id;
    }
    if (cur && state[*cur] == 1) {
      throw CyclicHierarchy("parent cycle through entry " + std::to_string(*cur));
    }
    for (PlaceId c : chain) state[c] = 2;
  }
  return g;
}

Gazetteer Gazetteer::load_tsv(std::istream& in) {
  std::vector<GazetteerEntry> entries;
  std::vector<std::size_t> lines;
  std::unordered_map<PlaceId, std::size_t> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (auto bad = first_invalid_utf8(line)) {
      throw ParseError(line_no, "invalid UTF-8 at byte " + std::to_string(*bad + 1));
    }
    if (line.empty()) continue;
    const auto cols = split(line, '\t');
    if (cols.size() != 10) {
      throw ParseError(line_no, "expected 10 tab-separated columns, got " +
                                    std::to_string(cols.size()));
    }
    GazetteerEntry e;
    const auto id = parse_int(cols[0]);
    if (!id || *id <= 0) throw ParseError(line_no, "id must be a positive integer");
    e.id = *id;
    e.name = std::string(cols[1]);
    if (!cols[2].empty()) {
      for (auto alt : split(cols[2], ',')) {
        if (!alt.empty()) e.alt_names.emplace_back(alt);
      }
    }
    const auto lat = parse_double(cols[3]);
    const auto lon = parse_double(cols[4]);
    if (!lat || !lon) throw ParseError(line_no, "latitude/longitude is not numeric");
    e.location = GeoPoint{*lat, *lon};
    if (!is_valid(e.location)) throw ParseError(line_no, "coordinates out of range");
    if (cols[5].size() != 1 || !is_feature_class(cols[5][0])) {
      throw ParseError(line_no, "invalid feature class '" + std::string(cols[5]) + "'");
    }
    e.feature_class = cols[5][0];
    e.feature_code = std::string(cols[6]);
    if (!cols[7].empty()) {
      const auto parent = parse_int(cols[7]);
      if (!parent || *parent <= 0) throw ParseError(line_no, "parent id must be a positive integer");
      e.parent_id = *parent;
    }
    if (!cols[8].empty()) {
      const auto pop = parse_int(cols[8]);
      if (!pop || *pop < 0) throw ParseError(line_no, "population must be a non-negative integer");
      e.population = *pop;
    }
    if (!cols[9].empty()) {
      const auto elev = parse_int(cols[9]);
      if (!elev) throw ParseError(line_no, "elevation must be an integer");
      e.elevation_m = *elev;
    }
    if (auto problem = entry_problem(e); !problem.empty()) throw ParseError(line_no, problem);
    if (auto [it, fresh] = seen.emplace(e.id, line_no); !fresh) {
      throw DuplicateId("line " + std::to_string(line_no) + ": duplicate id " +
                        std::to_string(e.id) + " (first on line " +
                        std::to_string(it->second) + ")");
    }
    entries.push_back(std::move(e));
    lines.push_back(line_no);
  }
  std::unordered_set<PlaceId> ids;
  for (const auto& e : entries) ids.insert(e.id);
  std::size_t bad = 0;
  if (auto parent = first_dangling_parent(entries, ids, &bad)) {
    throw ParseError(lines[bad], "parent " + std::to_string(*parent) + " does not exist");
  }
  return from_entries(std::move(entries));
}

Gazetteer Gazetteer::load_ntriples(std::istream& in) {
  struct Partial {
    GazetteerEntry entry;
    std::size_t first_line = 0;
    std::size_t parent_line = 0;
    bool has_name = false, has_lat = false, has_lon = false, has_class = false;  // class defaults to P
    std::optional<std::string> code_iri_class;
  };
  std::map<PlaceId, Partial> partials;
  std::vector<PlaceId> order;

  const std::string p_name = vocab::gn("name");
  const std::string p_alt = vocab::gn("alternateName");
  const std::string p_class = vocab::gn("featureClass");
  const std::string p_code = vocab::gn("featureCode");
  const std::string p_parent = vocab::gn("parentFeature");
  const std::string p_pop = vocab::gn("population");
  const std::string p_lat = vocab::wgs84("lat");
  const std::string p_long = vocab::wgs84("long");
  const std::string p_alt_m = vocab::wgs84("alt");

  for (const auto& [t, line] : parse_ntriples(in)) {
    const auto id = parse_entity_iri(t.subject);
    if (!id) continue;
    auto [it, fresh] = partials.try_emplace(*id);
    Partial& p = it->second;
    if (fresh) {
      p.entry.id = *id;
      p.first_line = line;
      order.push_back(*id);
    }
    auto duplicate = [&](bool already, const char* what) {
      if (already) throw ParseError(line, std::string("duplicate ") + what + " for " + t.subject);
    };
    auto number = [&](const char* what) {
      if (t.object.is_iri()) throw ParseError(line, std::string(what) + " must be a literal");
      return literal_of(t.object);
    };
    if (t.predicate == p_name) {
      duplicate(p.has_name, "name");
      p.entry.name = number("name");
      p.has_name = true;
    } else if (t.predicate == p_alt) {
      p.entry.alt_names.push_back(number("alternateName"));
    } else if (t.predicate == p_lat || t.predicate == p_long) {
      const bool is_lat = t.predicate == p_lat;
      duplicate(is_lat ? p.has_lat : p.has_lon, is_lat ? "lat" : "long");
      const auto v = parse_double(number(is_lat ? "lat" : "long"));
      if (!v) throw ParseError(line, "coordinate is not numeric");
      (is_lat ? p.entry.location.lat : p.entry.location.lon) = *v;
      (is_lat ? p.has_lat : p.has_lon) = true;
    } else if (t.predicate == p_class) {
      duplicate(p.has_class, "featureClass");
      std::string v = t.object.value;
      if (t.object.is_iri()) {
        if (!v.starts_with(vocab::kGeoNames)) throw ParseError(line, "featureClass outside the GeoNames namespace");
        v.erase(0, vocab::kGeoNames.size());
      }
      if (v.size() != 1 || !is_feature_class(v[0])) throw ParseError(line, "invalid feature class");
      p.entry.feature_class = v[0];
      p.has_class = true;
    } else if (t.predicate == p_code) {
      std::string v = t.object.value;
      if (t.object.is_iri()) {
        if (!v.starts_with(vocab::kGeoNames)) throw ParseError(line, "featureCode outside the GeoNames namespace");
        v.erase(0, vocab::kGeoNames.size());
        const auto dot = v.find('.');
        if (dot == std::string::npos) throw ParseError(line, "featureCode IRI lacks a class prefix");
        p.code_iri_class = v.substr(0, dot);
        v.erase(0, dot + 1);
      }
      p.entry.feature_code = std::move(v);
    } else if (t.predicate == p_parent) {
      duplicate(p.entry.parent_id.has_value(), "parentFeature");
      const auto parent = t.object.is_iri() ? parse_entity_iri(t.object.value) : std::nullopt;
      if (!parent) throw ParseError(line, "parentFeature must be a GeoNames entity IRI");
      p.entry.parent_id = *parent;
      p.parent_line = line;
    } else if (t.predicate == p_pop) {
      const auto v = parse_int(number("population"));
      if (!v || *v < 0) throw ParseError(line, "population must be a non-negative integer");
      p.entry.population = *v;
    } else if (t.predicate == p_alt_m) {
      const auto v = parse_int(number("alt"));
      if (!v) throw ParseError(line, "elevation must be an integer");
      p.entry.elevation_m = *v;
    }
  }

  std::vector<GazetteerEntry> entries;
  std::unordered_set<PlaceId> ids;
  for (PlaceId id : order) {
    Partial& p = partials.at(id);
    const std::string where = " for " + entity_iri(id) + " (first seen on line " +
                              std::to_string(p.first_line) + ")";
    if (!p.has_name) throw MissingField("missing name" + where);
    if (!p.has_lat || !p.has_lon) throw MissingField("missing wgs84 lat/long" + where);
    if (p.code_iri_class && *p.code_iri_class != std::string(1, p.entry.feature_class)) {
      throw ParseError(p.first_line, "featureCode class disagrees with featureClass" + where);
    }
    if (auto problem = entry_problem(p.entry); !problem.empty()) {
      throw ParseError(p.first_line, problem + where);
    }
    ids.insert(id);
  }
  for (PlaceId id : order) {
    const Partial& p = partials.at(id);
    if (p.entry.parent_id && !ids.contains(*p.entry.parent_id)) {
      throw ParseError(p.parent_line, "parent " + std::to_string(*p.entry.parent_id) + " does not exist");
    }
    entries.push_back(p.entry);
  }
  return from_entries(std::move(entries));
}

void Gazetteer::write_tsv(std::ostream& out) const {
  for (const auto& [id, e] : entries_) {
    out << id << '\t' << e.name << '\t';
    for (std::size_t i = 0; i < e.alt_names.size(); ++i) {
      if (i) out << ',';
      out << e.alt_names[i];
    }
    out << '\t' << format_double(e.location.lat) << '\t' << format_double(e.location.lon)
        << '\t' << e.feature_class << '\t' << e.feature_code << '\t';
    if (e.parent_id) out << *e.parent_id;
    out << '\t';
    if (e.population != 0) out << e.population;
    out << '\t';
    if (e.elevation_m) out << *e.elevation_m;
    out << '\n';
  }
}

const GazetteerEntry* Gazetteer::find(PlaceId id) const {
  auto it = entries_.find(id);
  return it == entries_.end() ? nullptr : &it->second;
}

const GazetteerEntry& Gazetteer::at(PlaceId id) const {
  if (const auto* e = find(id)) return *e;
  throw UnknownId("unknown gazetteer id " + std::to_string(id));
}

std::set<PlaceId> Gazetteer::lookup_name(std::string_view name) const {
  if (const auto* ids = lookup_key(name_key(name))) return *ids;
  return {};
}

const std::set<PlaceId>* Gazetteer::lookup_key(const std::string& key) const {
  auto it = name_index_.find(key);
  return it == name_index_.end() ? nullptr : &it->second;
}

const std::vector<PlaceId>& Gazetteer::children(PlaceId id) const {
  auto it = children_.find(id);
  return it == children_.end() ? kNoChildren : it->second;
}

std::set<PlaceId> Gazetteer::descendants(PlaceId id) const {
  at(id);
  std::set<PlaceId> out;
  std::vector<PlaceId> stack(children(id).begin(), children(id).end());
  while (!stack.empty()) {
    const PlaceId cur = stack.back();
    stack.pop_back();
    if (!out.insert(cur).second) continue;
    for (PlaceId c : children(cur)) stack.push_back(c);
  }
  return out;
}

std::vector<Triple> Gazetteer::export_rdf(PlaceId id) const {
  const GazetteerEntry& e = at(id);
  const std::string s = entity_iri(id);
  std::vector<Triple> out;
  out.push_back({s, vocab::gn("name"), Term::literal(e.name)});
  for (const auto& alt : e.alt_names) {
    out.push_back({s, vocab::gn("alternateName"), Term::literal(alt)});
  }
  out.push_back({s, vocab::wgs84("lat"),
                 Term::literal(format_double(e.location.lat), vocab::xsd("double"))});
  out.push_back({s, vocab::wgs84("long"),
                 Term::literal(format_double(e.location.lon), vocab::xsd("double"))});
  out.push_back({s, vocab::gn("featureClass"), Term::iri(vocab::gn(std::string(1, e.feature_class)))});
  if (!e.feature_code.empty()) {
    out.push_back({s, vocab::gn("featureCode"),
                   Term::iri(vocab::gn(std::string(1, e.feature_class) + "." + e.feature_code))});
  }
  if (e.parent_id) {
    out.push_back({s, vocab::gn("parentFeature"), Term::iri(entity_iri(*e.parent_id))});
  }
  if (e.population != 0) {
    out.push_back({s, vocab::gn("population"),
                   Term::literal(std::to_string(e.population), vocab::xsd("integer"))});
  }
  if (e.elevation_m) {
    out.push_back({s, vocab::wgs84("alt"),
                   Term::literal(std::to_string(*e.elevation_m), vocab::xsd("integer"))});
  }
  std::stable_sort(out.begin(), out.end(), [](const Triple& a, const Triple& b) {
    if (a.predicate != b.predicate) return a.predicate < b.predicate;
    return a.object.value < b.object.value;
  });
  return out;
}

}  // namespace geosir
