#include "geosir/annotator.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <tuple>
#include <unordered_map>

#include "geosir/error.hpp"
#include "geosir/strings.hpp"
#include "geosir/text.hpp"

namespace geosir {

namespace vocab {
std::string sir(std::string_view local) { return std::string(kSir) + std::string(local); }
std::string concept_iri(std::string_view concept_id) {
  return std::string(kConceptPrefix) + std::string(concept_id);
}
}  // namespace vocab

namespace {

struct Segmented {
  std::vector<std::string> tokens;
  std::vector<std::pair<std::size_t, std::size_t>> segments;
};

Segmented segment_tokens(const Document& doc) {
  Segmented s;
  s.tokens = tokenize(doc.title);
  s.segments.emplace_back(0, s.tokens.size());
  auto body = tokenize(doc.body);
  const std::size_t start = s.tokens.size();
  s.tokens.insert(s.tokens.end(), std::make_move_iterator(body.begin()),
                  std::make_move_iterator(body.end()));
  s.segments.emplace_back(start, s.tokens.size());
  return s;
}

// Disambiguation preference: lower tuple wins.
auto population_rank(const GazetteerEntry& e) { return std::make_tuple(-e.population, e.id); }

PlaceId most_populous(const std::vector<PlaceId>& ids, const Gazetteer& g) {
  return *std::min_element(ids.begin(), ids.end(), [&](PlaceId a, PlaceId b) {
    return population_rank(g.at(a)) < population_rank(g.at(b));
  });
}

}  // namespace

std::vector<PlaceId> DocAnnotation::place_ids() const {
  std::vector<PlaceId> ids;
  for (const auto& p : places) ids.push_back(p.place);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

std::string annotation_subject(const Document& doc) {
  if (is_absolute_iri(doc.uri)) return doc.uri;
  std::string out = "urn:geosir:doc:";
  static constexpr char kHex[] = "0123456789ABCDEF";
  for (unsigned char c : doc.doc_id) {
    if (std::isalnum(c) || c == '-' || c == '.' || c == '_' || c == '~') {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 15];
    }
  }
  return out;
}

std::vector<Mention> extract_toponyms(const Document& doc, const Gazetteer& g) {
  const Segmented s = segment_tokens(doc);
  std::vector<Mention> out;
  for (const auto& [seg_start, seg_end] : s.segments) {
    std::size_t i = seg_start;
    while (i < seg_end) {
      bool matched = false;
      const std::size_t longest = std::min(kMaxToponymTokens, seg_end - i);
      for (std::size_t n = longest; n >= 1; --n) {
        std::vector<std::string> span(s.tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                      s.tokens.begin() + static_cast<std::ptrdiff_t>(i + n));
        const std::string key = join_tokens(span);
        if (const auto* ids = g.lookup_key(key); ids && !ids->empty()) {
          out.push_back(Mention{doc.doc_id, i, i + n, key, {ids->begin(), ids->end()}});
          i += n;
          matched = true;
          break;
        }
      }
      if (!matched) ++i;
    }
  }
  return out;
}

std::vector<ResolvedMention> disambiguate(std::span<const Mention> mentions, const Gazetteer& g) {
  std::vector<ResolvedMention> out;
  if (mentions.empty()) return out;

  std::vector<PlaceId> initial;
  initial.reserve(mentions.size());
  for (const auto& m : mentions) initial.push_back(most_populous(m.candidates, g));
  if (mentions.size() == 1) {
    out.push_back({mentions[0], initial[0]});
    return out;
  }

  // Each mention is refined against the initial senses of the others, so
  // the outcome does not depend on mention order.
  for (std::size_t i = 0; i < mentions.size(); ++i) {
    PlaceId best = 0;
    std::tuple<double, std::int64_t, PlaceId> best_rank{std::numeric_limits<double>::infinity(), 0, 0};
    for (PlaceId cand : mentions[i].candidates) {
      const GazetteerEntry& e = g.at(cand);
      double sum = 0.0;
      for (std::size_t j = 0; j < mentions.size(); ++j) {
        if (j != i) sum += haversine_km(e.location, g.at(initial[j]).location);
      }
      const auto rank = std::make_tuple(sum, -e.population, e.id);
      if (best == 0 || rank < best_rank) {
        best = cand;
        best_rank = rank;
      }
    }
    out.push_back({mentions[i], best});
  }
  return out;
}

DocAnnotation annotate(const Document& doc, const Gazetteer& g, const ConceptLexicon* lexicon) {
  DocAnnotation a;
  a.doc_id = doc.doc_id;
  a.subject = annotation_subject(doc);
  const auto mentions = extract_toponyms(doc, g);
  a.places = disambiguate(mentions, g);

  const auto ids = a.place_ids();
  if (ids.size() == 1) {
    a.footprint = g.at(ids[0]).location;
  } else if (ids.size() > 1) {
    BBox box = BBox::of(g.at(ids[0]).location);
    for (PlaceId id : ids) box.expand(g.at(id).location);
    a.footprint = box;
  }
  for (PlaceId id : ids) {
    a.triples.push_back({a.subject, vocab::sir("mentionsPlace"), Term::iri(entity_iri(id))});
  }
  if (a.footprint) {
    a.triples.push_back({a.subject, vocab::sir("footprint"),
                         Term::literal(footprint_wkt(*a.footprint), std::string(vocab::kWktLiteral))});
  }

  if (lexicon != nullptr && !lexicon->empty()) {
    const Segmented s = segment_tokens(doc);
    for (const auto& [start, end] : s.segments) {
      std::span<const std::string> seg(s.tokens.data() + start, end - start);
      for (const auto& m : lexicon->match(seg)) a.concepts.insert(m.concept_id);
    }
    for (const auto& c : a.concepts) {
      a.concept_triples.push_back({a.subject, vocab::sir("aboutConcept"), Term::iri(vocab::concept_iri(c))});
    }
  }
  return a;
}

std::string footprint_wkt(const Geometry& footprint) {
  auto xy = [](const GeoPoint& p) { return format_double(p.lon) + " " + format_double(p.lat); };
  if (const auto* p = std::get_if<GeoPoint>(&footprint)) return "POINT (" + xy(*p) + ")";
  std::vector<GeoPoint> ring;
  if (const auto* b = std::get_if<BBox>(&footprint)) {
    ring = {{b->min_lat, b->min_lon}, {b->min_lat, b->max_lon}, {b->max_lat, b->max_lon},
            {b->max_lat, b->min_lon}, {b->min_lat, b->min_lon}};
  } else {
    const auto& poly = std::get<Polygon>(footprint);
    ring.assign(poly.ring().begin(), poly.ring().end());
    ring.push_back(ring.front());
  }
  std::string out = "POLYGON ((";
  for (std::size_t i = 0; i < ring.size(); ++i) {
    if (i) out += ", ";
    out += xy(ring[i]);
  }
  return out + "))";
}

std::optional<Geometry> parse_footprint_wkt(std::string_view wkt) {
  auto parse_xy = [](std::string_view pair) -> std::optional<GeoPoint> {
    pair = trim(pair);
    const auto sp = pair.find(' ');
    if (sp == std::string_view::npos) return std::nullopt;
    const auto lon = parse_double(trim(pair.substr(0, sp)));
    const auto lat = parse_double(trim(pair.substr(sp + 1)));
    if (!lon || !lat) return std::nullopt;
    GeoPoint p{*lat, *lon};
    if (!is_valid(p)) return std::nullopt;
    return p;
  };
  wkt = trim(wkt);
  if (wkt.starts_with("POINT (") && wkt.ends_with(")")) {
    if (auto p = parse_xy(wkt.substr(7, wkt.size() - 8))) return Geometry{*p};
    return std::nullopt;
  }
  if (wkt.starts_with("POLYGON ((") && wkt.ends_with("))")) {
    std::vector<GeoPoint> ring;
    for (auto part : split(wkt.substr(10, wkt.size() - 12), ',')) {
      auto p = parse_xy(part);
      if (!p) return std::nullopt;
      ring.push_back(*p);
    }
    if (ring.size() == 5 && ring[0] == ring[4] && ring[0].lat == ring[1].lat &&
        ring[1].lon == ring[2].lon && ring[2].lat == ring[3].lat && ring[3].lon == ring[0].lon) {
      return Geometry{BBox{ring[0].lat, ring[0].lon, ring[2].lat, ring[2].lon}};
    }
    try {
      return Geometry{Polygon(std::move(ring))};
    } catch (const InvalidArgument&) {
      return std::nullopt;
    }
  }
  return std::nullopt;
}

DocRecord to_record(const DocAnnotation& a) {
  return DocRecord{a.doc_id, a.subject, a.footprint, a.place_ids(), a.concepts};
}

std::map<std::string, DocRecord> records_from_triples(std::span<const Document> docs,
                                                      std::span<const ParsedTriple> triples) {
  std::map<std::string, DocRecord> records;
  std::unordered_map<std::string, std::string> by_subject;
  for (const auto& d : docs) {
    DocRecord r;
    r.doc_id = d.doc_id;
    r.subject = annotation_subject(d);
    by_subject.emplace(r.subject, d.doc_id);
    records.emplace(d.doc_id, std::move(r));
  }
  const std::string p_place = vocab::sir("mentionsPlace");
  const std::string p_footprint = vocab::sir("footprint");
  const std::string p_concept = vocab::sir("aboutConcept");
  for (const auto& [t, line] : triples) {
    auto it = by_subject.find(t.subject);
    if (it == by_subject.end()) throw ParseError(line, "annotation about unknown document " + t.subject);
    DocRecord& r = records.at(it->second);
    if (t.predicate == p_place) {
      const auto id = t.object.is_iri() ? parse_entity_iri(t.object.value) : std::nullopt;
      if (!id) throw ParseError(line, "mentionsPlace object is not a gazetteer IRI");
      r.places.push_back(*id);
    } else if (t.predicate == p_footprint) {
      auto fp = parse_footprint_wkt(t.object.value);
      if (t.object.is_iri() || !fp) throw ParseError(line, "malformed footprint literal");
      r.footprint = std::move(fp);
    } else if (t.predicate == p_concept) {
      if (!t.object.is_iri() || !t.object.value.starts_with(vocab::kConceptPrefix)) {
        throw ParseError(line, "aboutConcept object is not a concept IRI");
      }
      r.concepts.insert(t.object.value.substr(vocab::kConceptPrefix.size()));
    }
  }
  for (auto& [id, r] : records) {
    std::sort(r.places.begin(), r.places.end());
    r.places.erase(std::unique(r.places.begin(), r.places.end()), r.places.end());
  }
  return records;
}

}  // namespace geosir
