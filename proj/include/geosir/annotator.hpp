#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "geosir/gazetteer.hpp"
#include "geosir/geo.hpp"
#include "geosir/rdf.hpp"
#include "geosir/semantic_expander.hpp"
#include "geosir/text_index.hpp"

namespace geosir {

namespace vocab {
inline constexpr std::string_view kSir = "http://example.org/sir#";
inline constexpr std::string_view kConceptPrefix = "http://example.org/sir/concept/";
inline constexpr std::string_view kWktLiteral = "http://www.opengis.net/ont/geosparql#wktLiteral";
std::string sir(std::string_view local);
std::string concept_iri(std::string_view concept_id);
}  // namespace vocab

// Longest gazetteer name spanned by an annotation mention.
inline constexpr std::size_t kMaxToponymTokens = 5;

// Toponym occurrence: tokens [start, end) of the document's token list
// (title tokens followed by body tokens).
struct Mention {
  std::string doc_id;
  std::size_t start = 0;
  std::size_t end = 0;
  std::string surface;               // matched tokens joined by spaces
  std::vector<PlaceId> candidates;   // ascending, never empty

  friend bool operator==(const Mention&, const Mention&) = default;
};

struct ResolvedMention {
  Mention mention;
  PlaceId place = 0;

  friend bool operator==(const ResolvedMention&, const ResolvedMention&) = default;
};

struct DocAnnotation {
  std::string doc_id;
  std::string subject;  // IRI the triples describe
  std::vector<ResolvedMention> places;
  std::optional<Geometry> footprint;
  // One mentionsPlace triple per distinct resolved place, then the
  // footprint triple.
  std::vector<Triple> triples;
  std::set<std::string> concepts;
  std::vector<Triple> concept_triples;

  // Distinct resolved place ids, ascending.
  std::vector<PlaceId> place_ids() const;
};

// The document's uri when it is an absolute IRI, else a urn holding the
// percent-encoded doc_id.
std::string annotation_subject(const Document& doc);

// Greedy longest n-gram (n <= 5) scan against the gazetteer name index;
// non-overlapping, left to right, never spanning the title/body boundary.
std::vector<Mention> extract_toponyms(const Document& doc, const Gazetteer& g);

// One round of distance-based refinement, started from the most populous
// senses. Independent of mention order.
std::vector<ResolvedMention> disambiguate(std::span<const Mention> mentions, const Gazetteer& g);

// Extraction, disambiguation, footprint and triples. With a lexicon the
// document is also tagged with the concepts whose terms it contains.
DocAnnotation annotate(const Document& doc, const Gazetteer& g,
                       const ConceptLexicon* lexicon = nullptr);

// "POINT (lon lat)" or an axis-aligned five-vertex "POLYGON ((...))".
std::string footprint_wkt(const Geometry& footprint);
// Inverse of footprint_wkt for points and boxes; nullopt otherwise.
std::optional<Geometry> parse_footprint_wkt(std::string_view wkt);

// What the query engine needs to know about a document, recoverable from
// the annotation triples alone.
struct DocRecord {
  std::string doc_id;
  std::string subject;
  std::optional<Geometry> footprint;
  std::vector<PlaceId> places;
  std::set<std::string> concepts;

  friend bool operator==(const DocRecord&, const DocRecord&) = default;
};

DocRecord to_record(const DocAnnotation& a);

// Rebuilds records for `docs` from serialized annotation triples. Throws
// ParseError on malformed footprints or triples about unknown subjects.
std::map<std::string, DocRecord> records_from_triples(std::span<const Document> docs,
                                                      std::span<const ParsedTriple> triples);

}  // namespace geosir
