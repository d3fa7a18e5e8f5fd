#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "geosir/geo.hpp"
#include "geosir/path_network.hpp"
#include "geosir/rdf.hpp"

namespace geosir {

namespace vocab {
inline constexpr std::string_view kGeoNames = "http://www.geonames.org/ontology#";
inline constexpr std::string_view kWgs84 = "http://www.w3.org/2003/01/geo/wgs84_pos#";
inline constexpr std::string_view kXsd = "http://www.w3.org/2001/XMLSchema#";
inline constexpr std::string_view kEntityPrefix = "https://sws.geonames.org/";

std::string gn(std::string_view local);
std::string wgs84(std::string_view local);
std::string xsd(std::string_view local);
}  // namespace vocab

// "https://sws.geonames.org/<id>/".
std::string entity_iri(PlaceId id);
// Inverse of entity_iri; also accepts the http:// form.
std::optional<PlaceId> parse_entity_iri(std::string_view iri);

// The nine GeoNames feature classes.
bool is_feature_class(char c) noexcept;

struct GazetteerEntry {
  PlaceId id = 0;
  std::string name;
  std::vector<std::string> alt_names;  // sorted, unique once in a Gazetteer
  GeoPoint location;
  char feature_class = 'P';
  std::string feature_code;
  std::optional<PlaceId> parent_id;
  std::int64_t population = 0;  // 0 means unknown
  std::optional<std::int64_t> elevation_m;

  friend bool operator==(const GazetteerEntry&, const GazetteerEntry&) = default;
};

// Immutable place ontology with name and hierarchy indexes.
class Gazetteer {
 public:
  Gazetteer() = default;

  // Validates every entry and builds the indexes. Throws DuplicateId,
  // InvalidArgument (bad field, dangling parent) or CyclicHierarchy.
  static Gazetteer from_entries(std::vector<GazetteerEntry> entries);

  // 10-column TSV without header. ParseError carries the line number.
  static Gazetteer load_tsv(std::istream& in);
  // GeoNames-vocabulary N-Triples. Unknown predicates and non-GeoNames
  // subjects are ignored.
  static Gazetteer load_ntriples(std::istream& in);

  // Inverse of load_tsv, entries in id order.
  void write_tsv(std::ostream& out) const;

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const std::map<PlaceId, GazetteerEntry>& entries() const noexcept { return entries_; }

  const GazetteerEntry* find(PlaceId id) const;
  // Throws UnknownId.
  const GazetteerEntry& at(PlaceId id) const;

  // Ids whose canonical or alternate name shares the folded key of `name`.
  std::set<PlaceId> lookup_name(std::string_view name) const;
  // Same, for an already computed name_key().
  const std::set<PlaceId>* lookup_key(const std::string& key) const;

  const std::vector<PlaceId>& children(PlaceId id) const;
  // Transitive closure below `id`, excluding `id`. Throws UnknownId.
  std::set<PlaceId> descendants(PlaceId id) const;

  // Linked RDF description of one entity, sorted by (predicate, object).
  // Throws UnknownId.
  std::vector<Triple> export_rdf(PlaceId id) const;

 private:
  std::map<PlaceId, GazetteerEntry> entries_;
  std::unordered_map<std::string, std::set<PlaceId>> name_index_;
  std::unordered_map<PlaceId, std::vector<PlaceId>> children_;
};

}  // namespace geosir
