#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "geosir/geo.hpp"

namespace geosir {

inline constexpr double kKmPerMile = 1.609344;

struct InPlace {
  std::string place;
  friend bool operator==(const InPlace&, const InPlace&) = default;
};

struct NearPlace {
  std::string place;
  std::optional<double> radius_km;
  friend bool operator==(const NearPlace&, const NearPlace&) = default;
};

struct NearPoint {
  GeoPoint point;
  std::optional<double> radius_km;
  friend bool operator==(const NearPoint&, const NearPoint&) = default;
};

using SpatialClause = std::variant<InPlace, NearPlace, NearPoint>;

struct QueryAst {
  std::vector<std::string> terms;  // tokenized, folded
  std::optional<SpatialClause> spatial;

  friend bool operator==(const QueryAst&, const QueryAst&) = default;
};

// Grammar (keywords case-insensitive):
//   query  := terms? clause?
//   clause := "IN" phrase | "NEAR" (phrase | point) within?
//   point  := "(" number "," number ")"        -- lat, lon
//   within := "WITHIN" number ("km" | "mi")
// An IN phrase runs to the end of input; a NEAR phrase stops at WITHIN.
// Radii in miles are converted to km; an absent radius stays unset.
// Throws SyntaxError with a byte offset.
QueryAst parse_query(std::string_view q);

// Canonical text that parse_query maps back to an identical AST.
std::string to_string(const QueryAst& ast);

}  // namespace geosir
