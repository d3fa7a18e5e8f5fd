#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "geosir/geo.hpp"

namespace geosir {

struct RankConfig {
  double alpha = 0.5;      // weight of the normalized text score
  std::size_t top_k = 10;
};

// Throws InvalidArgument unless alpha is in [0, 1] and top_k >= 1.
void validate(const RankConfig& cfg);

// Near clauses: max(0, 1 - d / radius) with d the haversine distance from
// the footprint's representative point to `center`.
double near_spatial_score(const Geometry& footprint, const GeoPoint& center, double radius_km);

// In clauses: 1 when the representative point lies strictly inside
// `region`; otherwise the fraction of the footprint's box area (square
// degrees) covered by `region`. Zero-area footprints score 1 when inside
// the closed region, else 0.
double in_spatial_score(const Geometry& footprint, const BBox& region);

struct RankedDoc {
  std::string doc_id;
  double text_score = 0.0;       // raw
  double normalized_text = 0.0;  // min-max within the candidates
  double spatial_score = 0.0;
  double combined = 0.0;

  friend bool operator==(const RankedDoc&, const RankedDoc&) = default;
};

// Min-max normalizes text scores (all equal -> 1), combines linearly, sorts
// descending with doc_id ascending on ties, truncates to top_k. Throws
// MismatchedDocSets when the maps disagree on their keys.
std::vector<RankedDoc> combine(const std::map<std::string, double>& text_scores,
                               const std::map<std::string, double>& spatial_scores,
                               const RankConfig& cfg);

}  // namespace geosir
