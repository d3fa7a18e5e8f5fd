#include "geosir/ranker.hpp"

#include <algorithm>
#include <cmath>

#include "geosir/error.hpp"

namespace geosir {

void validate(const RankConfig& cfg) {
  if (!(cfg.alpha >= 0.0 && cfg.alpha <= 1.0)) throw InvalidArgument("alpha must be in [0, 1]");
  if (cfg.top_k < 1) throw InvalidArgument("top_k must be at least 1");
}

double near_spatial_score(const Geometry& footprint, const GeoPoint& center, double radius_km) {
  if (!(radius_km > 0.0)) throw InvalidArgument("radius must be positive");
  const double d = haversine_km(representative_point(footprint), center);
  return std::max(0.0, 1.0 - d / radius_km);
}

double in_spatial_score(const Geometry& footprint, const BBox& region) {
  const GeoPoint rep = representative_point(footprint);
  const BBox box = bbox_of(footprint);
  if (box.area() <= 0.0) return region.contains(rep) ? 1.0 : 0.0;
  if (region.strictly_contains(rep)) return 1.0;
  const double dlat = std::min(box.max_lat, region.max_lat) - std::max(box.min_lat, region.min_lat);
  const double dlon = std::min(box.max_lon, region.max_lon) - std::max(box.min_lon, region.min_lon);
  if (dlat <= 0.0 || dlon <= 0.0) return 0.0;
  return std::clamp(dlat * dlon / box.area(), 0.0, 1.0);
}

std::vector<RankedDoc> combine(const std::map<std::string, double>& text_scores,
                               const std::map<std::string, double>& spatial_scores,
                               const RankConfig& cfg) {
  validate(cfg);
  if (text_scores.size() != spatial_scores.size() ||
      !std::equal(text_scores.begin(), text_scores.end(), spatial_scores.begin(),
                  [](const auto& a, const auto& b) { return a.first == b.first; })) {
    throw MismatchedDocSets("text and spatial scores cover different documents");
  }
  std::vector<RankedDoc> out;
  if (text_scores.empty()) return out;

  double lo = text_scores.begin()->second;
  double hi = lo;
  for (const auto& [id, s] : text_scores) {
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  out.reserve(text_scores.size());
  auto sp = spatial_scores.begin();
  for (const auto& [id, s] : text_scores) {
    RankedDoc r;
    r.doc_id = id;
    r.text_score = s;
    r.normalized_text = hi > lo ? (s - lo) / (hi - lo) : 1.0;
    r.spatial_score = std::clamp((sp++)->second, 0.0, 1.0);
    r.combined = cfg.alpha * r.normalized_text + (1.0 - cfg.alpha) * r.spatial_score;
    out.push_back(std::move(r));
  }
  // Scores equal up to rounding noise count as ties.
  auto key = [](const RankedDoc& r) { return std::round(r.combined * 1e12); };
  std::sort(out.begin(), out.end(), [&](const RankedDoc& a, const RankedDoc& b) {
    if (key(a) != key(b)) return key(a) > key(b);
    return a.doc_id < b.doc_id;
  });
  if (out.size() > cfg.top_k) out.resize(cfg.top_k);
  return out;
}

}  // namespace geosir
