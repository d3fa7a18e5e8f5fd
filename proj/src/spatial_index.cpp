#include "geosir/spatial_index.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <unordered_set>

#include "geosir/error.hpp"

namespace geosir {

namespace {

// Kilometres per degree of latitude used for the pruning pad; smaller than
// the true value on the sphere, so the pad over-approximates.
constexpr double kPadKmPerDegree = 110.574;

// Sort-Tile-Recursive grouping of `boxes` into runs of at most `cap`
// elements. Returns the element order and the run boundaries.
std::vector<std::uint32_t> str_order(const std::vector<BBox>& boxes, std::size_t cap) {
  const std::size_t n = boxes.size();
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  const std::size_t leaves = (n + cap - 1) / cap;
  const auto slices = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(leaves))));
  const std::size_t per_slice = slices * cap;

  auto by_lon = [&](std::uint32_t a, std::uint32_t b) {
    const double ca = boxes[a].min_lon + boxes[a].max_lon;
    const double cb = boxes[b].min_lon + boxes[b].max_lon;
    return ca != cb ? ca < cb : a < b;
  };
  auto by_lat = [&](std::uint32_t a, std::uint32_t b) {
    const double ca = boxes[a].min_lat + boxes[a].max_lat;
    const double cb = boxes[b].min_lat + boxes[b].max_lat;
    return ca != cb ? ca < cb : a < b;
  };
  std::sort(order.begin(), order.end(), by_lon);
  for (std::size_t start = 0; start < n; start += per_slice) {
    const std::size_t end = std::min(n, start + per_slice);
    std::sort(order.begin() + static_cast<std::ptrdiff_t>(start),
              order.begin() + static_cast<std::ptrdiff_t>(end), by_lat);
  }
  return order;
}

}  // namespace

SpatialIndex SpatialIndex::build(std::vector<Item> items) {
  SpatialIndex ix;
  if (items.empty()) return ix;

  std::unordered_set<std::string> ids;
  for (const auto& item : items) {
    if (!ids.insert(item.id).second) throw DuplicateId("duplicate spatial item id " + item.id);
    if (const auto* p = std::get_if<GeoPoint>(&item.geometry); p && !is_valid(*p)) {
      throw InvalidArgument("invalid point for item " + item.id);
    }
    if (const auto* b = std::get_if<BBox>(&item.geometry); b && !is_valid(*b)) {
      throw InvalidArgument("invalid box for item " + item.id);
    }
  }

  // Leaf level.
  std::vector<BBox> boxes;
  boxes.reserve(items.size());
  for (const auto& item : items) boxes.push_back(bbox_of(item.geometry));
  const auto order = str_order(boxes, kNodeCapacity);
  ix.items_.reserve(items.size());
  for (auto i : order) {
    ix.items_.push_back(std::move(items[i]));
    ix.item_boxes_.push_back(boxes[i]);
    ix.item_reps_.push_back(representative_point(ix.items_.back().geometry));
  }

  std::vector<std::uint32_t> level;
  for (std::size_t start = 0; start < ix.items_.size(); start += kNodeCapacity) {
    Node node;
    node.leaf = true;
    node.first = static_cast<std::uint32_t>(start);
    node.count = static_cast<std::uint32_t>(std::min(kNodeCapacity, ix.items_.size() - start));
    node.box = ix.item_boxes_[start];
    for (std::size_t i = start; i < start + node.count; ++i) node.box.expand(ix.item_boxes_[i]);
    level.push_back(static_cast<std::uint32_t>(ix.nodes_.size()));
    ix.nodes_.push_back(node);
  }
  ix.height_ = 1;

  // Pack upper levels until a single root remains. Children of one parent
  // must be contiguous, so each level is re-emitted in STR order.
  while (level.size() > 1) {
    std::vector<BBox> level_boxes;
    for (auto n : level) level_boxes.push_back(ix.nodes_[n].box);
    const auto lorder = str_order(level_boxes, kNodeCapacity);
    std::vector<Node> reordered;
    for (auto i : lorder) reordered.push_back(ix.nodes_[level[i]]);
    // The previous level occupies the tail of nodes_; overwrite it in order.
    const auto base = static_cast<std::uint32_t>(ix.nodes_.size() - level.size());
    std::copy(reordered.begin(), reordered.end(), ix.nodes_.begin() + base);

    std::vector<std::uint32_t> next;
    for (std::size_t start = 0; start < reordered.size(); start += kNodeCapacity) {
      Node node;
      node.first = base + static_cast<std::uint32_t>(start);
      node.count = static_cast<std::uint32_t>(std::min(kNodeCapacity, reordered.size() - start));
      node.box = reordered[start].box;
      for (std::size_t i = start; i < start + node.count; ++i) node.box.expand(reordered[i].box);
      next.push_back(static_cast<std::uint32_t>(ix.nodes_.size()));
      ix.nodes_.push_back(node);
    }
    level = std::move(next);
    ++ix.height_;
  }
  ix.root_ = level.front();
  return ix;
}

template <typename Prune, typename Visit>
void SpatialIndex::traverse(Prune&& prune, Visit&& visit, QueryStats* stats) const {
  if (nodes_.empty()) return;
  std::vector<std::uint32_t> stack{root_};
  while (!stack.empty()) {
    const Node& node = nodes_[stack.back()];
    stack.pop_back();
    if (!prune(node.box)) continue;
    if (stats) ++stats->nodes_visited;
    if (node.leaf) {
      for (std::uint32_t i = node.first; i < node.first + node.count; ++i) {
        if (prune(item_boxes_[i])) visit(i);
      }
    } else {
      for (std::uint32_t c = node.first; c < node.first + node.count; ++c) stack.push_back(c);
    }
  }
}

std::set<std::string> SpatialIndex::query_point(const GeoPoint& p, QueryStats* stats) const {
  std::set<std::string> out;
  auto prune = [&](const BBox& b) {
    return p.lat >= b.min_lat - kPointEpsilonDeg && p.lat <= b.max_lat + kPointEpsilonDeg &&
           p.lon >= b.min_lon - kPointEpsilonDeg && p.lon <= b.max_lon + kPointEpsilonDeg;
  };
  traverse(prune, [&](std::uint32_t i) {
    if (geometry_contains(items_[i].geometry, p)) out.insert(items_[i].id);
  }, stats);
  return out;
}

std::set<std::string> SpatialIndex::query_region(const Geometry& region, QueryStats* stats) const {
  if (std::holds_alternative<GeoPoint>(region)) {
    throw InvalidArgument("region must be a box or polygon");
  }
  std::set<std::string> out;
  const BBox rbox = bbox_of(region);
  traverse([&](const BBox& b) { return bbox_intersects(b, rbox); },
           [&](std::uint32_t i) {
             if (geometries_intersect(items_[i].geometry, region)) out.insert(items_[i].id);
           },
           stats);
  return out;
}

std::vector<BBox> SpatialIndex::buffer_search_boxes(const GeoPoint& center, double radius_km) {
  const double dlat = radius_km / kPadKmPerDegree;
  const double min_lat = center.lat - dlat;
  const double max_lat = center.lat + dlat;
  if (min_lat <= -90.0 || max_lat >= 90.0) {
    return {BBox{std::max(min_lat, -90.0), -180.0, std::min(max_lat, 90.0), 180.0}};
  }
  // Longitude half-width of a spherical cap with angular radius dlat; never
  // narrower than the flat dlat / cos(lat) estimate.
  constexpr double kRad = std::numbers::pi / 180.0;
  const double cos_lat = std::cos(center.lat * kRad);
  const double s = std::sin(dlat * kRad) / cos_lat;
  if (s >= 1.0) return {BBox{min_lat, -180.0, max_lat, 180.0}};
  const double dlon = std::max(dlat / cos_lat, std::asin(s) / kRad);
  if (dlon >= 180.0) return {BBox{min_lat, -180.0, max_lat, 180.0}};

  const double lo = center.lon - dlon;
  const double hi = center.lon + dlon;
  if (lo < -180.0) {
    return {BBox{min_lat, -180.0, max_lat, hi}, BBox{min_lat, lo + 360.0, max_lat, 180.0}};
  }
  if (hi > 180.0) {
    return {BBox{min_lat, lo, max_lat, 180.0}, BBox{min_lat, -180.0, max_lat, hi - 360.0}};
  }
  return {BBox{min_lat, lo, max_lat, hi}};
}

std::map<std::string, double> SpatialIndex::query_buffer(const GeoPoint& center, double radius_km,
                                                         QueryStats* stats) const {
  if (!std::isfinite(radius_km) || radius_km < 0.0) {
    throw InvalidArgument("buffer radius must be finite and non-negative");
  }
  std::map<std::string, double> out;
  const auto windows = buffer_search_boxes(center, radius_km);
  auto prune = [&](const BBox& b) {
    return std::any_of(windows.begin(), windows.end(),
                       [&](const BBox& w) { return bbox_intersects(b, w); });
  };
  traverse(prune, [&](std::uint32_t i) {
    const double d = haversine_km(center, item_reps_[i]);
    if (d <= radius_km) out.emplace(items_[i].id, d);
  }, stats);
  return out;
}

}  // namespace geosir
