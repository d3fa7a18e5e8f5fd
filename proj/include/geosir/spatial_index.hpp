#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "geosir/geo.hpp"

namespace geosir {

// Counters filled by queries that accept them.
struct QueryStats {
  std::size_t nodes_visited = 0;
};

// Static R-tree packed with Sort-Tile-Recursive bulk loading. All leaves sit
// at the same depth.
class SpatialIndex {
 public:
  static constexpr std::size_t kNodeCapacity = 16;

  struct Item {
    std::string id;
    Geometry geometry;
  };

  SpatialIndex() = default;

  // Throws DuplicateId on repeated ids and InvalidArgument on invalid
  // points or boxes.
  static SpatialIndex build(std::vector<Item> items);

  std::size_t size() const noexcept { return items_.size(); }
  bool empty() const noexcept { return items_.empty(); }
  // Number of levels; 0 for an empty index.
  std::size_t height() const noexcept { return height_; }
  const std::vector<Item>& items() const noexcept { return items_; }

  // Ids whose geometry contains `p` (see geometry_contains).
  std::set<std::string> query_point(const GeoPoint& p, QueryStats* stats = nullptr) const;

  // Ids whose geometry intersects `region`, which must be a BBox or Polygon.
  std::set<std::string> query_region(const Geometry& region, QueryStats* stats = nullptr) const;

  // Ids whose representative point lies within `radius_km` of `center`,
  // with their haversine distances. Throws InvalidArgument on a negative or
  // non-finite radius.
  std::map<std::string, double> query_buffer(const GeoPoint& center, double radius_km,
                                             QueryStats* stats = nullptr) const;

  // Longitude/latitude window guaranteed to contain every point within
  // `radius_km` of `center`; split in two across the antimeridian.
  static std::vector<BBox> buffer_search_boxes(const GeoPoint& center, double radius_km);

 private:
  struct Node {
    BBox box;
    std::uint32_t first = 0;  // first child node, or first item for leaves
    std::uint32_t count = 0;
    bool leaf = false;
  };

  template <typename Prune, typename Visit>
  void traverse(Prune&& prune, Visit&& visit, QueryStats* stats) const;

  std::vector<Item> items_;          // reordered into leaf order
  std::vector<BBox> item_boxes_;
  std::vector<GeoPoint> item_reps_;  // representative points
  std::vector<Node> nodes_;
  std::uint32_t root_ = 0;
  std::size_t height_ = 0;
};

}  // namespace geosir
