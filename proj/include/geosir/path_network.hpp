#pragma once

#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <vector>

#include "geosir/geo.hpp"

namespace geosir {

using PlaceId = std::int64_t;

struct Route {
  std::vector<PlaceId> nodes;
  double total_km = 0.0;
};

// Undirected weighted graph over places. Costs are strictly positive; their
// unit (km or time) is the caller's choice.
class PathNetwork {
 public:
  struct Edge {
    PlaceId to;
    double cost;
  };

  // Throws InvalidArgument for invalid coordinates or duplicate nodes.
  void add_node(PlaceId id, GeoPoint location);
  // Throws UnknownNode for absent endpoints, InvalidArgument for cost <= 0.
  // Parallel edges keep the cheaper cost.
  void add_edge(PlaceId a, PlaceId b, double cost);

  bool has_node(PlaceId id) const { return nodes_.contains(id); }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept;
  const std::map<PlaceId, GeoPoint>& nodes() const noexcept { return nodes_; }
  // Neighbours sorted by id.
  const std::vector<Edge>& neighbours(PlaceId id) const;

  // Parses `node_id<TAB>node_id<TAB>cost` lines. Node coordinates are looked
  // up through `locate`; an id it cannot resolve is a ParseError.
  static PathNetwork load_edges(
      std::istream& in,
      const std::function<std::optional<GeoPoint>(PlaceId)>& locate);

 private:
  std::map<PlaceId, GeoPoint> nodes_;
  std::map<PlaceId, std::vector<Edge>> adjacency_;
};

// Minimum-cost path (Dijkstra). Among equal-cost paths the lexicographically
// smallest id sequence wins. Throws UnknownNode or NoPath.
Route shortest_path(const PathNetwork& net, PlaceId src, PlaceId dst);

}  // namespace geosir
