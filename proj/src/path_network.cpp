#include "geosir/path_network.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <unordered_map>

#include "geosir/error.hpp"
#include "geosir/strings.hpp"

namespace geosir {

namespace {

const std::vector<PathNetwork::Edge> kNoEdges;

std::unordered_map<PlaceId, double> dijkstra(const PathNetwork& net, PlaceId from) {
  std::unordered_map<PlaceId, double> dist;
  using Item = std::pair<double, PlaceId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[from] = 0.0;
  heap.emplace(0.0, from);
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[u]) continue;
    for (const auto& e : net.neighbours(u)) {
      const double nd = d + e.cost;
      auto it = dist.find(e.to);
      if (it == dist.end() || nd < it->second) {
        dist[e.to] = nd;
        heap.emplace(nd, e.to);
      }
    }
  }
  return dist;
}

}  // namespace

void PathNetwork::add_node(PlaceId id, GeoPoint location) {
  if (!is_valid(location)) throw InvalidArgument("node coordinates out of range");
  if (!nodes_.emplace(id, location).second) {
    throw InvalidArgument("duplicate node " + std::to_string(id));
  }
  adjacency_[id];
}

void PathNetwork::add_edge(PlaceId a, PlaceId b, double cost) {
  if (!has_node(a)) throw UnknownNode("unknown node " + std::to_string(a));
  if (!has_node(b)) throw UnknownNode("unknown node " + std::to_string(b));
  if (!(cost > 0.0) || !std::isfinite(cost)) {
    throw InvalidArgument("edge cost must be finite and positive");
  }
  if (a == b) return;
  auto link = [this](PlaceId from, PlaceId to, double c) {
    auto& edges = adjacency_[from];
    auto it = std::lower_bound(edges.begin(), edges.end(), to,
                               [](const Edge& e, PlaceId id) { return e.to < id; });
    if (it != edges.end() && it->to == to) {
      it->cost = std::min(it->cost, c);
    } else {
      edges.insert(it, Edge{to, c});
    }
  };
  link(a, b, cost);
  link(b, a, cost);
}

std::size_t PathNetwork::edge_count() const noexcept {
  std::size_t n = 0;
  for (const auto& [id, edges] : adjacency_) n += edges.size();
  return n / 2;
}

const std::vector<PathNetwork::Edge>& PathNetwork::neighbours(PlaceId id) const {
  auto it = adjacency_.find(id);
  return it == adjacency_.end() ? kNoEdges : it->second;
}

PathNetwork PathNetwork::load_edges(
    std::istream& in, const std::function<std::optional<GeoPoint>(PlaceId)>& locate) {
  PathNetwork net;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cols = split(line, '\t');
    if (cols.size() != 3) {
      throw ParseError(line_no, "expected 3 tab-separated columns, got " +
                                    std::to_string(cols.size()));
    }
    const auto a = parse_int(cols[0]);
    const auto b = parse_int(cols[1]);
    const auto cost = parse_double(cols[2]);
    if (!a || !b) throw ParseError(line_no, "node id is not an integer");
    if (!cost || !(*cost > 0.0) || !std::isfinite(*cost)) {
      throw ParseError(line_no, "cost must be a positive number");
    }
    for (PlaceId id : {*a, *b}) {
      if (net.has_node(id)) continue;
      const auto where = locate(id);
      if (!where) throw ParseError(line_no, "node " + std::to_string(id) + " is not in the gazetteer");
      net.add_node(id, *where);
    }
    net.add_edge(*a, *b, *cost);
  }
  return net;
}

Route shortest_path(const PathNetwork& net, PlaceId src, PlaceId dst) {
  if (!net.has_node(src)) throw UnknownNode("unknown node " + std::to_string(src));
  if (!net.has_node(dst)) throw UnknownNode("unknown node " + std::to_string(dst));
  if (src == dst) return Route{{src}, 0.0};

  const auto from_src = dijkstra(net, src);
  const auto total_it = from_src.find(dst);
  if (total_it == from_src.end()) {
    throw NoPath("no path from " + std::to_string(src) + " to " + std::to_string(dst));
  }
  const double total = total_it->second;
  const auto to_dst = dijkstra(net, dst);
  const double eps = 1e-9 * std::max(1.0, total);

  // Walk forward taking the smallest neighbour that stays on some shortest
  // path; this yields the lexicographically smallest optimal sequence.
  Route route;
  route.nodes.push_back(src);
  PlaceId u = src;
  double walked = 0.0;
  while (u != dst) {
    const auto& edges = net.neighbours(u);
    bool advanced = false;
    for (const auto& e : edges) {
      auto rest = to_dst.find(e.to);
      if (rest == to_dst.end()) continue;
      if (std::find(route.nodes.begin(), route.nodes.end(), e.to) != route.nodes.end()) continue;
      if (std::abs(walked + e.cost + rest->second - total) <= eps) {
        walked += e.cost;
        u = e.to;
        route.nodes.push_back(u);
        advanced = true;
        break;
      }
    }
    if (!advanced) throw NoPath("internal: shortest path reconstruction failed");
  }
  route.total_km = walked;
  return route;
}

}  // namespace geosir
