#pragma once

// Test fixtures, random generators and brute-force oracles.

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "geosir/gazetteer.hpp"
#include "geosir/geo.hpp"
#include "geosir/semantic_expander.hpp"
#include "geosir/snapshot.hpp"
#include "geosir/text.hpp"
#include "geosir/text_index.hpp"

namespace geosir::testing {

inline std::filesystem::path data_path(const std::string& name) {
  return std::filesystem::path(GEOSIR_TEST_DATA) / name;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Gazetteer fixture_gazetteer() {
  std::ifstream in(data_path("gazetteer.tsv"));
  return Gazetteer::load_tsv(in);
}

inline ConceptLexicon fixture_lexicon() {
  std::ifstream in(data_path("lexicon.json"));
  return ConceptLexicon::load_json(in);
}

inline std::vector<Document> fixture_docs() {
  std::ifstream in(data_path("hotels.jsonl"));
  return load_corpus_jsonl(in);
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("geosir-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// Builds the hotel fixture snapshot into `dir`.
inline BuildReport build_fixture(const std::filesystem::path& dir, bool with_lexicon = true,
                                 bool with_network = true) {
  BuildInputs in{data_path("gazetteer.tsv"), data_path("hotels.jsonl"), std::nullopt, std::nullopt};
  if (with_lexicon) in.lexicon = data_path("lexicon.json");
  if (with_network) in.network = data_path("network.tsv");
  return build_snapshot(in, dir);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(gen_); }
  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(integer(0, static_cast<int>(v.size()) - 1))];
  }
  std::mt19937_64& engine() { return gen_; }

  GeoPoint point(double lat_lim = 90.0, double lon_lim = 180.0) {
    return {uniform(-lat_lim, lat_lim), uniform(-lon_lim, lon_lim)};
  }
  BBox box(double max_span = 20.0, double lat_lim = 70.0, double lon_lim = 160.0) {
    const GeoPoint c = point(lat_lim, lon_lim);
    const double h = uniform(0.0, max_span / 2), w = uniform(0.0, max_span / 2);
    return {c.lat - h, c.lon - w, c.lat + h, c.lon + w};
  }
  // Star-shaped around a random center: simple, often concave.
  Polygon polygon(double max_radius = 10.0, double lat_lim = 70.0, double lon_lim = 160.0) {
    const GeoPoint c = point(lat_lim, lon_lim);
    const int n = integer(3, 9);
    std::vector<double> angles;
    for (int i = 0; i < n; ++i) angles.push_back(uniform(0.0, 2 * std::numbers::pi));
    std::sort(angles.begin(), angles.end());
    angles.erase(std::unique(angles.begin(), angles.end()), angles.end());
    while (angles.size() < 3) angles.push_back(angles.back() + 0.5);
    std::vector<GeoPoint> ring;
    for (double a : angles) {
      const double r = uniform(0.1, 1.0) * max_radius;
      ring.push_back({c.lat + r * std::sin(a), c.lon + r * std::cos(a)});
    }
    return Polygon(ring);
  }
  Geometry geometry() {
    switch (integer(0, 2)) {
      case 0: return point(80.0, 175.0);
      case 1: return box();
      default: return polygon();
    }
  }

 private:
  std::mt19937_64 gen_;
};

namespace oracle {

// Central angle from unit vectors: atan2(|a x b|, a . b).
inline double great_circle_km(const GeoPoint& a, const GeoPoint& b) {
  auto unit = [](const GeoPoint& p) {
    const double la = p.lat * std::numbers::pi / 180, lo = p.lon * std::numbers::pi / 180;
    return std::array<double, 3>{std::cos(la) * std::cos(lo), std::cos(la) * std::sin(lo), std::sin(la)};
  };
  const auto u = unit(a), v = unit(b);
  const std::array<double, 3> x{u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
  const double cross = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
  const double dot = u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
  return kEarthRadiusKm * std::atan2(cross, dot);
}

inline double orient(const GeoPoint& a, const GeoPoint& b, const GeoPoint& c) {
  return (b.lon - a.lon) * (c.lat - a.lat) - (b.lat - a.lat) * (c.lon - a.lon);
}

inline bool on_segment(const GeoPoint& p, const GeoPoint& a, const GeoPoint& b) {
  return orient(a, b, p) == 0.0 && p.lat >= std::min(a.lat, b.lat) && p.lat <= std::max(a.lat, b.lat) &&
         p.lon >= std::min(a.lon, b.lon) && p.lon <= std::max(a.lon, b.lon);
}

inline bool segments_cross(const GeoPoint& a, const GeoPoint& b, const GeoPoint& c, const GeoPoint& d) {
  const double o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0)) && ((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0))) return true;
  return on_segment(c, a, b) || on_segment(d, a, b) || on_segment(a, c, d) || on_segment(b, c, d);
}

// Winding number, with the boundary counted as inside.
inline bool ring_contains(const std::vector<GeoPoint>& ring, const GeoPoint& p) {
  int wn = 0;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const GeoPoint& a = ring[i];
    const GeoPoint& b = ring[(i + 1) % ring.size()];
    if (on_segment(p, a, b)) return true;
    if (a.lat <= p.lat) {
      if (b.lat > p.lat && orient(a, b, p) > 0) ++wn;
    } else if (b.lat <= p.lat && orient(a, b, p) < 0) {
      --wn;
    }
  }
  return wn != 0;
}

inline std::vector<GeoPoint> ring_of(const Geometry& g) {
  if (const auto* b = std::get_if<BBox>(&g)) {
    return {{b->min_lat, b->min_lon}, {b->min_lat, b->max_lon}, {b->max_lat, b->max_lon}, {b->max_lat, b->min_lon}};
  }
  const auto r = std::get<Polygon>(g).ring();
  return {r.begin(), r.end()};
}

inline bool contains(const Geometry& g, const GeoPoint& p) {
  if (const auto* q = std::get_if<GeoPoint>(&g)) {
    return std::abs(q->lat - p.lat) <= kPointEpsilonDeg && std::abs(q->lon - p.lon) <= kPointEpsilonDeg;
  }
  if (const auto* b = std::get_if<BBox>(&g)) {
    return p.lat >= b->min_lat && p.lat <= b->max_lat && p.lon >= b->min_lon && p.lon <= b->max_lon;
  }
  return ring_contains(ring_of(g), p);
}

inline bool intersects(const Geometry& a, const Geometry& b) {
  if (const auto* p = std::get_if<GeoPoint>(&a)) return contains(b, *p);
  if (const auto* p = std::get_if<GeoPoint>(&b)) return contains(a, *p);
  const auto ra = ring_of(a), rb = ring_of(b);
  for (std::size_t i = 0; i < ra.size(); ++i) {
    for (std::size_t j = 0; j < rb.size(); ++j) {
      if (segments_cross(ra[i], ra[(i + 1) % ra.size()], rb[j], rb[(j + 1) % rb.size()])) return true;
    }
  }
  return ring_contains(rb, ra[0]) || ring_contains(ra, rb[0]);
}

struct PathResult {
  double cost = std::numeric_limits<double>::infinity();
  std::vector<PlaceId> nodes;
};

// Every simple path from src to dst; minimum cost, lexicographically
// smallest node sequence among ties.
inline PathResult best_simple_path(const std::map<PlaceId, std::map<PlaceId, double>>& adj, PlaceId src,
                                   PlaceId dst) {
  PathResult best;
  std::vector<PlaceId> path{src};
  std::set<PlaceId> seen{src};
  std::function<void(PlaceId, double)> dfs = [&](PlaceId u, double cost) {
    if (u == dst) {
      const double tol = 1e-9 * std::max(1.0, cost);
      if (cost < best.cost - tol || (std::abs(cost - best.cost) <= tol && path < best.nodes)) {
        best.cost = cost;
        best.nodes = path;
      }
      return;
    }
    auto it = adj.find(u);
    if (it == adj.end()) return;
    for (const auto& [v, w] : it->second) {
      if (seen.contains(v)) continue;
      seen.insert(v);
      path.push_back(v);
      dfs(v, cost + w);
      path.pop_back();
      seen.erase(v);
    }
  };
  dfs(src, 0.0);
  return best;
}

// Term counts straight from the tokenizer: title twice, body once.
inline std::map<std::string, std::uint32_t> recount(const Document& d) {
  std::map<std::string, std::uint32_t> tf;
  for (const auto& t : tokenize(d.title)) tf[t] += 2;
  for (const auto& t : tokenize(d.body)) tf[t] += 1;
  return tf;
}

inline double bm25(double tf, double df, double n, double len, double avglen, double k1 = 1.2, double b = 0.75) {
  if (tf == 0) return 0.0;
  const double idf = std::log(1.0 + (n - df + 0.5) / (df + 0.5));
  return idf * tf * (k1 + 1) / (tf + k1 * (1 - b + b * len / avglen));
}

// Boolean conjunction of disjunctions by scanning each document's tokens.
inline std::set<std::string> boolean_scan(const std::vector<Document>& docs,
                                          const std::vector<std::set<std::string>>& groups) {
  std::set<std::string> out;
  for (const auto& d : docs) {
    const auto tf = recount(d);
    const bool ok = std::all_of(groups.begin(), groups.end(), [&](const std::set<std::string>& g) {
      return std::any_of(g.begin(), g.end(), [&](const std::string& t) { return tf.contains(t); });
    });
    if (ok) out.insert(d.doc_id);
  }
  return out;
}

}  // namespace oracle

// Random alphabetic corpus over a small vocabulary.
inline std::vector<Document> random_corpus(Rng& rng, const std::vector<std::string>& vocab, int docs,
                                           int max_len = 12) {
  std::vector<Document> out;
  for (int i = 0; i < docs; ++i) {
    Document d;
    d.doc_id = "r" + std::to_string(i);
    d.uri = "http://example.org/r/" + std::to_string(i);
    const int tl = rng.integer(0, 3), bl = rng.integer(0, max_len);
    for (int k = 0; k < tl; ++k) d.title += (k ? " " : "") + rng.pick(vocab);
    for (int k = 0; k < bl; ++k) d.body += (k ? " " : "") + rng.pick(vocab);
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace geosir::testing
