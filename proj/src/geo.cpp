#include "geosir/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "geosir/error.hpp"

namespace geosir {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

// Sign of the cross product (b - a) x (c - a), lon as x and lat as y.
int orientation(const GeoPoint& a, const GeoPoint& b, const GeoPoint& c) noexcept {
  const double v = (b.lon - a.lon) * (c.lat - a.lat) - (b.lat - a.lat) * (c.lon - a.lon);
  return (v > 0.0) - (v < 0.0);
}

// c is collinear with [a, b]; test whether it lies within the segment's box.
bool on_segment_box(const GeoPoint& a, const GeoPoint& b, const GeoPoint& c) noexcept {
  return std::min(a.lon, b.lon) <= c.lon && c.lon <= std::max(a.lon, b.lon) &&
         std::min(a.lat, b.lat) <= c.lat && c.lat <= std::max(a.lat, b.lat);
}

bool point_on_boundary(const GeoPoint& p, std::span<const GeoPoint> ring) noexcept {
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    const GeoPoint& a = ring[i];
    const GeoPoint& b = ring[(i + 1) % n];
    if (orientation(a, b, p) == 0 && on_segment_box(a, b, p)) return true;
  }
  return false;
}

std::vector<GeoPoint> box_ring(const BBox& b) {
  return {{b.min_lat, b.min_lon}, {b.min_lat, b.max_lon},
          {b.max_lat, b.max_lon}, {b.max_lat, b.min_lon}};
}

bool ring_edges_cross(std::span<const GeoPoint> r1, std::span<const GeoPoint> r2) noexcept {
  const std::size_t n1 = r1.size();
  const std::size_t n2 = r2.size();
  for (std::size_t i = 0; i < n1; ++i) {
    const GeoPoint& a = r1[i];
    const GeoPoint& b = r1[(i + 1) % n1];
    for (std::size_t j = 0; j < n2; ++j) {
      if (segments_intersect(a, b, r2[j], r2[(j + 1) % n2])) return true;
    }
  }
  return false;
}

bool polygons_intersect(const Polygon& a, const Polygon& b) noexcept {
  if (!bbox_intersects(a.bbox(), b.bbox())) return false;
  if (point_in_polygon(a.ring()[0], b) || point_in_polygon(b.ring()[0], a)) return true;
  return ring_edges_cross(a.ring(), b.ring());
}

bool polygon_box_intersect(const Polygon& poly, const BBox& box) noexcept {
  if (!bbox_intersects(poly.bbox(), box)) return false;
  for (const GeoPoint& v : poly.ring()) {
    if (box.contains(v)) return true;
  }
  const auto corners = box_ring(box);
  if (point_in_polygon(corners[0], poly)) return true;
  // Degenerate boxes still have well-defined edges as segments.
  return ring_edges_cross(poly.ring(), corners);
}

}  // namespace

bool is_valid(const GeoPoint& p) noexcept {
  return std::isfinite(p.lat) && std::isfinite(p.lon) && p.lat >= -90.0 &&
         p.lat <= 90.0 && p.lon >= -180.0 && p.lon <= 180.0;
}

GeoPoint make_point(double lat, double lon) {
  GeoPoint p{lat, lon};
  if (!is_valid(p)) {
    std::ostringstream os;
    os << "coordinates out of range: (" << lat << ", " << lon << ")";
    throw InvalidArgument(os.str());
  }
  return p;
}

void BBox::expand(const GeoPoint& p) noexcept {
  min_lat = std::min(min_lat, p.lat);
  min_lon = std::min(min_lon, p.lon);
  max_lat = std::max(max_lat, p.lat);
  max_lon = std::max(max_lon, p.lon);
}

void BBox::expand(const BBox& b) noexcept {
  min_lat = std::min(min_lat, b.min_lat);
  min_lon = std::min(min_lon, b.min_lon);
  max_lat = std::max(max_lat, b.max_lat);
  max_lon = std::max(max_lon, b.max_lon);
}

bool is_valid(const BBox& b) noexcept {
  return is_valid(GeoPoint{b.min_lat, b.min_lon}) &&
         is_valid(GeoPoint{b.max_lat, b.max_lon}) && b.min_lat <= b.max_lat &&
         b.min_lon <= b.max_lon;
}

BBox make_bbox(double min_lat, double min_lon, double max_lat, double max_lon) {
  BBox b{min_lat, min_lon, max_lat, max_lon};
  if (!is_valid(b)) throw InvalidArgument("invalid bounding box");
  return b;
}

bool bbox_intersects(const BBox& a, const BBox& b) noexcept {
  return a.min_lat <= b.max_lat && b.min_lat <= a.max_lat &&
         a.min_lon <= b.max_lon && b.min_lon <= a.max_lon;
}

Polygon::Polygon(std::vector<GeoPoint> ring) : ring_(std::move(ring)) {
  if (ring_.size() > 3 && ring_.front() == ring_.back()) ring_.pop_back();
  if (ring_.size() < 3) throw InvalidArgument("polygon needs at least 3 vertices");
  for (std::size_t i = 0; i < ring_.size(); ++i) {
    if (!is_valid(ring_[i])) throw InvalidArgument("polygon vertex out of range");
    if (ring_[i] == ring_[(i + 1) % ring_.size()]) {
      throw InvalidArgument("polygon has repeated consecutive vertices");
    }
  }
  bbox_ = BBox::of(ring_[0]);
  for (const GeoPoint& p : ring_) bbox_.expand(p);
}

GeoPoint Polygon::centroid() const noexcept {
  // Shoelace relative to the first vertex for numerical stability.
  const GeoPoint o = ring_[0];
  double twice_area = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  const std::size_t n = ring_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double x0 = ring_[i].lon - o.lon;
    const double y0 = ring_[i].lat - o.lat;
    const double x1 = ring_[(i + 1) % n].lon - o.lon;
    const double y1 = ring_[(i + 1) % n].lat - o.lat;
    const double cross = x0 * y1 - x1 * y0;
    twice_area += cross;
    cx += (x0 + x1) * cross;
    cy += (y0 + y1) * cross;
  }
  const double scale = bbox_.area();
  if (std::abs(twice_area) <= 1e-12 * std::max(scale, 1e-300)) {
    GeoPoint mean{0.0, 0.0};
    for (const GeoPoint& p : ring_) {
      mean.lat += p.lat;
      mean.lon += p.lon;
    }
    mean.lat /= static_cast<double>(n);
    mean.lon /= static_cast<double>(n);
    return mean;
  }
  GeoPoint c{o.lat + cy / (3.0 * twice_area), o.lon + cx / (3.0 * twice_area)};
  // Rounding may push the centroid of a sliver just outside its box.
  c.lat = std::clamp(c.lat, bbox_.min_lat, bbox_.max_lat);
  c.lon = std::clamp(c.lon, bbox_.min_lon, bbox_.max_lon);
  return c;
}

bool point_in_polygon(const GeoPoint& p, const Polygon& poly) noexcept {
  if (!poly.bbox().contains(p)) return false;
  const auto ring = poly.ring();
  if (point_on_boundary(p, ring)) return true;
  bool inside = false;
  const std::size_t n = ring.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const GeoPoint& a = ring[i];
    const GeoPoint& b = ring[j];
    if ((a.lat > p.lat) != (b.lat > p.lat)) {
      const double x = a.lon + (p.lat - a.lat) * (b.lon - a.lon) / (b.lat - a.lat);
      if (p.lon < x) inside = !inside;
    }
  }
  return inside;
}

double haversine_km(const GeoPoint& a, const GeoPoint& b) noexcept {
  const double phi1 = a.lat * kDegToRad;
  const double phi2 = b.lat * kDegToRad;
  const double dphi = (b.lat - a.lat) * kDegToRad;
  const double dlambda = (b.lon - a.lon) * kDegToRad;
  const double s1 = std::sin(dphi / 2.0);
  const double s2 = std::sin(dlambda / 2.0);
  double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
  h = std::clamp(h, 0.0, 1.0);
  return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(h));
}

BBox bbox_of(const Geometry& g) noexcept {
  struct Visitor {
    BBox operator()(const GeoPoint& p) const noexcept { return BBox::of(p); }
    BBox operator()(const BBox& b) const noexcept { return b; }
    BBox operator()(const Polygon& poly) const noexcept { return poly.bbox(); }
  };
  return std::visit(Visitor{}, g);
}

GeoPoint representative_point(const Geometry& g) noexcept {
  struct Visitor {
    GeoPoint operator()(const GeoPoint& p) const noexcept { return p; }
    GeoPoint operator()(const BBox& b) const noexcept { return b.center(); }
    GeoPoint operator()(const Polygon& poly) const noexcept { return poly.centroid(); }
  };
  return std::visit(Visitor{}, g);
}

bool geometry_contains(const Geometry& g, const GeoPoint& p) noexcept {
  struct Visitor {
    const GeoPoint& probe;
    bool operator()(const GeoPoint& q) const noexcept {
      return std::abs(q.lat - probe.lat) <= kPointEpsilonDeg &&
             std::abs(q.lon - probe.lon) <= kPointEpsilonDeg;
    }
    bool operator()(const BBox& b) const noexcept { return b.contains(probe); }
    bool operator()(const Polygon& poly) const noexcept { return point_in_polygon(probe, poly); }
  };
  return std::visit(Visitor{p}, g);
}

bool geometries_intersect(const Geometry& a, const Geometry& b) noexcept {
  struct Visitor {
    bool operator()(const GeoPoint& p, const GeoPoint& q) const noexcept { return p == q; }
    bool operator()(const GeoPoint& p, const BBox& b) const noexcept { return b.contains(p); }
    bool operator()(const GeoPoint& p, const Polygon& poly) const noexcept {
      return point_in_polygon(p, poly);
    }
    bool operator()(const BBox& b, const BBox& c) const noexcept { return bbox_intersects(b, c); }
    bool operator()(const BBox& b, const Polygon& poly) const noexcept {
      return polygon_box_intersect(poly, b);
    }
    bool operator()(const Polygon& p, const Polygon& q) const noexcept {
      return polygons_intersect(p, q);
    }
    // Remaining combinations are the mirrored cases.
    bool operator()(const BBox& b, const GeoPoint& p) const noexcept { return (*this)(p, b); }
    bool operator()(const Polygon& poly, const GeoPoint& p) const noexcept { return (*this)(p, poly); }
    bool operator()(const Polygon& poly, const BBox& b) const noexcept { return (*this)(b, poly); }
  };
  return std::visit(Visitor{}, a, b);
}

bool segments_intersect(const GeoPoint& p1, const GeoPoint& p2,
                        const GeoPoint& q1, const GeoPoint& q2) noexcept {
  const int o1 = orientation(p1, p2, q1);
  const int o2 = orientation(p1, p2, q2);
  const int o3 = orientation(q1, q2, p1);
  const int o4 = orientation(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment_box(p1, p2, q1)) return true;
  if (o2 == 0 && on_segment_box(p1, p2, q2)) return true;
  if (o3 == 0 && on_segment_box(q1, q2, p1)) return true;
  if (o4 == 0 && on_segment_box(q1, q2, p2)) return true;
  return false;
}

}  // namespace geosir
