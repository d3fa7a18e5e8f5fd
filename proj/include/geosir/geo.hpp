#pragma once

#include <span>
#include <variant>
#include <vector>

namespace geosir {

// Mean Earth radius used by every distance computation.
inline constexpr double kEarthRadiusKm = 6371.0;

struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

// Finite and within [-90, 90] x [-180, 180].
bool is_valid(const GeoPoint& p) noexcept;

// Throws InvalidArgument when the coordinates are out of range.
GeoPoint make_point(double lat, double lon);

// Closed axis-aligned box in degrees. Antimeridian-crossing boxes are not
// representable.
struct BBox {
  double min_lat = 0.0;
  double min_lon = 0.0;
  double max_lat = 0.0;
  double max_lon = 0.0;

  static BBox of(const GeoPoint& p) noexcept { return {p.lat, p.lon, p.lat, p.lon}; }

  bool contains(const GeoPoint& p) const noexcept {
    return p.lat >= min_lat && p.lat <= max_lat && p.lon >= min_lon &&
           p.lon <= max_lon;
  }
  bool strictly_contains(const GeoPoint& p) const noexcept {
    return p.lat > min_lat && p.lat < max_lat && p.lon > min_lon &&
           p.lon < max_lon;
  }
  bool contains(const BBox& o) const noexcept {
    return o.min_lat >= min_lat && o.max_lat <= max_lat &&
           o.min_lon >= min_lon && o.max_lon <= max_lon;
  }
  GeoPoint center() const noexcept {
    return {(min_lat + max_lat) / 2.0, (min_lon + max_lon) / 2.0};
  }
  // Area in square degrees.
  double area() const noexcept { return (max_lat - min_lat) * (max_lon - min_lon); }

  void expand(const GeoPoint& p) noexcept;
  void expand(const BBox& b) noexcept;

  friend bool operator==(const BBox&, const BBox&) = default;
};

bool is_valid(const BBox& b) noexcept;
BBox make_bbox(double min_lat, double min_lon, double max_lat, double max_lon);

// True iff the closed boxes share at least one point.
bool bbox_intersects(const BBox& a, const BBox& b) noexcept;

// Simple polygon without holes; the ring is implicitly closed.
class Polygon {
 public:
  // Throws InvalidArgument on fewer than three vertices, invalid points, or
  // repeated consecutive vertices. A trailing copy of the first vertex is
  // dropped.
  explicit Polygon(std::vector<GeoPoint> ring);

  std::span<const GeoPoint> ring() const noexcept { return ring_; }
  const BBox& bbox() const noexcept { return bbox_; }

  // Area centroid; falls back to the vertex mean for (near) zero area rings.
  GeoPoint centroid() const noexcept;

  friend bool operator==(const Polygon& a, const Polygon& b) { return a.ring_ == b.ring_; }

 private:
  std::vector<GeoPoint> ring_;
  BBox bbox_;
};

// Even-odd ray casting in the lat/lon plane. Points on an edge or vertex are
// inside.
bool point_in_polygon(const GeoPoint& p, const Polygon& poly) noexcept;

// Great-circle distance on a sphere of radius kEarthRadiusKm.
double haversine_km(const GeoPoint& a, const GeoPoint& b) noexcept;

using Geometry = std::variant<GeoPoint, BBox, Polygon>;

BBox bbox_of(const Geometry& g) noexcept;

// The point itself, the box center, or the polygon centroid.
GeoPoint representative_point(const Geometry& g) noexcept;

// Tolerance for point-to-point equality in degrees.
inline constexpr double kPointEpsilonDeg = 1e-9;

// Containment of a probe point: point equality within kPointEpsilonDeg,
// closed box containment, or point_in_polygon.
bool geometry_contains(const Geometry& g, const GeoPoint& p) noexcept;

// Closed-set intersection of two geometries.
bool geometries_intersect(const Geometry& a, const Geometry& b) noexcept;

// Closed segments [p1, p2] and [q1, q2] share a point (planar).
bool segments_intersect(const GeoPoint& p1, const GeoPoint& p2,
                        const GeoPoint& q1, const GeoPoint& q2) noexcept;

}  // namespace geosir
