#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "tiltmap/error.hpp"
#include "tiltmap/geodata.hpp"

namespace tiltmap {
namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

}  // namespace

Vec2 Projection::raw(GeoPosition p) const {
  const double phi1 = center.lat * kDeg, phi = p.lat * kDeg;
  const double dl = (p.lon - center.lon) * kDeg;
  const double cos_c = std::sin(phi1) * std::sin(phi) + std::cos(phi1) * std::cos(phi) * std::cos(dl);
  if (1.0 + cos_c < 1e-12) {
    throw Error(Errc::AntipodalPoint, "position (" + std::to_string(p.lon) + ", " + std::to_string(p.lat) +
                                          ") is antipodal to the projection center");
  }
  const double k = std::sqrt(2.0 / (1.0 + cos_c));
  return {k * std::cos(phi) * std::sin(dl),
          k * (std::cos(phi1) * std::sin(phi) - std::sin(phi1) * std::cos(phi) * std::cos(dl))};
}

Vec2 Projection::apply(GeoPosition p) const {
  const Vec2 r = raw(p);
  return {scale * r.x + offset.x, scale * r.y + offset.y};
}

GeoPosition bbox_center(const GeoMap& map) {
  double min_lon = 180.0, max_lon = -180.0, min_lat = 90.0, max_lat = -90.0;
  for (const Area& a : map.areas()) {
    for (const Polygon& p : a.polygons) {
      for (const GeoPosition& q : p.outer) {
        min_lon = std::min(min_lon, q.lon);
        max_lon = std::max(max_lon, q.lon);
        min_lat = std::min(min_lat, q.lat);
        max_lat = std::max(max_lat, q.lat);
      }
    }
  }
  return {(min_lon + max_lon) / 2.0, (min_lat + max_lat) / 2.0};
}

GeoMap project(const GeoMap& map, GeoPosition center) {
  Projection proj{center, 1.0, {0.0, 0.0}};

  double min_x = std::numeric_limits<double>::infinity(), min_y = min_x;
  double max_x = -min_x, max_y = -min_x;
  for (const Area& a : map.areas()) {
    for (const Polygon& p : a.polygons) {
      for (const GeoPosition& q : p.outer) {
        const Vec2 r = proj.raw(q);
        min_x = std::min(min_x, r.x);
        max_x = std::max(max_x, r.x);
        min_y = std::min(min_y, r.y);
        max_y = std::max(max_y, r.y);
      }
    }
  }
  const double side = std::max(max_x - min_x, max_y - min_y);
  if (!(side > 0.0)) throw Error(Errc::DegenerateRing, "map has zero planar extent");
  proj.scale = 1.0 / side;
  proj.offset = {0.5 - proj.scale * (min_x + max_x) / 2.0, 0.5 - proj.scale * (min_y + max_y) / 2.0};

  auto ring = [&](const Ring& r) {
    PlanarRing out;
    out.reserve(r.size());
    for (const GeoPosition& q : r) out.push_back(proj.apply(q));
    return out;
  };

  std::vector<Area> areas = map.areas();
  for (Area& a : areas) {
    a.planar.clear();
    for (const Polygon& p : a.polygons) {
      PlanarPolygon pp;
      pp.outer = ring(p.outer);
      for (const Ring& h : p.holes) pp.holes.push_back(ring(h));
      a.planar.push_back(std::move(pp));
    }
    a.planar_centroid = proj.apply(a.centroid);
  }
  return GeoMap(std::move(areas), map.adjacency(), proj);
}

}  // namespace tiltmap
