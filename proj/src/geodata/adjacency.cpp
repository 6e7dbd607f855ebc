#include <algorithm>
#include <cmath>

#include "tiltmap/geodata.hpp"

namespace tiltmap {
namespace {

// Perpendicular distance tolerance for "same line" / "same point", degrees.
constexpr double kTouchTolDeg = 1e-9;

struct Segment {
  GeoPosition a, b;
  double min_lon, max_lon, min_lat, max_lat;
};

struct Box {
  double min_lon = 1e300, max_lon = -1e300, min_lat = 1e300, max_lat = -1e300;
  bool overlaps(const Box& o, double pad) const {
    return min_lon <= o.max_lon + pad && o.min_lon <= max_lon + pad && min_lat <= o.max_lat + pad &&
           o.min_lat <= max_lat + pad;
  }
};

std::vector<Segment> segments_of(const Area& area, Box& box) {
  std::vector<Segment> out;
  auto add_ring = [&](const Ring& r) {
    for (std::size_t i = 0; i + 1 < r.size(); ++i) {
      const GeoPosition a = r[i], b = r[i + 1];
      out.push_back({a, b, std::min(a.lon, b.lon), std::max(a.lon, b.lon), std::min(a.lat, b.lat),
                     std::max(a.lat, b.lat)});
      box.min_lon = std::min(box.min_lon, a.lon);
      box.max_lon = std::max(box.max_lon, a.lon);
      box.min_lat = std::min(box.min_lat, a.lat);
      box.max_lat = std::max(box.max_lat, a.lat);
    }
  };
  for (const Polygon& p : area.polygons) {
    add_ring(p.outer);
    for (const Ring& h : p.holes) add_ring(h);
  }
  return out;
}

double cross(double ax, double ay, double bx, double by) { return ax * by - ay * bx; }

double point_segment_distance(GeoPosition p, const Segment& s) {
  const double dx = s.b.lon - s.a.lon, dy = s.b.lat - s.a.lat;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0.0 ? ((p.lon - s.a.lon) * dx + (p.lat - s.a.lat) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.lon - (s.a.lon + t * dx), p.lat - (s.a.lat + t * dy));
}

/// Arc length (degrees) of the collinear overlap of two segments; 0 when
/// they are not collinear or only touch.
double shared_length(const Segment& e, const Segment& f) {
  const double dx = e.b.lon - e.a.lon, dy = e.b.lat - e.a.lat;
  const double len = std::hypot(dx, dy);
  if (len == 0.0) return 0.0;
  const double c1 = cross(dx, dy, f.a.lon - e.a.lon, f.a.lat - e.a.lat) / len;
  const double c2 = cross(dx, dy, f.b.lon - e.a.lon, f.b.lat - e.a.lat) / len;
  if (std::abs(c1) > kTouchTolDeg || std::abs(c2) > kTouchTolDeg) return 0.0;
  const double len2 = len * len;
  const double ta = ((f.a.lon - e.a.lon) * dx + (f.a.lat - e.a.lat) * dy) / len2;
  const double tb = ((f.b.lon - e.a.lon) * dx + (f.b.lat - e.a.lat) * dy) / len2;
  const double lo = std::max(0.0, std::min(ta, tb));
  const double hi = std::min(1.0, std::max(ta, tb));
  if (hi <= lo) return 0.0;
  const GeoPosition p{e.a.lon + lo * dx, e.a.lat + lo * dy};
  const GeoPosition q{e.a.lon + hi * dx, e.a.lat + hi * dy};
  return great_circle_deg(p, q);
}

bool segments_touch(const Segment& e, const Segment& f) {
  if (point_segment_distance(e.a, f) <= kTouchTolDeg || point_segment_distance(e.b, f) <= kTouchTolDeg ||
      point_segment_distance(f.a, e) <= kTouchTolDeg || point_segment_distance(f.b, e) <= kTouchTolDeg) {
    return true;
  }
  const double d1 = cross(e.b.lon - e.a.lon, e.b.lat - e.a.lat, f.a.lon - e.a.lon, f.a.lat - e.a.lat);
  const double d2 = cross(e.b.lon - e.a.lon, e.b.lat - e.a.lat, f.b.lon - e.a.lon, f.b.lat - e.a.lat);
  const double d3 = cross(f.b.lon - f.a.lon, f.b.lat - f.a.lat, e.a.lon - f.a.lon, e.a.lat - f.a.lat);
  const double d4 = cross(f.b.lon - f.a.lon, f.b.lat - f.a.lat, e.b.lon - f.a.lon, e.b.lat - f.a.lat);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

}  // namespace

GeoMap build_adjacency(const GeoMap& map, Contiguity mode, double min_shared_length_deg) {
  const std::size_t n = map.size();
  std::vector<std::vector<Segment>> segs(n);
  std::vector<Box> boxes(n);
  for (std::size_t i = 0; i < n; ++i) segs[i] = segments_of(map.area(i), boxes[i]);

  Adjacency adj(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!boxes[i].overlaps(boxes[j], kTouchTolDeg)) continue;
      double shared = 0.0;
      bool touch = false;
      for (const Segment& e : segs[i]) {
        for (const Segment& f : segs[j]) {
          if (e.max_lon + kTouchTolDeg < f.min_lon || f.max_lon + kTouchTolDeg < e.min_lon ||
              e.max_lat + kTouchTolDeg < f.min_lat || f.max_lat + kTouchTolDeg < e.min_lat) {
            continue;
          }
          shared += shared_length(e, f);
          if (mode == Contiguity::Queen && !touch) touch = segments_touch(e, f);
        }
      }
      if (shared > min_shared_length_deg || touch) adj.connect(i, j);
    }
  }
  return map.with_adjacency(std::move(adj));
}

}  // namespace tiltmap
