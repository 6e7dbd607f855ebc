#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <utility>

#include "tiltmap/error.hpp"
#include "tiltmap/geodata.hpp"

namespace tiltmap {
namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

using Vec3 = std::array<double, 3>;

Vec3 to_unit(GeoPosition p) {
  const double lon = p.lon * kDeg, lat = p.lat * kDeg;
  return {std::cos(lat) * std::cos(lon), std::cos(lat) * std::sin(lon), std::sin(lat)};
}

double wrap_degrees(double d) {
  while (d > 180.0) d -= 360.0;
  while (d <= -180.0) d += 360.0;
  return d;
}

}  // namespace

double great_circle_deg(GeoPosition p, GeoPosition q) {
  // Vincenty's special case of the inverse formula; stable at 0 and 180.
  // Canonical argument order makes the result exactly symmetric.
  if (q.lat < p.lat || (q.lat == p.lat && q.lon < p.lon)) std::swap(p, q);
  const double phi1 = p.lat * kDeg, phi2 = q.lat * kDeg;
  const double dl = (q.lon - p.lon) * kDeg;
  const double y1 = std::cos(phi2) * std::sin(dl);
  const double y2 = std::cos(phi1) * std::sin(phi2) - std::sin(phi1) * std::cos(phi2) * std::cos(dl);
  const double x = std::sin(phi1) * std::sin(phi2) + std::cos(phi1) * std::cos(phi2) * std::cos(dl);
  return std::atan2(std::hypot(y1, y2), x) / kDeg;
}

double ring_spherical_area(const Ring& ring) {
  if (ring.size() < 4) throw Error(Errc::DegenerateRing, "ring has fewer than 4 vertices");
  // Per-edge signed excess of the quadrilateral between the edge and the
  // equator: tan(E/2) = tan(dlon/2) (t1 + t2) / (1 + t1 t2), t = tan(lat/2).
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
    const double dl = wrap_degrees(ring[i + 1].lon - ring[i].lon) * kDeg;
    const double t1 = std::tan(ring[i].lat * kDeg / 2.0);
    const double t2 = std::tan(ring[i + 1].lat * kDeg / 2.0);
    sum += 2.0 * std::atan2(std::tan(dl / 2.0) * (t1 + t2), 1.0 + t1 * t2);
  }
  double area = std::abs(sum);
  if (area > 2.0 * std::numbers::pi) area = 4.0 * std::numbers::pi - area;
  return area;
}

double spherical_area(const Polygon& polygon) {
  double area = ring_spherical_area(polygon.outer);
  for (const Ring& hole : polygon.holes) area -= ring_spherical_area(hole);
  return area;
}

GeoPosition centroid_of(const std::vector<Polygon>& polygons) {
  Vec3 acc{0.0, 0.0, 0.0};
  Vec3 plain{0.0, 0.0, 0.0};
  for (const Polygon& poly : polygons) {
    const Ring& r = poly.outer;
    for (std::size_t i = 0; i + 1 < r.size(); ++i) {
      const Vec3 a = to_unit(r[i]), b = to_unit(r[i + 1]);
      Vec3 mid{a[0] + b[0], a[1] + b[1], a[2] + b[2]};
      const double norm = std::sqrt(mid[0] * mid[0] + mid[1] * mid[1] + mid[2] * mid[2]);
      if (norm == 0.0) continue;
      const double arc = great_circle_deg(r[i], r[i + 1]);
      for (int k = 0; k < 3; ++k) {
        acc[k] += arc * mid[k] / norm;
        plain[k] += a[k];
      }
    }
  }
  Vec3 v = acc;
  if (v[0] == 0.0 && v[1] == 0.0 && v[2] == 0.0) v = plain;
  const double norm = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  if (norm == 0.0) throw Error(Errc::DegenerateRing, "cannot place centroid");
  return {std::atan2(v[1], v[0]) / kDeg, std::asin(std::clamp(v[2] / norm, -1.0, 1.0)) / kDeg};
}

}  // namespace tiltmap
