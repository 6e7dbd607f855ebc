#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "tiltmap/error.hpp"
#include "tiltmap/geodata.hpp"

namespace tiltmap {
namespace {

using nlohmann::json;

double lonlat_signed_area(const Ring& r) {
  double a = 0.0;
  for (std::size_t i = 0; i + 1 < r.size(); ++i) {
    a += r[i].lon * r[i + 1].lat - r[i + 1].lon * r[i].lat;
  }
  return a / 2.0;
}

GeoPosition parse_position(const json& j, const std::string& feature) {
  if (!j.is_array() || j.size() < 2 || !j[0].is_number() || !j[1].is_number()) {
    throw Error(Errc::MalformedDocument, "feature '" + feature + "': bad position");
  }
  const GeoPosition p{j[0].get<double>(), j[1].get<double>()};
  if (!(p.lon >= -180.0 && p.lon <= 180.0 && p.lat >= -90.0 && p.lat <= 90.0)) {
    throw Error(Errc::MalformedDocument, "feature '" + feature + "': position out of range");
  }
  return p;
}

Ring parse_ring(const json& j, bool outer, const std::string& feature) {
  if (!j.is_array()) throw Error(Errc::MalformedDocument, "feature '" + feature + "': ring is not an array");
  Ring ring;
  ring.reserve(j.size() + 1);
  for (const json& pos : j) ring.push_back(parse_position(pos, feature));
  try {
    return normalize_ring(std::move(ring), outer);
  } catch (const Error& e) {
    throw Error(e.code(), "feature '" + feature + "'");
  }
}

Polygon parse_polygon(const json& j, const std::string& feature) {
  if (!j.is_array() || j.empty()) {
    throw Error(Errc::MalformedDocument, "feature '" + feature + "': polygon without rings");
  }
  Polygon poly;
  poly.outer = parse_ring(j[0], true, feature);
  for (std::size_t i = 1; i < j.size(); ++i) poly.holes.push_back(parse_ring(j[i], false, feature));
  return poly;
}

std::string property_string(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return v.dump();
  return {};
}

}  // namespace

Ring normalize_ring(Ring ring, bool ccw) {
  Ring out;
  out.reserve(ring.size() + 1);
  for (const GeoPosition& p : ring) {
    if (out.empty() || !(out.back() == p)) out.push_back(p);
  }
  if (!out.empty() && !(out.front() == out.back())) out.push_back(out.front());
  if (out.size() < 4) throw Error(Errc::DegenerateRing, "ring has fewer than 4 vertices");
  const double a = lonlat_signed_area(out);
  if ((a > 0.0) != ccw && a != 0.0) std::reverse(out.begin(), out.end());
  return out;
}

GeoMap parse_boundaries(std::string_view geojson, std::string_view id_property,
                        std::string_view name_property) {
  json doc;
  try {
    doc = json::parse(geojson);
  } catch (const json::parse_error& e) {
    throw Error(Errc::MalformedDocument, e.what());
  }
  if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" || !doc.contains("features") ||
      !doc["features"].is_array()) {
    throw Error(Errc::MalformedDocument, "expected a FeatureCollection");
  }

  std::vector<Area> areas;
  std::size_t ordinal = 0;
  for (const json& f : doc["features"]) {
    ++ordinal;
    if (!f.is_object()) throw Error(Errc::MalformedDocument, "feature is not an object");
    const json props = f.contains("properties") && f["properties"].is_object() ? f["properties"] : json::object();
    const std::string key(id_property);
    std::string id = props.contains(key) ? property_string(props[key]) : std::string{};
    if (id.empty()) {
      throw Error(Errc::MissingProperty,
                  "feature #" + std::to_string(ordinal) + " lacks property '" + key + "'");
    }
    Area area;
    area.id = id;
    const std::string name_key(name_property);
    area.name = props.contains(name_key) ? property_string(props[name_key]) : id;
    if (area.name.empty()) area.name = id;

    if (!f.contains("geometry") || !f["geometry"].is_object()) {
      throw Error(Errc::MalformedDocument, "feature '" + id + "' has no geometry");
    }
    const json& g = f["geometry"];
    const std::string type = g.value("type", "");
    if (!g.contains("coordinates")) throw Error(Errc::MalformedDocument, "feature '" + id + "': no coordinates");
    if (type == "Polygon") {
      area.polygons.push_back(parse_polygon(g["coordinates"], id));
    } else if (type == "MultiPolygon") {
      if (!g["coordinates"].is_array()) throw Error(Errc::MalformedDocument, "feature '" + id + "': bad MultiPolygon");
      for (const json& p : g["coordinates"]) area.polygons.push_back(parse_polygon(p, id));
    } else {
      throw Error(Errc::MalformedDocument, "feature '" + id + "': unsupported geometry '" + type + "'");
    }
    if (area.polygons.empty()) throw Error(Errc::MalformedDocument, "feature '" + id + "': empty geometry");

    for (const Polygon& p : area.polygons) area.surface += spherical_area(p);
    if (!(area.surface > 0.0)) throw Error(Errc::DegenerateRing, "feature '" + id + "' has zero area");
    area.centroid = centroid_of(area.polygons);
    areas.push_back(std::move(area));
  }
  return GeoMap(std::move(areas));
}

}  // namespace tiltmap
