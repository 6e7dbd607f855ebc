#include <json.hpp>

#include "tiltmap/error.hpp"
#include "tiltmap/geodata.hpp"

namespace tiltmap {
namespace {

using ojson = nlohmann::ordered_json;

ojson ring_json(const Ring& r) {
  ojson out = ojson::array();
  for (const GeoPosition& p : r) out.push_back({p.lon, p.lat});
  return out;
}

ojson planar_json(const PlanarRing& r) {
  ojson out = ojson::array();
  for (const Vec2& p : r) out.push_back({p.x, p.y});
  return out;
}

Ring read_ring(const ojson& j) {
  Ring r;
  for (const ojson& p : j) r.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  return r;
}

PlanarRing read_planar(const ojson& j) {
  PlanarRing r;
  for (const ojson& p : j) r.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  return r;
}

}  // namespace

std::string write_mapfile(const GeoMap& map) {
  ojson doc;
  ojson areas = ojson::array();
  for (const Area& a : map.areas()) {
    ojson rings = ojson::array(), planar = ojson::array();
    for (const Polygon& p : a.polygons) {
      ojson poly = ojson::array({ring_json(p.outer)});
      for (const Ring& h : p.holes) poly.push_back(ring_json(h));
      rings.push_back(std::move(poly));
    }
    for (const PlanarPolygon& p : a.planar) {
      ojson poly = ojson::array({planar_json(p.outer)});
      for (const PlanarRing& h : p.holes) poly.push_back(planar_json(h));
      planar.push_back(std::move(poly));
    }
    areas.push_back({{"id", a.id},
                     {"name", a.name},
                     {"rings", std::move(rings)},
                     {"planarRings", std::move(planar)},
                     {"centroid", {a.centroid.lon, a.centroid.lat}},
                     {"steradians", a.surface}});
  }
  doc["areas"] = std::move(areas);
  ojson adjacency = ojson::array();
  for (auto [i, j] : map.adjacency().pairs()) adjacency.push_back({map.area(i).id, map.area(j).id});
  doc["adjacency"] = std::move(adjacency);
  if (const auto& proj = map.projection()) {
    doc["projection"] = {{"centerLon", proj->center.lon},
                         {"centerLat", proj->center.lat},
                         {"scale", proj->scale},
                         {"offset", {proj->offset.x, proj->offset.y}}};
  } else {
    doc["projection"] = nullptr;
  }
  return doc.dump() + "\n";
}

GeoMap read_mapfile(std::string_view json) {
  try {
    const ojson doc = ojson::parse(json);
    std::optional<Projection> proj;
    if (doc.contains("projection") && !doc["projection"].is_null()) {
      const ojson& p = doc["projection"];
      proj = Projection{{p.at("centerLon").get<double>(), p.at("centerLat").get<double>()},
                        p.at("scale").get<double>(),
                        {p.at("offset").at(0).get<double>(), p.at("offset").at(1).get<double>()}};
    }
    std::vector<Area> areas;
    for (const ojson& j : doc.at("areas")) {
      Area a;
      a.id = j.at("id").get<std::string>();
      a.name = j.at("name").get<std::string>();
      for (const ojson& poly : j.at("rings")) {
        Polygon p;
        p.outer = read_ring(poly.at(0));
        for (std::size_t k = 1; k < poly.size(); ++k) p.holes.push_back(read_ring(poly[k]));
        a.polygons.push_back(std::move(p));
      }
      for (const ojson& poly : j.at("planarRings")) {
        PlanarPolygon p;
        p.outer = read_planar(poly.at(0));
        for (std::size_t k = 1; k < poly.size(); ++k) p.holes.push_back(read_planar(poly[k]));
        a.planar.push_back(std::move(p));
      }
      a.centroid = {j.at("centroid").at(0).get<double>(), j.at("centroid").at(1).get<double>()};
      a.surface = j.at("steradians").get<double>();
      if (proj) a.planar_centroid = proj->apply(a.centroid);
      areas.push_back(std::move(a));
    }
    GeoMap base(std::move(areas));
    Adjacency adj(base.size());
    for (const ojson& pair : doc.at("adjacency")) {
      adj.connect(base.index_of(pair.at(0).get<std::string>()), base.index_of(pair.at(1).get<std::string>()));
    }
    return GeoMap(base.areas(), std::move(adj), proj);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::MalformedDocument, std::string("mapfile: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == Errc::UnknownArea) throw Error(Errc::MalformedDocument, e.what());
    throw;
  }
}

}  // namespace tiltmap
