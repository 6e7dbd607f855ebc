#pragma once

// Shared fixtures and independent oracles for the unit and acceptance tests.
// Oracles deliberately avoid the library code paths they check.

#include <cmath>
#include <deque>
#include <limits>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tiltmap/geodata.hpp"
#include "tiltmap/session.hpp"
#include "tiltmap/taskgen.hpp"
#include "tiltmap/thematic.hpp"

namespace fixtures {

inline std::filesystem::path data_dir() { return TILTMAP_DATA_DIR; }

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Dataset {
  tiltmap::GeoMap map;
  tiltmap::ThematicLayer reference;
  tiltmap::DatasetProfile profile;
};

/// "US", "UK" or "EU": projected rook map plus the transformed reference layer.
inline const Dataset& dataset(const std::string& name) {
  static std::map<std::string, Dataset> cache;
  auto it = cache.find(name);
  if (it != cache.end()) return it->second;
  std::string geo, id, dens;
  if (name == "US") {
    geo = "us_states.geojson", id = "postal", dens = "us_density_2018.json";
  } else if (name == "UK") {
    geo = "uk_lad_synthetic.geojson", id = "code", dens = "uk_lad_synthetic_density.json";
  } else {
    geo = "eu_nuts1_synthetic.geojson", id = "code", dens = "eu_nuts1_synthetic_density.json";
  }
  Dataset d;
  d.profile = tiltmap::DatasetProfile::named(name);
  d.map = tiltmap::project(tiltmap::build_adjacency(tiltmap::parse_boundaries(slurp(data_dir() / geo), id)));
  std::map<std::string, double> raw;
  const auto doc = nlohmann::json::parse(slurp(data_dir() / dens));
  for (const auto& [k, v] : doc.items()) raw[k] = v.get<double>();
  d.reference = tiltmap::transform_and_normalize(raw, d.profile.transform);
  return cache.emplace(name, std::move(d)).first->second;
}

/// rows x cols grid of `cell`-degree squares; ids "r<row>c<col>", row 0 southernmost.
inline std::string grid_geojson(int rows, int cols, double cell = 1.0, double lon0 = 0.0, double lat0 = 0.0) {
  nlohmann::json features = nlohmann::json::array();
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const double x0 = lon0 + c * cell, y0 = lat0 + r * cell;
      nlohmann::json ring = {{x0, y0}, {x0 + cell, y0}, {x0 + cell, y0 + cell}, {x0, y0 + cell}, {x0, y0}};
      const std::string id = "r" + std::to_string(r) + "c" + std::to_string(c);
      features.push_back({{"type", "Feature"},
                          {"properties", {{"id", id}, {"name", id}}},
                          {"geometry", {{"type", "Polygon"}, {"coordinates", {ring}}}}});
    }
  }
  return nlohmann::json{{"type", "FeatureCollection"}, {"features", features}}.dump();
}

inline tiltmap::GeoMap grid_map(int rows, int cols, double cell = 1.0, double lon0 = 0.0, double lat0 = 0.0,
                                tiltmap::Contiguity mode = tiltmap::Contiguity::Rook) {
  return tiltmap::project(
      tiltmap::build_adjacency(tiltmap::parse_boundaries(grid_geojson(rows, cols, cell, lon0, lat0), "id"), mode));
}

inline tiltmap::ThematicLayer layer_of(const std::map<std::string, double>& values) {
  tiltmap::ThematicLayer l;
  l.values = values;
  return l;
}

// --- oracles ------------------------------------------------------------------

constexpr double kRad = std::numbers::pi / 180.0;

inline double haversine_deg(double lon1, double lat1, double lon2, double lat2) {
  const double dlat = (lat2 - lat1) * kRad, dlon = (lon2 - lon1) * kRad;
  const double a = std::pow(std::sin(dlat / 2), 2) + std::cos(lat1 * kRad) * std::cos(lat2 * kRad) * std::pow(std::sin(dlon / 2), 2);
  return 2.0 * std::asin(std::min(1.0, std::sqrt(a))) / kRad;
}

/// Spherical excess of a convex spherical polygon by fan triangulation and L'Huilier's theorem.
inline double lhuilier_area(const std::vector<std::pair<double, double>>& lonlat_open) {
  auto side = [](std::pair<double, double> p, std::pair<double, double> q) {
    return haversine_deg(p.first, p.second, q.first, q.second) * kRad;
  };
  double total = 0.0;
  for (std::size_t i = 1; i + 1 < lonlat_open.size(); ++i) {
    const double a = side(lonlat_open[0], lonlat_open[i]);
    const double b = side(lonlat_open[i], lonlat_open[i + 1]);
    const double c = side(lonlat_open[i + 1], lonlat_open[0]);
    const double s = (a + b + c) / 2;
    const double t = std::tan(s / 2) * std::tan((s - a) / 2) * std::tan((s - b) / 2) * std::tan((s - c) / 2);
    total += 4.0 * std::atan(std::sqrt(std::max(0.0, t)));
  }
  return total;
}

/// Moran's I straight from the definition over a dense weight matrix.
inline double brute_morans(const std::vector<double>& x, const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                           bool row_standardize) {
  const std::size_t n = x.size();
  std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
  for (auto [a, b] : edges) {
    if (a == b) continue;
    w[a][b] = 1.0;
    w[b][a] = 1.0;
  }
  if (row_standardize) {
    for (auto& row : w) {
      double s = 0.0;
      for (double v : row) s += v;
      if (s > 0) {
        for (double& v : row) v /= s;
      }
    }
  }
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  double s0 = 0.0, num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    den += (x[i] - mean) * (x[i] - mean);
    for (std::size_t j = 0; j < n; ++j) {
      s0 += w[i][j];
      num += w[i][j] * (x[i] - mean) * (x[j] - mean);
    }
  }
  return static_cast<double>(n) / s0 * num / den;
}

/// Breadth-first search over the induced subgraph.
inline bool bfs_connected(const tiltmap::GeoMap& map, const std::vector<std::string>& ids) {
  if (ids.empty()) return false;
  std::set<std::size_t> members;
  for (const auto& id : ids) members.insert(map.index_of(id));
  std::set<std::size_t> seen{*members.begin()};
  std::deque<std::size_t> q{*members.begin()};
  while (!q.empty()) {
    const std::size_t u = q.front();
    q.pop_front();
    for (std::size_t v : map.adjacency().neighbors(u)) {
      if (members.count(v) && seen.insert(v).second) q.push_back(v);
    }
  }
  return seen.size() == members.size();
}

inline double weighted_sum_oracle(const tiltmap::GeoMap& map, const tiltmap::ThematicLayer& layer,
                                  const std::vector<std::string>& ids) {
  long double num = 0.0L, den = 0.0L;
  for (const auto& id : ids) {
    for (const auto& a : map.areas()) {
      if (a.id != id) continue;
      num += static_cast<long double>(a.surface) * layer.values.at(id);
      den += a.surface;
    }
  }
  return static_cast<double>(num / den);
}

inline double population_cv(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size())) / m;
}

// --- poses and traces -----------------------------------------------------------

/// Map pose with the given tilt: rotation about world x applied to the vertical map.
inline tiltmap::Pose tilted_map(double tilt_deg, double x = 0.0) {
  tiltmap::Pose p;
  p.position = {x, 1.2, -0.6};
  p.orientation = Eigen::Quaterniond(Eigen::AngleAxisd(-tilt_deg * kRad, Eigen::Vector3d::UnitX()));
  return p;
}

inline tiltmap::TraceSample sample_at(double t, const tiltmap::Pose& head, const tiltmap::Pose& map,
                                      tiltmap::ViewClass view) {
  tiltmap::TraceSample s;
  s.t = t;
  s.head = head;
  s.controller = map;
  s.map = map;
  s.view = view;
  return s;
}

}  // namespace fixtures
