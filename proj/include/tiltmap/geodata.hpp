#pragma once

// Areal boundaries on the sphere: ingestion, contiguity, projection onto the
// unit map quad, and the spherical primitives the rest of the pipeline uses.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tiltmap/seed.hpp"

namespace tiltmap {

struct GeoPosition {
  double lon = 0.0;  // degrees, [-180, 180]
  double lat = 0.0;  // degrees, [-90, 90]

  friend bool operator==(const GeoPosition&, const GeoPosition&) = default;
};

/// Closed ring: front() == back().
using Ring = std::vector<GeoPosition>;

struct Polygon {
  Ring outer;               // counterclockwise after normalization
  std::vector<Ring> holes;  // clockwise after normalization
};

/// Map-local planar point. The fitted map occupies [0,1] x [0,1]; +x is
/// roughly east, +y roughly north.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

using PlanarRing = std::vector<Vec2>;  // closed, like Ring

struct PlanarPolygon {
  PlanarRing outer;
  std::vector<PlanarRing> holes;
};

struct Area {
  std::string id;
  std::string name;
  std::vector<Polygon> polygons;
  GeoPosition centroid;
  double surface = 0.0;  // steradians
  std::vector<PlanarPolygon> planar;  // empty until projected
  Vec2 planar_centroid;
};

/// Lambert azimuthal equal-area about `center`, followed by a uniform fit:
/// local = scale * raw + offset.
struct Projection {
  GeoPosition center;
  double scale = 1.0;
  Vec2 offset;

  /// Raw (unfitted) projection; the center maps to the origin.
  Vec2 raw(GeoPosition p) const;
  Vec2 apply(GeoPosition p) const;
};

enum class Contiguity { Rook, Queen };

/// Symmetric, irreflexive neighbor relation over area indices.
class Adjacency {
 public:
  Adjacency() = default;
  explicit Adjacency(std::size_t n) : neighbors_(n) {}

  void connect(std::size_t a, std::size_t b);
  bool adjacent(std::size_t a, std::size_t b) const;
  std::span<const std::size_t> neighbors(std::size_t a) const { return neighbors_.at(a); }
  std::size_t size() const noexcept { return neighbors_.size(); }
  /// Unordered pairs (a < b) in ascending order.
  std::vector<std::pair<std::size_t, std::size_t>> pairs() const;

 private:
  std::vector<std::vector<std::size_t>> neighbors_;  // each sorted
};

/// Immutable collection of areas plus derived structure. The with_* members
/// return new maps and leave the receiver untouched.
class GeoMap {
 public:
  GeoMap() = default;
  explicit GeoMap(std::vector<Area> areas);
  GeoMap(std::vector<Area> areas, Adjacency adjacency, std::optional<Projection> projection);

  const std::vector<Area>& areas() const noexcept { return areas_; }
  const Area& area(std::size_t i) const { return areas_.at(i); }
  std::size_t size() const noexcept { return areas_.size(); }

  const Adjacency& adjacency() const noexcept { return adjacency_; }
  const std::optional<Projection>& projection() const noexcept { return projection_; }
  bool projected() const noexcept { return projection_.has_value(); }

  std::optional<std::size_t> find(std::string_view id) const;
  /// Throws UnknownArea.
  std::size_t index_of(std::string_view id) const;

  GeoMap with_adjacency(Adjacency adjacency) const;

  /// Size of the connected component containing each area.
  std::vector<std::size_t> component_sizes() const;

 private:
  std::vector<Area> areas_;
  Adjacency adjacency_;
  std::optional<Projection> projection_;
  std::unordered_map<std::string, std::size_t> index_;
};

// --- ingestion --------------------------------------------------------------

/// Parses a GeoJSON FeatureCollection of Polygon/MultiPolygon features.
/// Rings are re-closed and re-wound silently; rings with fewer than four
/// vertices raise DegenerateRing. Throws MalformedDocument, MissingProperty.
GeoMap parse_boundaries(std::string_view geojson, std::string_view id_property,
                        std::string_view name_property = "name");

/// Closes the ring if open and orients it (counterclockwise when `ccw`).
/// Throws DegenerateRing for rings with fewer than four vertices once closed.
Ring normalize_ring(Ring ring, bool ccw);

// --- contiguity -------------------------------------------------------------

inline constexpr double kDefaultMinSharedLengthDeg = 1e-6;

/// Rook: areas share boundary of total arc length > min_shared_length_deg.
/// Queen: any shared boundary point suffices.
GeoMap build_adjacency(const GeoMap& map, Contiguity mode = Contiguity::Rook,
                       double min_shared_length_deg = kDefaultMinSharedLengthDeg);

// --- projection -------------------------------------------------------------

/// Center of the lon/lat bounding box of all areas.
GeoPosition bbox_center(const GeoMap& map);

/// Projects every area and fits the result so that the bounding box is
/// centered in the unit square with its longer side exactly 1.0.
/// Throws AntipodalPoint.
GeoMap project(const GeoMap& map, GeoPosition center);
inline GeoMap project(const GeoMap& map) { return project(map, bbox_center(map)); }

// --- spherical primitives ---------------------------------------------------

/// Spherical area of the outer ring minus holes, steradians. Throws DegenerateRing.
double spherical_area(const Polygon& polygon);
/// Unsigned area enclosed by a single closed ring (the smaller of the two
/// complementary regions).
double ring_spherical_area(const Ring& ring);

/// Central angle between two positions, degrees in [0, 180].
double great_circle_deg(GeoPosition p, GeoPosition q);

/// Arc-length weighted mean of outer-ring edge midpoints on the unit sphere.
GeoPosition centroid_of(const std::vector<Polygon>& polygons);

// --- regions ----------------------------------------------------------------

/// Randomized frontier growth from `seed` to exactly k connected areas
/// (indices, ascending). Throws ComponentTooSmall, UnknownArea.
std::vector<std::size_t> contiguous_region(const GeoMap& map, std::size_t seed, std::size_t k,
                                           Rng& rng);

/// True when the given areas induce a connected subgraph of the adjacency.
bool is_connected(const GeoMap& map, std::span<const std::size_t> members);

// --- triangulation ----------------------------------------------------------

struct Triangle {
  std::uint32_t a, b, c;
};

/// Ear-clipping triangulation of a planar polygon with holes. Vertex indices
/// refer to the open rings laid end to end: outer ring (without its closing
/// vertex), then each hole likewise. Triangles are counterclockwise.
/// Throws SelfIntersectingRing, DegenerateRing.
std::vector<Triangle> triangulate(const PlanarPolygon& polygon);

/// Signed shoelace area of a closed planar ring.
double signed_area(const PlanarRing& ring);
/// Outer area minus hole areas.
double planar_area(const PlanarPolygon& polygon);

// --- mapfile ----------------------------------------------------------------

std::string write_mapfile(const GeoMap& map);
/// Throws MalformedDocument.
GeoMap read_mapfile(std::string_view json);

}  // namespace tiltmap
