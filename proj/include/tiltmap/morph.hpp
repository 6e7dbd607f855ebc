#pragma once

// The Tilt Map morph: a pure function from tilt angle, view azimuth, map,
// layer and style to renderable geometry. As tilt goes 0 -> 90 degrees the
// scene passes through seven stages:
//
//   a  flat choropleth
//   b  prisms grow with tilt, legends hinge up from the map plane
//   c  full prism map
//   d  footprints shrink towards their centroids (non-contiguous cartogram)
//   e  footprints blend into square bars standing on the map
//   f  bars slide onto a common baseline and lose their depth
//   g  flat bar chart with axes on the left and right only
//
// Every area mesh keeps the same vertex and index layout at every tilt, so
// consecutive frames can be compared vertex by vertex.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tiltmap/geodata.hpp"
#include "tiltmap/thematic.hpp"

namespace tiltmap {

/// Stage breakpoints in degrees of tilt. The domain ends at 90.
struct PhaseSchedule {
  double choropleth_end = 5.0;
  double prism_start = 40.0;
  double prism_end = 50.0;
  double shrink_end = 65.0;
  double bars_on_map_end = 75.0;
  double slide_end = 85.0;

  static constexpr double kDomainEnd = 90.0;

  /// Throws InvalidArgument unless 0 < b1 < ... < b6 < 90.
  void validate() const;
  /// "5,40,50,65,75,85". Throws InvalidArgument.
  static PhaseSchedule parse(std::string_view csv);
  std::string to_string() const;
};

enum class Phase { A, B, C, D, E, F, G };

char phase_letter(Phase p) noexcept;

struct PhasePosition {
  Phase phase = Phase::A;
  double s = 0.0;  // position inside the stage; 0 for the constant stages a, c, g
};

/// Throws OutOfRange for tilt outside [0, 90].
PhasePosition phase_of(double tilt_deg, const PhaseSchedule& schedule);

/// 0 up to choropleth_end, linear to 1 at prism_start, 1 afterwards.
double prism_height_factor(double tilt_deg, const PhaseSchedule& schedule);

inline constexpr double kFootprintShrink = 0.75;
inline constexpr double kMinBarWidth = 0.0025;  // bars for more than 320 areas are too thin
inline constexpr double kBarGapFraction = 0.2;

/// In-plane viewer frame for an azimuth. The azimuth is the compass bearing
/// of the viewing direction measured clockwise from map north (+y): 0 means
/// the viewer stands at the southern edge looking north.
struct ViewFrame {
  Vec2 right;
  Vec2 forward;

  static ViewFrame from_azimuth(double azimuth_deg);
};

/// Area ids sorted by centroid position along the viewer's left-to-right
/// axis; ties broken by id. Throws InvalidState for unprojected maps.
std::vector<std::string> bar_order(const GeoMap& map, double azimuth_deg);

struct BarLayout {
  std::vector<std::string> order;
  std::vector<double> slot_centers;  // along the chart axis, in [0, 1]
  double bar_width = 0.0;
  double gap = 0.0;
};

/// Uniform slots across the unit chart width. Throws TooManyBars when the
/// bars would be narrower than min_bar_width.
BarLayout bar_layout(const GeoMap& map, std::vector<std::string> order, double min_bar_width = kMinBarWidth);

struct FrozenBars {
  std::vector<std::string> order;
  double azimuth_deg = 0.0;
};

struct TiltState {
  double tilt_deg = 0.0;
  double view_azimuth_deg = 0.0;
  /// Captured on entering stage d; present iff tilt_deg > prism_end.
  std::optional<FrozenBars> frozen;

  /// Throws OutOfRange, InvalidState.
  void validate(const GeoMap& map, const PhaseSchedule& schedule) const;
};

/// State for a single tilt/azimuth as if the map had just been tilted there.
TiltState tilt_state_at(const GeoMap& map, double tilt_deg, double azimuth_deg, const PhaseSchedule& schedule);

/// Tracks bar order freezing as tilt and azimuth change over time: the
/// order is captured when tilt first exceeds prism_end and dropped when it
/// returns to or below it.
class TiltController {
 public:
  TiltController(const GeoMap& map, PhaseSchedule schedule);

  const TiltState& update(double tilt_deg, double azimuth_deg);
  const TiltState& state() const noexcept { return state_; }

 private:
  const GeoMap* map_;
  PhaseSchedule schedule_;
  TiltState state_;
};

/// Triangulated footprints prepared once per map.
struct PolygonTemplate {
  std::vector<Vec2> vertices;          // open outer ring, then open holes
  std::vector<std::size_t> ring_starts;
  std::size_t outer_count = 0;
  std::vector<Triangle> triangles;
  std::vector<double> outer_arc;       // cumulative outer-ring length at each vertex
  double outer_perimeter = 0.0;
};

struct AreaTemplate {
  std::vector<PolygonTemplate> polygons;
  std::vector<std::uint32_t> indices;  // top caps then side walls, fixed for all tilts
  std::size_t vertex_count = 0;
};

struct MapGeometry {
  std::vector<AreaTemplate> areas;
};

/// Throws InvalidState (unprojected map), SelfIntersectingRing, DegenerateRing.
MapGeometry prepare_geometry(const GeoMap& map);

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;
  friend bool operator==(const Vec3&, const Vec3&) = default;
};

struct AreaMesh {
  std::string id;
  std::vector<Vec3> positions;  // bottom ring vertices then top ring vertices, per polygon
  std::vector<std::uint32_t> indices;
  Rgb color;
  bool border = true;
};

enum class AxisSide { Top, Bottom, Left, Right };
enum class AxisPose { InPlane, Rotating, Perpendicular };

std::string_view axis_side_name(AxisSide s) noexcept;
std::string_view axis_pose_name(AxisPose p) noexcept;

struct AxisAnnotation {
  AxisSide side = AxisSide::Bottom;
  AxisPose pose = AxisPose::InPlane;
  double angle_deg = 0.0;  // 0 in the map plane, 90 along the map normal
  double opacity = 1.0;
  Vec3 origin;             // value 0
  Vec3 direction;          // unit vector towards value 100
  double length = kMaxPrismHeightM;
  std::vector<double> ticks;
  std::vector<double> labels;
};

/// Billboarded text anchor.
struct LabelAnchor {
  std::string text;
  Vec3 anchor;
};

struct MorphScene {
  PhasePosition phase;
  double tilt_deg = 0.0;
  double azimuth_deg = 0.0;
  std::vector<AreaMesh> areas;
  std::vector<AxisAnnotation> axes;
  std::vector<LabelAnchor> labels;
};

/// Coordinates are map-local: the map quad spans [0,1]^2 at z = 0 and +z is
/// the map normal, one unit per metre. Choropleth renders stage a at any
/// tilt; the two prism styles render stage c; TiltMap follows the tilt.
/// Throws OutOfRange, InvalidState, UnknownArea, TooManyBars.
MorphScene scene(const MapGeometry& geometry, const GeoMap& map, const ThematicLayer& layer, Style style,
                 const TiltState& state, const PhaseSchedule& schedule);
MorphScene scene(const GeoMap& map, const ThematicLayer& layer, Style style, const TiltState& state,
                 const PhaseSchedule& schedule);

/// Largest distance between corresponding vertices of two scenes of the
/// same map. Throws InvalidArgument when the layouts differ.
double max_vertex_displacement(const MorphScene& a, const MorphScene& b);

struct ContinuityReport {
  double max_displacement = 0.0;
  double at_tilt_deg = 0.0;  // end of the step with the largest displacement
  std::size_t steps = 0;
};

/// Sweeps tilt 0 -> 90 at step_deg with a fixed azimuth and reports the
/// largest per-step vertex displacement. Throws InvalidArgument for step <= 0.
ContinuityReport continuity_check(const GeoMap& map, const ThematicLayer& layer, const PhaseSchedule& schedule,
                                  double step_deg, double azimuth_deg = 0.0);

/// Tilt angles visited by a sweep: 0, step, 2 step, ..., ending exactly at 90.
std::vector<double> sweep_angles(double step_deg);

std::string write_scenefile(const MorphScene& scene);

}  // namespace tiltmap
