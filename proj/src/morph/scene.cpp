#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <numbers>
#include <unordered_map>

#include "tiltmap/error.hpp"
#include "tiltmap/morph.hpp"

namespace tiltmap {
namespace {

constexpr Vec2 kMapCenter{0.5, 0.5};

Vec2 add(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
Vec2 sub(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
Vec2 mul(Vec2 a, double k) { return {a.x * k, a.y * k}; }
Vec2 lerp(Vec2 a, Vec2 b, double s) { return {a.x + (b.x - a.x) * s, a.y + (b.y - a.y) * s}; }
double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

std::vector<Vec2> open_vertices(const PlanarRing& ring) {
  std::vector<Vec2> out(ring.begin(), ring.end());
  if (out.size() >= 2 && out.front() == out.back()) out.pop_back();
  return out;
}

/// Point on the boundary of [-1,1]^2 at fraction f of its perimeter, counterclockwise from (-1,-1).
Vec2 square_boundary(double f) {
  const double t = 8.0 * (f - std::floor(f));
  if (t < 2.0) return {-1.0 + t, -1.0};
  if (t < 4.0) return {1.0, -1.0 + (t - 2.0)};
  if (t < 6.0) return {1.0 - (t - 4.0), 1.0};
  return {-1.0, 1.0 - (t - 6.0)};
}

struct BarTarget {
  Vec2 slot_point;
  double width = 0.0;
  ViewFrame frame;
};

struct MapSide {
  AxisSide side;
  Vec2 midpoint;
  Vec2 outward;
};

constexpr std::array<MapSide, 4> kMapSides = {{
    {AxisSide::Bottom, {0.5, 0.0}, {0.0, -1.0}},
    {AxisSide::Right, {1.0, 0.5}, {1.0, 0.0}},
    {AxisSide::Top, {0.5, 1.0}, {0.0, 1.0}},
    {AxisSide::Left, {0.0, 0.5}, {-1.0, 0.0}},
}};

AxisAnnotation make_axis(AxisSide side, Vec2 origin, Vec2 outward, double angle_deg, double opacity,
                         const Legend& legend) {
  AxisAnnotation a;
  a.side = side;
  a.angle_deg = angle_deg;
  a.pose = angle_deg <= 0.0 ? AxisPose::InPlane : angle_deg >= 90.0 ? AxisPose::Perpendicular : AxisPose::Rotating;
  a.opacity = opacity;
  a.origin = {origin.x, origin.y, 0.0};
  double c = std::cos(angle_deg * std::numbers::pi / 180.0), s = std::sin(angle_deg * std::numbers::pi / 180.0);
  if (angle_deg <= 0.0) c = 1.0, s = 0.0;
  if (angle_deg >= 90.0) c = 0.0, s = 1.0;
  a.direction = {outward.x * c, outward.y * c, s};
  a.length = kMaxPrismHeightM;
  a.ticks = legend.ticks;
  a.labels = legend.labels;
  return a;
}

std::vector<AxisAnnotation> build_axes(const PhasePosition& pp, const std::optional<FrozenBars>& frozen) {
  const Legend legend = legend_spec();
  std::vector<AxisAnnotation> axes;
  if (pp.phase == Phase::A || pp.phase == Phase::B || pp.phase == Phase::C || pp.phase == Phase::D ||
      pp.phase == Phase::E) {
    const double angle = pp.phase == Phase::A ? 0.0 : pp.phase == Phase::B ? 90.0 * pp.s : 90.0;
    for (const MapSide& ms : kMapSides) axes.push_back(make_axis(ms.side, ms.midpoint, ms.outward, angle, 1.0, legend));
    return axes;
  }

  const ViewFrame vf = ViewFrame::from_azimuth(frozen ? frozen->azimuth_deg : 0.0);
  const Vec2 neg_u = mul(vf.right, -1.0);
  std::size_t left = 0;
  for (std::size_t i = 1; i < kMapSides.size(); ++i) {
    if (dot(kMapSides[i].outward, neg_u) > dot(kMapSides[left].outward, neg_u)) left = i;
  }
  const std::size_t right = (left + 2) % 4;
  const double s = pp.phase == Phase::F ? pp.s : 1.0;
  const Vec2 left_end = sub(kMapCenter, mul(vf.right, 0.5)), right_end = add(kMapCenter, mul(vf.right, 0.5));
  axes.push_back(make_axis(AxisSide::Left, lerp(kMapSides[left].midpoint, left_end, s), kMapSides[left].outward,
                           90.0, 1.0, legend));
  axes.push_back(make_axis(AxisSide::Right, lerp(kMapSides[right].midpoint, right_end, s), kMapSides[right].outward,
                           90.0, 1.0, legend));
  if (pp.phase == Phase::F) {
    for (std::size_t k : {(left + 1) % 4, (left + 3) % 4}) {
      const AxisSide named = dot(kMapSides[k].outward, vf.forward) > 0.0 ? AxisSide::Top : AxisSide::Bottom;
      axes.push_back(make_axis(named, kMapSides[k].midpoint, kMapSides[k].outward, 90.0, 1.0 - pp.s, legend));
    }
  }
  return axes;
}

std::string tick_text(double v) {
  if (v == std::floor(v)) return std::to_string(static_cast<long long>(v));
  std::string s = std::to_string(v);
  while (!s.empty() && s.back() == '0') s.pop_back();
  return s;
}

std::vector<LabelAnchor> build_labels(const std::vector<AxisAnnotation>& axes) {
  std::vector<LabelAnchor> out;
  for (const AxisAnnotation& a : axes) {
    if (a.opacity <= 0.0) continue;
    for (double v : a.labels) {
      const double d = a.length * v / 100.0;
      out.push_back({tick_text(v), {a.origin.x + a.direction.x * d, a.origin.y + a.direction.y * d,
                                    a.origin.z + a.direction.z * d}});
    }
  }
  return out;
}

/// Footprint position of vertex k of polygon `poly` for the current stage.
class Footprint {
 public:
  Footprint(const PhasePosition& pp, Vec2 centroid, const std::optional<BarTarget>& bar)
      : pp_(pp), c0_(centroid), bar_(bar) {}

  void begin_polygon(const PolygonTemplate& poly) {
    poly_ = &poly;
    if (!bar_ || poly.outer_count == 0) return;
    // The outer vertex pointing most towards the viewer's near-left corner
    // lands on that corner of the bar.
    const Vec2 corner = mul(add(bar_->frame.right, bar_->frame.forward), -1.0);
    double best = -std::numeric_limits<double>::infinity();
    anchor_arc_ = 0.0;
    for (std::size_t k = 0; k < poly.outer_count; ++k) {
      const Vec2 d = sub(poly.vertices[k], c0_);
      const double len = std::hypot(d.x, d.y);
      const double score = len > 0.0 ? dot(d, corner) / len : -2.0;
      if (score > best) {
        best = score;
        anchor_arc_ = poly.outer_arc[k];
      }
    }
  }

  Vec2 at(std::size_t k) const {
    const Vec2 v = poly_->vertices[k];
    switch (pp_.phase) {
      case Phase::A:
      case Phase::B:
      case Phase::C:
        return v;
      case Phase::D:
        return add(c0_, mul(sub(v, c0_), 1.0 - kFootprintShrink * pp_.s));
      case Phase::E:
        return lerp(add(c0_, mul(sub(v, c0_), 1.0 - kFootprintShrink)), rect(k, c0_, 1.0), pp_.s);
      case Phase::F:
        return rect(k, lerp(c0_, bar_->slot_point, pp_.s), 1.0 - pp_.s);
      case Phase::G:
        return rect(k, bar_->slot_point, 0.0);
    }
    return v;
  }

 private:
  Vec2 rect(std::size_t k, Vec2 center, double depth_scale) const {
    if (k >= poly_->outer_count) return center;
    const double p = poly_->outer_perimeter;
    const double f = p > 0.0 ? std::fmod(poly_->outer_arc[k] - anchor_arc_ + p, p) / p : 0.0;
    const Vec2 r = square_boundary(f);
    const double half = bar_->width / 2.0;
    return add(center, add(mul(bar_->frame.right, half * r.x), mul(bar_->frame.forward, half * r.y * depth_scale)));
  }

  PhasePosition pp_;
  Vec2 c0_;
  const std::optional<BarTarget>& bar_;
  const PolygonTemplate* poly_ = nullptr;
  double anchor_arc_ = 0.0;
};

}  // namespace

std::string_view axis_side_name(AxisSide s) noexcept {
  switch (s) {
    case AxisSide::Top: return "top";
    case AxisSide::Bottom: return "bottom";
    case AxisSide::Left: return "left";
    case AxisSide::Right: return "right";
  }
  return "bottom";
}

std::string_view axis_pose_name(AxisPose p) noexcept {
  switch (p) {
    case AxisPose::InPlane: return "inPlane";
    case AxisPose::Rotating: return "rotating";
    case AxisPose::Perpendicular: return "perpendicular";
  }
  return "inPlane";
}

MapGeometry prepare_geometry(const GeoMap& map) {
  if (!map.projected()) throw Error(Errc::InvalidState, "scene geometry needs a projected map");
  MapGeometry g;
  g.areas.reserve(map.size());
  for (const Area& area : map.areas()) {
    AreaTemplate at;
    for (const PlanarPolygon& pp : area.planar) {
      PolygonTemplate pt;
      pt.vertices = open_vertices(pp.outer);
      pt.outer_count = pt.vertices.size();
      pt.ring_starts.push_back(0);
      for (const PlanarRing& h : pp.holes) {
        pt.ring_starts.push_back(pt.vertices.size());
        const auto hv = open_vertices(h);
        pt.vertices.insert(pt.vertices.end(), hv.begin(), hv.end());
      }
      pt.triangles = triangulate(pp);
      pt.outer_arc.resize(pt.outer_count);
      double acc = 0.0;
      for (std::size_t k = 0; k < pt.outer_count; ++k) {
        pt.outer_arc[k] = acc;
        const Vec2 a = pt.vertices[k], b = pt.vertices[(k + 1) % pt.outer_count];
        acc += std::hypot(b.x - a.x, b.y - a.y);
      }
      pt.outer_perimeter = acc;

      const auto base = static_cast<std::uint32_t>(at.vertex_count);
      const auto n = static_cast<std::uint32_t>(pt.vertices.size());
      for (const Triangle& t : pt.triangles) {
        at.indices.insert(at.indices.end(), {base + n + t.a, base + n + t.b, base + n + t.c});
      }
      for (std::size_t r = 0; r < pt.ring_starts.size(); ++r) {
        const std::size_t start = pt.ring_starts[r];
        const std::size_t end = r + 1 < pt.ring_starts.size() ? pt.ring_starts[r + 1] : pt.vertices.size();
        for (std::size_t i = start; i < end; ++i) {
          const auto bi = base + static_cast<std::uint32_t>(i);
          const auto bj = base + static_cast<std::uint32_t>(i + 1 < end ? i + 1 : start);
          at.indices.insert(at.indices.end(), {bi, bj, bj + n, bi, bj + n, bi + n});
        }
      }
      at.vertex_count += 2 * pt.vertices.size();
      at.polygons.push_back(std::move(pt));
    }
    g.areas.push_back(std::move(at));
  }
  return g;
}

MorphScene scene(const MapGeometry& geometry, const GeoMap& map, const ThematicLayer& layer, Style style,
                 const TiltState& state, const PhaseSchedule& schedule) {
  schedule.validate();
  state.validate(map, schedule);
  if (geometry.areas.size() != map.size()) throw Error(Errc::InvalidArgument, "geometry was prepared for another map");
  const std::vector<double> values = values_in_map_order(map, layer);

  MorphScene out;
  out.tilt_deg = state.tilt_deg;
  out.azimuth_deg = state.view_azimuth_deg;
  PhasePosition pp = phase_of(state.tilt_deg, schedule);
  double height_factor = prism_height_factor(state.tilt_deg, schedule);
  if (style == Style::Choropleth) {
    pp = {Phase::A, 0.0};
    height_factor = 0.0;
  } else if (style != Style::TiltMap) {
    pp = {Phase::C, 0.0};
    height_factor = 1.0;
  }
  out.phase = pp;

  std::unordered_map<std::string, std::size_t> slot_of;
  std::optional<BarLayout> layout;
  ViewFrame frame;
  const bool bars = pp.phase == Phase::D || pp.phase == Phase::E || pp.phase == Phase::F || pp.phase == Phase::G;
  if (bars) {
    layout = bar_layout(map, state.frozen->order);
    frame = ViewFrame::from_azimuth(state.frozen->azimuth_deg);
    for (std::size_t i = 0; i < layout->order.size(); ++i) slot_of.emplace(layout->order[i], i);
  }

  out.areas.reserve(map.size());
  for (std::size_t i = 0; i < map.size(); ++i) {
    const Area& area = map.area(i);
    const AreaTemplate& at = geometry.areas[i];
    std::optional<BarTarget> bar;
    if (bars) {
      const double center = layout->slot_centers[slot_of.at(area.id)];
      bar = BarTarget{add(kMapCenter, mul(frame.right, center - 0.5)), layout->bar_width, frame};
    }
    const double top = height_of(values[i]) * height_factor;

    AreaMesh mesh;
    mesh.id = area.id;
    mesh.color = fill_color(style, values[i]);
    mesh.border = true;
    mesh.indices = at.indices;
    mesh.positions.reserve(at.vertex_count);
    Footprint fp(pp, area.planar_centroid, bar);
    for (const PolygonTemplate& poly : at.polygons) {
      fp.begin_polygon(poly);
      const std::size_t n = poly.vertices.size();
      const std::size_t first = mesh.positions.size();
      for (std::size_t k = 0; k < n; ++k) {
        const Vec2 p = fp.at(k);
        mesh.positions.push_back({p.x, p.y, 0.0});
      }
      for (std::size_t k = 0; k < n; ++k) {
        const Vec3 b = mesh.positions[first + k];
        mesh.positions.push_back({b.x, b.y, top});
      }
    }
    out.areas.push_back(std::move(mesh));
  }

  out.axes = build_axes(pp, bars ? state.frozen : std::nullopt);
  out.labels = build_labels(out.axes);
  return out;
}

MorphScene scene(const GeoMap& map, const ThematicLayer& layer, Style style, const TiltState& state,
                 const PhaseSchedule& schedule) {
  return scene(prepare_geometry(map), map, layer, style, state, schedule);
}

double max_vertex_displacement(const MorphScene& a, const MorphScene& b) {
  if (a.areas.size() != b.areas.size()) throw Error(Errc::InvalidArgument, "scenes have different area counts");
  double best = 0.0;
  for (std::size_t i = 0; i < a.areas.size(); ++i) {
    const auto& pa = a.areas[i].positions;
    const auto& pb = b.areas[i].positions;
    if (a.areas[i].id != b.areas[i].id || pa.size() != pb.size()) {
      throw Error(Errc::InvalidArgument, "scenes have different mesh layouts");
    }
    for (std::size_t k = 0; k < pa.size(); ++k) {
      best = std::max(best, std::hypot(pa[k].x - pb[k].x, pa[k].y - pb[k].y, pa[k].z - pb[k].z));
    }
  }
  return best;
}

std::vector<double> sweep_angles(double step_deg) {
  if (!(step_deg > 0.0) || !std::isfinite(step_deg)) throw Error(Errc::InvalidArgument, "sweep step must be positive");
  std::vector<double> out;
  const double end = PhaseSchedule::kDomainEnd;
  for (std::size_t k = 0;; ++k) {
    const double t = static_cast<double>(k) * step_deg;
    if (t >= end - 1e-9 * step_deg) break;
    out.push_back(t);
  }
  out.push_back(end);
  return out;
}

ContinuityReport continuity_check(const GeoMap& map, const ThematicLayer& layer, const PhaseSchedule& schedule,
                                  double step_deg, double azimuth_deg) {
  const std::vector<double> angles = sweep_angles(step_deg);
  const MapGeometry geometry = prepare_geometry(map);
  TiltController controller(map, schedule);
  ContinuityReport report;
  MorphScene prev = scene(geometry, map, layer, Style::TiltMap, controller.update(angles[0], azimuth_deg), schedule);
  for (std::size_t i = 1; i < angles.size(); ++i) {
    MorphScene cur = scene(geometry, map, layer, Style::TiltMap, controller.update(angles[i], azimuth_deg), schedule);
    const double d = max_vertex_displacement(prev, cur);
    if (d > report.max_displacement) {
      report.max_displacement = d;
      report.at_tilt_deg = angles[i];
    }
    ++report.steps;
    prev = std::move(cur);
  }
  return report;
}

}  // namespace tiltmap
