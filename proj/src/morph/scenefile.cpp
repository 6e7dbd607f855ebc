#include <json.hpp>

#include "tiltmap/morph.hpp"

namespace tiltmap {

namespace {

nlohmann::ordered_json vec3(const Vec3& v) { return nlohmann::ordered_json::array({v.x, v.y, v.z}); }

}  // namespace

std::string write_scenefile(const MorphScene& scene) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["phase"] = std::string(1, phase_letter(scene.phase.phase));
  doc["phaseS"] = scene.phase.s;
  doc["tiltDeg"] = scene.tilt_deg;
  doc["azimuthDeg"] = scene.azimuth_deg;

  ordered_json areas = ordered_json::array();
  for (const AreaMesh& m : scene.areas) {
    ordered_json pos = ordered_json::array();
    for (const Vec3& p : m.positions) {
      pos.push_back(p.x);
      pos.push_back(p.y);
      pos.push_back(p.z);
    }
    ordered_json a;
    a["id"] = m.id;
    a["positions"] = std::move(pos);
    a["indices"] = m.indices;
    a["color"] = ordered_json::array({m.color.r, m.color.g, m.color.b});
    a["border"] = m.border;
    areas.push_back(std::move(a));
  }
  doc["areas"] = std::move(areas);

  ordered_json axes = ordered_json::array();
  for (const AxisAnnotation& ax : scene.axes) {
    ordered_json a;
    a["side"] = std::string(axis_side_name(ax.side));
    a["pose"] = std::string(axis_pose_name(ax.pose));
    a["ticks"] = ax.ticks;
    a["labels"] = ax.labels;
    a["angleDeg"] = ax.angle_deg;
    a["opacity"] = ax.opacity;
    a["origin"] = vec3(ax.origin);
    a["direction"] = vec3(ax.direction);
    a["length"] = ax.length;
    axes.push_back(std::move(a));
  }
  doc["axes"] = std::move(axes);

  ordered_json labels = ordered_json::array();
  for (const LabelAnchor& l : scene.labels) {
    labels.push_back(ordered_json{{"text", l.text}, {"anchor", vec3(l.anchor)}});
  }
  doc["labels"] = std::move(labels);
  return doc.dump() + "\n";
}

}  // namespace tiltmap
