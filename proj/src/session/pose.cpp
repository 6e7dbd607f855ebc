#include <algorithm>
#include <cmath>
#include <numbers>

#include "tiltmap/error.hpp"
#include "tiltmap/session.hpp"

namespace tiltmap {
namespace {

double deg2rad(double d) { return d * std::numbers::pi / 180.0; }

}  // namespace

Pose Pose::operator*(const Pose& other) const {
  Pose out;
  out.orientation = (orientation * other.orientation).normalized();
  out.position = position + orientation * other.position;
  return out;
}

Pose Pose::inverse() const {
  Pose out;
  out.orientation = orientation.conjugate();
  out.position = -(out.orientation * position);
  return out;
}

Eigen::Vector3d Pose::apply(const Eigen::Vector3d& local) const { return position + orientation * local; }

void Pose::validate() const {
  if (!position.allFinite() || !orientation.coeffs().allFinite()) {
    throw Error(Errc::InvalidArgument, "pose is not finite");
  }
  if (std::abs(orientation.norm() - 1.0) > 1e-6) throw Error(Errc::InvalidArgument, "orientation is not a unit quaternion");
}

Eigen::Vector3d map_normal(const Pose& map_pose) { return map_pose.orientation * Eigen::Vector3d::UnitZ(); }

double tilt_angle(const Pose& map_pose) {
  const double s = std::clamp(std::abs(map_normal(map_pose).normalized().dot(kWorldUp)), 0.0, 1.0);
  return std::asin(s) * 180.0 / std::numbers::pi;
}

GrabState GrabState::grab(const Pose& controller, const Pose& map) {
  GrabState g;
  g.anchors_ = std::pair{controller, map};
  return g;
}

const Pose& GrabState::controller_at_grab() const {
  if (!anchors_) throw Error(Errc::NotHeld, "map is not held");
  return anchors_->first;
}

const Pose& GrabState::map_at_grab() const {
  if (!anchors_) throw Error(Errc::NotHeld, "map is not held");
  return anchors_->second;
}

Pose grab_update(const GrabState& state, const Pose& controller) {
  return controller * state.controller_at_grab().inverse() * state.map_at_grab();
}

std::string_view toggle_view_name(ToggleView v) noexcept {
  switch (v) {
    case ToggleView::Choropleth: return "choropleth";
    case ToggleView::Prism: return "prism";
    case ToggleView::BarChart: return "barChart";
  }
  return "choropleth";
}

ToggleView ViewMode::toggle_view() const {
  if (kind != ViewModeKind::Toggle) throw Error(Errc::InvalidArgument, "view mode is not toggle");
  return static_cast<ToggleView>(((toggle_index % 3) + 3) % 3);
}

ViewMode toggle_step(ViewMode mode, int direction) {
  if (mode.kind != ViewModeKind::Toggle) throw Error(Errc::InvalidArgument, "view mode is not toggle");
  if (direction != 1 && direction != -1) throw Error(Errc::InvalidArgument, "toggle direction must be +1 or -1");
  mode.toggle_index = ((mode.toggle_index + direction) % 3 + 3) % 3;
  return mode;
}

Pose facing_pose(const Pose& eye, double distance, double turn_deg, double drop, double tilt_deg) {
  Eigen::Vector3d look = eye.orientation * -Eigen::Vector3d::UnitZ();
  look -= look.dot(kWorldUp) * kWorldUp;
  if (look.norm() < 1e-12) {
    // Eye looking straight up or down: fall back to its local up projected.
    look = eye.orientation * Eigen::Vector3d::UnitY();
    look -= look.dot(kWorldUp) * kWorldUp;
  }
  look.normalize();
  const Eigen::Vector3d fwd = Eigen::AngleAxisd(deg2rad(turn_deg), kWorldUp) * look;
  const double t = deg2rad(tilt_deg);
  const Eigen::Vector3d normal = std::cos(t) * -fwd + std::sin(t) * kWorldUp;
  const Eigen::Vector3d up_in_map = std::cos(t) * kWorldUp + std::sin(t) * fwd;
  const Eigen::Vector3d right = up_in_map.cross(normal);

  Eigen::Matrix3d r;
  r.col(0) = right;
  r.col(1) = up_in_map;
  r.col(2) = normal;
  Pose out;
  out.orientation = Eigen::Quaterniond(r).normalized();
  out.position = eye.position + distance * fwd - drop * kWorldUp;
  return out;
}

SideBySideLayout side_by_side_layout(const Pose& eye) {
  return {facing_pose(eye, kSideBySideDistance, kSideBySideTurnDeg, 0.0, 0.0),
          facing_pose(eye, kSideBySideDistance, 0.0, 0.0, kSideBySidePrismTiltDeg),
          facing_pose(eye, kSideBySideDistance, -kSideBySideTurnDeg, 0.0, 0.0)};
}

Pose initial_pose(const Pose& eye, int study) {
  if (study != 1 && study != 2) throw Error(Errc::InvalidArgument, "study must be 1 or 2");
  return facing_pose(eye, kInitialDistance, 0.0, kInitialDrop, study == 1 ? 45.0 : 0.0);
}

}  // namespace tiltmap
