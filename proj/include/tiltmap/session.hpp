#pragma once

// Interaction state for the study conditions and analytics over recorded
// traces. World frame: metres, +y up. A map pose places the map's local
// frame: x to the map's right, y up along the map, z along the map normal.
// An eye pose looks along its local -z.

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Geometry>

#include "tiltmap/morph.hpp"

namespace tiltmap {

struct Pose {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Quaterniond orientation = Eigen::Quaterniond::Identity();

  /// this * other: apply other first, then this.
  Pose operator*(const Pose& other) const;
  Pose inverse() const;
  Eigen::Vector3d apply(const Eigen::Vector3d& local) const;
  /// Throws InvalidArgument when the quaternion is not unit length within 1e-6.
  void validate() const;
};

inline const Eigen::Vector3d kWorldUp = Eigen::Vector3d::UnitY();

Eigen::Vector3d map_normal(const Pose& map_pose);

/// Angle between the map normal and the horizontal plane, degrees in [0, 90].
double tilt_angle(const Pose& map_pose);

class GrabState {
 public:
  static GrabState grab(const Pose& controller, const Pose& map);

  bool held() const noexcept { return anchors_.has_value(); }
  void release() noexcept { anchors_.reset(); }
  /// Throws NotHeld.
  const Pose& controller_at_grab() const;
  const Pose& map_at_grab() const;

 private:
  std::optional<std::pair<Pose, Pose>> anchors_;
};

/// Keeps the map rigidly attached to the controller. Throws NotHeld.
Pose grab_update(const GrabState& state, const Pose& controller);

enum class ViewModeKind { TiltMap, Toggle, SideBySide };
enum class ToggleView { Choropleth = 0, Prism = 1, BarChart = 2 };

std::string_view toggle_view_name(ToggleView v) noexcept;

struct ViewMode {
  ViewModeKind kind = ViewModeKind::TiltMap;
  int toggle_index = 0;  // 0..2, only for Toggle

  ToggleView toggle_view() const;
};

/// Cycles the toggle view. Throws InvalidArgument unless mode is Toggle and
/// direction is +1 or -1.
ViewMode toggle_step(ViewMode mode, int direction);

/// Map pose `distance` metres from the eye along its horizontal heading
/// turned by `turn_deg` (positive = anticlockwise seen from above, i.e. to the
/// left), `drop` metres below eye height, facing the eye and tilted back by
/// `tilt_deg`.
Pose facing_pose(const Pose& eye, double distance, double turn_deg, double drop, double tilt_deg);

struct SideBySideLayout {
  Pose choropleth;
  Pose prism;
  Pose bar_chart;
};

inline constexpr double kSideBySideDistance = 0.9;
inline constexpr double kSideBySideTurnDeg = 80.0;
inline constexpr double kSideBySidePrismTiltDeg = 75.0;

SideBySideLayout side_by_side_layout(const Pose& eye);

inline constexpr double kInitialDistance = 0.6;
inline constexpr double kInitialDrop = 0.1;

/// Study 1 starts at 45 degrees of tilt, study 2 flat (0). Throws InvalidArgument for other studies.
Pose initial_pose(const Pose& eye, int study);

enum class ViewClass { Choropleth, Prism, BarChart, TransitionCP, TransitionPB };

inline constexpr std::array<ViewClass, 5> kViewClasses = {ViewClass::Choropleth, ViewClass::TransitionCP,
                                                          ViewClass::Prism, ViewClass::TransitionPB,
                                                          ViewClass::BarChart};

std::string_view view_class_name(ViewClass v) noexcept;
/// Throws MalformedDocument.
ViewClass parse_view_class(std::string_view s);
ViewClass view_class_of(Phase phase) noexcept;

struct TraceSample {
  double t = 0.0;
  Pose head;
  Pose controller;
  Pose map;
  ViewClass view = ViewClass::Choropleth;
};

enum class MovementSubject { Head, Map };

inline constexpr double kMoveTranslationM = 0.01;
inline constexpr double kMoveRotationDeg = 5.0;

/// Rotation between two orientations, degrees in [0, 180].
double rotation_angle_deg(const Eigen::Quaterniond& a, const Eigen::Quaterniond& b);

/// Strictly more than 1 cm or strictly more than 5 degrees.
bool classify_movement(const TraceSample& prev, const TraceSample& cur, MovementSubject subject);

struct TaskAnswer {
  std::size_t task = 0;  // index into the taskfile
  int answer = 0;
  double start = 0.0;
  double end = 0.0;
};

struct SessionLog {
  std::vector<TraceSample> samples;
  std::vector<TaskAnswer> answers;
  std::vector<double> truths;  // taskfile answers, indexed by task
};

inline constexpr double kSamplePeriod = 0.1;

/// True when consecutive samples are 0.1 s apart within 1e-6 s.
bool regular_timing(const std::vector<TraceSample>& samples);
/// Linear (positions) and spherical (orientations) resampling onto a 0.1 s
/// grid from the first sample; view classes are taken from the latest
/// sample at or before each grid time. Throws InvalidArgument unless t increases strictly.
std::vector<TraceSample> resample(const std::vector<TraceSample>& samples);

struct TaskStats {
  std::size_t task = 0;
  double elapsed = 0.0;
  int answer = 0;
  std::optional<double> truth;
  std::optional<double> abs_diff;
  double head_movement_pct = 0.0;
  double map_movement_pct = 0.0;
};

struct AnalyticsReport {
  std::size_t samples = 0;
  bool resampled = false;
  double head_movement_pct = 0.0;
  double map_movement_pct = 0.0;
  /// Means of the per-task percentages; equal to the totals without tasks.
  double head_movement_pct_per_task = 0.0;
  double map_movement_pct_per_task = 0.0;
  std::array<double, 90> tilt_histogram_pct{};  // bin k covers [k, k+1) degrees, 90 falls in bin 89
  std::map<ViewClass, double> view_class_pct;
  double tilt_above_45_pct = 0.0;
  std::vector<TaskStats> tasks;
};

/// Throws EmptyLog for fewer than two samples.
AnalyticsReport analyze(const SessionLog& log);

std::string write_tracefile(const std::vector<TraceSample>& samples);
/// JSON Lines. Throws MalformedDocument.
std::vector<TraceSample> read_tracefile(std::string_view jsonl);
/// {"answers":[{"task","answer","start","end"}]}. Throws MalformedDocument.
std::vector<TaskAnswer> read_answers(std::string_view json);
std::string write_answers(const std::vector<TaskAnswer>& answers);
std::string write_report(const AnalyticsReport& report);

}  // namespace tiltmap
