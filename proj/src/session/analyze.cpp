#include <algorithm>
#include <cmath>
#include <numbers>

#include "tiltmap/error.hpp"
#include "tiltmap/session.hpp"
#include "tiltmap/taskgen.hpp"

namespace tiltmap {
namespace {

// Absorbs rounding in poses written with finite precision, so that an
// offset of exactly 1 cm or 5 degrees never counts as movement.
constexpr double kThresholdSlack = 1e-9;

Pose interpolate(const Pose& a, const Pose& b, double s) {
  Pose out;
  out.position = a.position + s * (b.position - a.position);
  out.orientation = a.orientation.slerp(s, b.orientation).normalized();
  return out;
}

double pct(std::size_t part, std::size_t whole) {
  return whole == 0 ? 0.0 : 100.0 * static_cast<double>(part) / static_cast<double>(whole);
}

}  // namespace

double rotation_angle_deg(const Eigen::Quaterniond& a, const Eigen::Quaterniond& b) {
  const Eigen::Quaterniond d = a.conjugate() * b;
  const double angle = 2.0 * std::atan2(d.vec().norm(), std::abs(d.w()));
  return angle * 180.0 / std::numbers::pi;
}

bool classify_movement(const TraceSample& prev, const TraceSample& cur, MovementSubject subject) {
  const Pose& a = subject == MovementSubject::Head ? prev.head : prev.map;
  const Pose& b = subject == MovementSubject::Head ? cur.head : cur.map;
  const double moved = (b.position - a.position).norm();
  const double turned = rotation_angle_deg(a.orientation, b.orientation);
  return moved > kMoveTranslationM + kThresholdSlack || turned > kMoveRotationDeg + kThresholdSlack;
}

bool regular_timing(const std::vector<TraceSample>& samples) {
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (std::abs(samples[i].t - samples[i - 1].t - kSamplePeriod) > 1e-6) return false;
  }
  return true;
}

std::vector<TraceSample> resample(const std::vector<TraceSample>& samples) {
  if (samples.empty()) return {};
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (!(samples[i].t > samples[i - 1].t)) throw Error(Errc::InvalidArgument, "trace times must increase strictly");
  }
  const double t0 = samples.front().t, t1 = samples.back().t;
  const auto steps = static_cast<std::size_t>(std::floor((t1 - t0) / kSamplePeriod + 1e-9));
  std::vector<TraceSample> out;
  out.reserve(steps + 1);
  std::size_t j = 0;
  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = t0 + static_cast<double>(k) * kSamplePeriod;
    while (j + 1 < samples.size() && samples[j + 1].t <= t) ++j;
    const TraceSample& a = samples[j];
    TraceSample s = a;
    s.t = t;
    if (j + 1 < samples.size()) {
      const TraceSample& b = samples[j + 1];
      const double u = (t - a.t) / (b.t - a.t);
      s.head = interpolate(a.head, b.head, u);
      s.controller = interpolate(a.controller, b.controller, u);
      s.map = interpolate(a.map, b.map, u);
    }
    out.push_back(std::move(s));
  }
  return out;
}

AnalyticsReport analyze(const SessionLog& log) {
  if (log.samples.size() < 2) throw Error(Errc::EmptyLog, "trace needs at least two samples");
  AnalyticsReport r;
  const bool regular = regular_timing(log.samples);
  const std::vector<TraceSample> resampled = regular ? std::vector<TraceSample>{} : resample(log.samples);
  const std::vector<TraceSample>& s = regular ? log.samples : resampled;
  r.resampled = !regular;
  r.samples = s.size();
  if (s.size() < 2) throw Error(Errc::EmptyLog, "trace spans less than one sample period");

  std::vector<bool> head_moved(s.size(), false), map_moved(s.size(), false);
  std::size_t head = 0, map = 0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    head_moved[i] = classify_movement(s[i - 1], s[i], MovementSubject::Head);
    map_moved[i] = classify_movement(s[i - 1], s[i], MovementSubject::Map);
    head += head_moved[i];
    map += map_moved[i];
  }
  r.head_movement_pct = pct(head, s.size() - 1);
  r.map_movement_pct = pct(map, s.size() - 1);

  std::array<std::size_t, 90> bins{};
  std::map<ViewClass, std::size_t> views;
  std::size_t above = 0;
  for (const TraceSample& x : s) {
    const double tilt = tilt_angle(x.map);
    bins[std::min<std::size_t>(static_cast<std::size_t>(tilt), 89)]++;
    above += tilt > 45.0;
    views[x.view]++;
  }
  for (std::size_t k = 0; k < bins.size(); ++k) r.tilt_histogram_pct[k] = pct(bins[k], s.size());
  for (ViewClass v : kViewClasses) r.view_class_pct[v] = pct(views[v], s.size());
  r.tilt_above_45_pct = pct(above, s.size());

  double head_sum = 0.0, map_sum = 0.0;
  for (const TaskAnswer& a : log.answers) {
    TaskStats ts;
    ts.task = a.task;
    ts.elapsed = a.end - a.start;
    ts.answer = a.answer;
    if (a.task < log.truths.size()) {
      ts.truth = log.truths[a.task];
      ts.abs_diff = abs_diff(a.answer, *ts.truth);
    }
    // Transitions whose later sample falls inside the task window.
    std::size_t n = 0, h = 0, m = 0;
    for (std::size_t i = 1; i < s.size(); ++i) {
      if (s[i].t <= a.start || s[i].t > a.end) continue;
      ++n;
      h += head_moved[i];
      m += map_moved[i];
    }
    ts.head_movement_pct = pct(h, n);
    ts.map_movement_pct = pct(m, n);
    head_sum += ts.head_movement_pct;
    map_sum += ts.map_movement_pct;
    r.tasks.push_back(ts);
  }
  if (r.tasks.empty()) {
    r.head_movement_pct_per_task = r.head_movement_pct;
    r.map_movement_pct_per_task = r.map_movement_pct;
  } else {
    r.head_movement_pct_per_task = head_sum / static_cast<double>(r.tasks.size());
    r.map_movement_pct_per_task = map_sum / static_cast<double>(r.tasks.size());
  }
  return r;
}

}  // namespace tiltmap
