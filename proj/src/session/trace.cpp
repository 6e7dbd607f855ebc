#include <sstream>

#include <json.hpp>

#include "tiltmap/error.hpp"
#include "tiltmap/session.hpp"

namespace tiltmap {
namespace {

using nlohmann::ordered_json;

ordered_json pose_json(const Pose& p) {
  const auto& q = p.orientation;
  return ordered_json::array({p.position.x(), p.position.y(), p.position.z(), q.x(), q.y(), q.z(), q.w()});
}

Pose pose_from(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 7) throw Error(Errc::MalformedDocument, "pose must be 7 numbers");
  Pose p;
  p.position = {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
  p.orientation = Eigen::Quaterniond(j[6].get<double>(), j[3].get<double>(), j[4].get<double>(), j[5].get<double>());
  if (std::abs(p.orientation.norm() - 1.0) > 1e-6) {
    throw Error(Errc::MalformedDocument, "pose quaternion is not unit length");
  }
  return p;
}

}  // namespace

std::string_view view_class_name(ViewClass v) noexcept {
  switch (v) {
    case ViewClass::Choropleth: return "choropleth";
    case ViewClass::Prism: return "prism";
    case ViewClass::BarChart: return "barChart";
    case ViewClass::TransitionCP: return "transitionCP";
    case ViewClass::TransitionPB: return "transitionPB";
  }
  return "choropleth";
}

ViewClass parse_view_class(std::string_view s) {
  for (ViewClass v : kViewClasses) {
    if (view_class_name(v) == s) return v;
  }
  throw Error(Errc::MalformedDocument, "unknown view class '" + std::string(s) + "'");
}

ViewClass view_class_of(Phase phase) noexcept {
  switch (phase) {
    case Phase::A: return ViewClass::Choropleth;
    case Phase::B: return ViewClass::TransitionCP;
    case Phase::C: return ViewClass::Prism;
    case Phase::D:
    case Phase::E:
    case Phase::F: return ViewClass::TransitionPB;
    case Phase::G: return ViewClass::BarChart;
  }
  return ViewClass::Choropleth;
}

std::string write_tracefile(const std::vector<TraceSample>& samples) {
  std::string out;
  for (const TraceSample& s : samples) {
    ordered_json j;
    j["t"] = s.t;
    j["head"] = pose_json(s.head);
    j["ctrl"] = pose_json(s.controller);
    j["map"] = pose_json(s.map);
    j["view"] = std::string(view_class_name(s.view));
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<TraceSample> read_tracefile(std::string_view jsonl) {
  std::vector<TraceSample> out;
  std::istringstream in{std::string(jsonl)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      TraceSample s;
      s.t = j.at("t").get<double>();
      s.head = pose_from(j.at("head"));
      s.controller = pose_from(j.at("ctrl"));
      s.map = pose_from(j.at("map"));
      s.view = parse_view_class(j.at("view").get<std::string>());
      out.push_back(std::move(s));
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::MalformedDocument, "trace line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::vector<TaskAnswer> read_answers(std::string_view json) {
  try {
    const auto doc = nlohmann::json::parse(json);
    std::vector<TaskAnswer> out;
    for (const auto& j : doc.at("answers")) {
      TaskAnswer a;
      a.task = j.at("task").get<std::size_t>();
      a.answer = j.at("answer").get<int>();
      a.start = j.at("start").get<double>();
      a.end = j.at("end").get<double>();
      if (a.end < a.start) throw Error(Errc::MalformedDocument, "answer window ends before it starts");
      out.push_back(a);
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::MalformedDocument, std::string("answers: ") + e.what());
  }
}

std::string write_answers(const std::vector<TaskAnswer>& answers) {
  ordered_json list = ordered_json::array();
  for (const TaskAnswer& a : answers) {
    list.push_back(ordered_json{{"task", a.task}, {"answer", a.answer}, {"start", a.start}, {"end", a.end}});
  }
  return ordered_json{{"answers", list}}.dump(2) + "\n";
}

std::string write_report(const AnalyticsReport& r) {
  ordered_json doc;
  doc["samples"] = r.samples;
  doc["resampled"] = r.resampled;
  doc["headMovementPct"] = r.head_movement_pct;
  doc["mapMovementPct"] = r.map_movement_pct;
  doc["headMovementPctPerTask"] = r.head_movement_pct_per_task;
  doc["mapMovementPctPerTask"] = r.map_movement_pct_per_task;
  ordered_json hist = ordered_json::array();
  for (double v : r.tilt_histogram_pct) hist.push_back(v);
  doc["tiltHistogramPct"] = std::move(hist);
  ordered_json views;
  for (ViewClass v : kViewClasses) {
    const auto it = r.view_class_pct.find(v);
    views[std::string(view_class_name(v))] = it == r.view_class_pct.end() ? 0.0 : it->second;
  }
  doc["viewClassPct"] = std::move(views);
  doc["tiltAbove45Pct"] = r.tilt_above_45_pct;
  ordered_json tasks = ordered_json::array();
  for (const TaskStats& t : r.tasks) {
    ordered_json j;
    j["task"] = t.task;
    j["elapsed"] = t.elapsed;
    j["answer"] = t.answer;
    j["truth"] = t.truth ? ordered_json(*t.truth) : ordered_json(nullptr);
    j["absDiff"] = t.abs_diff ? ordered_json(*t.abs_diff) : ordered_json(nullptr);
    j["headMovementPct"] = t.head_movement_pct;
    j["mapMovementPct"] = t.map_movement_pct;
    tasks.push_back(std::move(j));
  }
  doc["tasks"] = std::move(tasks);
  return doc.dump(2) + "\n";
}

}  // namespace tiltmap
