#include <json.hpp>

#include "tiltmap/error.hpp"
#include "tiltmap/taskgen.hpp"

namespace tiltmap {

std::string write_taskfile(std::span<const TaskSpec> tasks) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const TaskSpec& t : tasks) {
    nlohmann::ordered_json j;
    j["kind"] = std::string(task_kind_name(t.kind));
    j["targets"] = t.targets;
    if (t.distance_deg) j["distanceDeg"] = *t.distance_deg;
    if (t.distance_class) j["distanceClass"] = std::string(distance_class_name(*t.distance_class));
    if (t.cv) j["cv"] = *t.cv;
    j["answer"] = t.answer;
    j["answerRange"] = {t.answer_range.lo, t.answer_range.hi};
    j["layerfile"] = t.layer_ref;
    j["seed"] = t.seed;
    doc.push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

std::vector<TaskSpec> read_taskfile(std::string_view json) {
  try {
    const auto doc = nlohmann::json::parse(json);
    if (!doc.is_array()) throw Error(Errc::MalformedDocument, "taskfile must be a JSON array");
    std::vector<TaskSpec> out;
    for (const auto& j : doc) {
      TaskSpec t;
      const std::string kind = j.at("kind").get<std::string>();
      if (kind == "areaComparison") {
        t.kind = TaskKind::AreaComparison;
      } else if (kind == "region") {
        t.kind = TaskKind::Region;
      } else {
        throw Error(Errc::MalformedDocument, "unknown task kind '" + kind + "'");
      }
      t.targets = j.at("targets").get<std::vector<std::string>>();
      if (j.contains("distanceDeg")) t.distance_deg = j["distanceDeg"].get<double>();
      if (j.contains("distanceClass")) t.distance_class = parse_distance_class(j["distanceClass"].get<std::string>());
      if (j.contains("cv")) t.cv = j["cv"].get<double>();
      t.answer = j.at("answer").get<double>();
      const auto& r = j.at("answerRange");
      t.answer_range = {r.at(0).get<double>(), r.at(1).get<double>()};
      t.layer_ref = j.value("layerfile", std::string{});
      t.seed = j.value("seed", std::uint64_t{0});
      out.push_back(std::move(t));
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::MalformedDocument, std::string("taskfile: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == Errc::InvalidArgument) throw Error(Errc::MalformedDocument, e.what());
    throw;
  }
}

}  // namespace tiltmap
