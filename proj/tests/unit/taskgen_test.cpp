#include <doctest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "tiltmap/error.hpp"
#include "tiltmap/taskgen.hpp"

using namespace tiltmap;

namespace {

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return Errc::InvalidArgument;
}

}  // namespace

TEST_SUITE("taskgen") {
  TEST_CASE("cv examples") {
    CHECK(cv(std::vector<double>{10, 10, 10}) == 0.0);
    CHECK(cv(std::vector<double>{2, 4, 4, 4, 5, 5, 7, 9}) == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(cv(std::vector<double>{6, 12, 12, 12, 15, 15, 21, 27}) == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(code_of([] { cv(std::vector<double>{0, 0}); }) == Errc::NonPositiveMean);
    CHECK(code_of([] { cv(std::vector<double>{-1, 0}); }) == Errc::NonPositiveMean);
  }

  TEST_CASE("region_answer") {
    const auto& d = fixtures::dataset("US");
    const std::vector<std::string> one{"KS"};
    CHECK(region_answer(d.map, d.reference, one) == doctest::Approx(d.reference.values.at("KS")).epsilon(1e-12));
    // Surfaces 1 and 3 with values 40 and 80 give 70.
    std::vector<Area> areas(2);
    areas[0].id = "a", areas[0].surface = 1.0;
    areas[1].id = "b", areas[1].surface = 3.0;
    const GeoMap m(areas);
    const std::vector<std::string> ab{"a", "b"};
    CHECK(region_answer(m, fixtures::layer_of({{"a", 40}, {"b", 80}}), ab) == doctest::Approx(70.0));
    const std::vector<std::string> bad{"ZZ"};
    CHECK(code_of([&] { region_answer(d.map, d.reference, bad); }) == Errc::UnknownArea);
    const std::vector<std::string> ne{"NY", "PA", "NJ", "CT", "MA"};
    CHECK(std::abs(region_answer(d.map, d.reference, ne) / fixtures::weighted_sum_oracle(d.map, d.reference, ne) - 1.0) < 1e-12);
  }

  TEST_CASE("abs_diff") {
    CHECK(abs_diff(70, 70.0) == 0.0);
    CHECK(abs_diff(60, 70.0) == 10.0);
    CHECK(abs_diff(0, 100.0) == 100.0);
    CHECK(code_of([] { abs_diff(101, 1.0); }) == Errc::OutOfRange);
    CHECK(code_of([] { abs_diff(-1, 1.0); }) == Errc::OutOfRange);
  }

  TEST_CASE("profiles") {
    const auto us = DatasetProfile::us();
    CHECK(us.classify(2.99) == DistanceClass::Close);
    CHECK(us.classify(3.0) == DistanceClass::Neither);
    CHECK(us.classify(25.0) == DistanceClass::Far);
    CHECK(us.classify(28.0) == DistanceClass::Far);
    CHECK(us.classify(28.01) == DistanceClass::Neither);
    const auto uk = DatasetProfile::uk();
    CHECK(uk.classify(0.49) == DistanceClass::Close);
    CHECK(uk.classify(5.2) == DistanceClass::Far);
    CHECK(uk.region_min == 15);
    CHECK(uk.region_max == 20);
    CHECK(DatasetProfile::named("eu").region_min == 10);
    CHECK_FALSE(DatasetProfile::eu().has_comparisons());
    CHECK(code_of([] { DatasetProfile::named("FR"); }) == Errc::InvalidArgument);
  }

  TEST_CASE("area comparisons satisfy their constraints") {
    const auto& d = fixtures::dataset("US");
    const auto w = ContiguityWeights::from_map(d.map);
    for (auto cls : {DistanceClass::Close, DistanceClass::Far}) {
      for (const AnswerRange& range : kAnswerRanges) {
        const auto t = gen_area_comparison(d.map, d.reference, d.profile, range, cls, w, GenConfig{}, 77);
        REQUIRE(t.task.targets.size() == 2);
        const auto& a = d.map.area(d.map.index_of(t.task.targets[0]));
        const auto& b = d.map.area(d.map.index_of(t.task.targets[1]));
        const double dist = fixtures::haversine_deg(a.centroid.lon, a.centroid.lat, b.centroid.lon, b.centroid.lat);
        if (cls == DistanceClass::Close) {
          CHECK(dist < 3.0);
        } else {
          CHECK(dist >= 25.0 - 1e-9);
          CHECK(dist <= 28.0 + 1e-9);
        }
        const double diff = std::abs(t.layer.values.at(a.id) - t.layer.values.at(b.id));
        CHECK(diff == t.task.answer);
        CHECK(range.contains(diff));
        CHECK(t.synth.delta_i <= 0.01);
      }
    }
    CHECK(code_of([&] {
            gen_area_comparison(fixtures::dataset("EU").map, fixtures::dataset("EU").reference, DatasetProfile::eu(),
                                kAnswerRanges[0], DistanceClass::Close, w, GenConfig{}, 1);
          }) == Errc::InvalidArgument);
  }

  TEST_CASE("region tasks satisfy their constraints") {
    for (const char* name : {"US", "EU"}) {
      const auto& d = fixtures::dataset(name);
      const auto w = ContiguityWeights::from_map(d.map);
      for (const AnswerRange& range : kAnswerRanges) {
        const auto t = gen_region(d.map, d.reference, d.profile, range, w, GenConfig{}, 5);
        CHECK(t.task.targets.size() >= d.profile.region_min);
        CHECK(t.task.targets.size() <= d.profile.region_max);
        CHECK(fixtures::bfs_connected(d.map, t.task.targets));
        std::vector<double> vals;
        for (const auto& id : t.task.targets) vals.push_back(t.layer.values.at(id));
        const double c = fixtures::population_cv(vals);
        CHECK(c >= 0.40);
        CHECK(c <= 0.60);
        const double ans = fixtures::weighted_sum_oracle(d.map, t.layer, t.task.targets);
        CHECK(range.contains(ans));
        CHECK(std::abs(ans - t.task.answer) <= 1e-9 * ans);
      }
    }
  }

  TEST_CASE("impossible constraints exhaust the budget") {
    const auto& d = fixtures::dataset("US");
    GenConfig cfg;
    cfg.attempt_budget = 200;
    CHECK(code_of([&] {
            gen_region(d.map, d.reference, d.profile, {99.5, 100}, ContiguityWeights::from_map(d.map), cfg, 1);
          }) == Errc::GenerationExhausted);
  }

  TEST_CASE("generation is seed-deterministic") {
    const auto& d = fixtures::dataset("US");
    const auto w = ContiguityWeights::from_map(d.map);
    const auto req = round_robin_requests(d.profile, 1, 1);
    CHECK(req.size() == 9);
    const auto a = generate_tasks(d.map, d.reference, d.profile, req, w, GenConfig{}, 123);
    const auto b = generate_tasks(d.map, d.reference, d.profile, req, w, GenConfig{}, 123);
    std::vector<TaskSpec> sa, sb;
    for (const auto& t : a) sa.push_back(t.task);
    for (const auto& t : b) sb.push_back(t.task);
    CHECK(write_taskfile(sa) == write_taskfile(sb));
  }

  TEST_CASE("taskfile round trip") {
    TaskSpec c;
    c.kind = TaskKind::AreaComparison;
    c.targets = {"NY", "NJ"};
    c.distance_deg = 1.5;
    c.distance_class = DistanceClass::Close;
    c.answer = 33.3;
    c.answer_range = {20, 40};
    c.layer_ref = "tasks_layers/task_000.json";
    c.seed = 9;
    TaskSpec r;
    r.targets = {"A", "B", "C"};
    r.cv = 0.5;
    r.answer = 61;
    r.answer_range = {60, 80};
    const std::vector<TaskSpec> tasks{c, r};
    const std::string text = write_taskfile(tasks);
    const auto back = read_taskfile(text);
    REQUIRE(back.size() == 2);
    CHECK(write_taskfile(back) == text);
    const auto doc = nlohmann::json::parse(text);
    for (const char* key : {"kind", "targets", "distanceDeg", "answer", "answerRange", "layerfile", "seed"}) {
      CHECK(doc[0].contains(key));
    }
    CHECK(doc[1].contains("cv"));
    CHECK_FALSE(doc[1].contains("distanceDeg"));
    CHECK(code_of([] { read_taskfile("{}"); }) == Errc::MalformedDocument);
  }
}
