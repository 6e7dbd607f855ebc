#include <doctest.h>

#include <chrono>
#include <filesystem>
#include <sstream>
#include <thread>

#include "fixtures.hpp"
#include "tiltmap/cli.hpp"
#include "tiltmap/error.hpp"
#include "tiltmap/morph.hpp"

// After Eigen: <resolv.h> defines a macro that clashes with Eigen parameter names.
#include <httplib.h>

using namespace tiltmap;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("tiltmap_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string data(const char* file) { return (fixtures::data_dir() / file).string(); }

// Ingests the US fixture and builds its reference layer once per directory.
std::pair<std::string, std::string> us_inputs(const fs::path& dir) {
  const std::string map = (dir / "us.map.json").string(), layer = (dir / "us.layer.json").string();
  REQUIRE(run({"ingest", data("us_states.geojson"), "--id-property", "postal", "--out", map}).code == 0);
  REQUIRE(run({"layer", "--map", map, data("us_density_2018.json"), "--out", layer}).code == 0);
  return {map, layer};
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("ingest") {
    const fs::path dir = scratch("ingest");
    const auto [map, layer] = us_inputs(dir);
    const GeoMap m = read_mapfile(read_text_file(map));
    CHECK(m.size() == 48);
    CHECK(m.projected());

    write_text_file(dir / "bad.geojson", "{\"type\":\"Feature\"");
    const Run bad = run({"ingest", (dir / "bad.geojson").string(), "--out", (dir / "x.json").string()});
    CHECK(bad.code == 2);
    CHECK(bad.err.rfind("MalformedDocument:", 0) == 0);
    const Run missing = run({"ingest", data("us_states.geojson"), "--id-property", "nope", "--out", (dir / "x.json").string()});
    CHECK(missing.code == 2);
    CHECK(missing.err.rfind("MissingProperty:", 0) == 0);
    const Run absent = run({"ingest", (dir / "absent.geojson").string(), "--out", (dir / "x.json").string()});
    CHECK(absent.code == 4);
    CHECK(absent.err.rfind("IoError:", 0) == 0);
    const Run parse = run({"ingest"});
    CHECK(parse.code == 2);
    CHECK(parse.err.rfind("InvalidArgument:", 0) == 0);
    CHECK(run({"frobnicate"}).code == 2);
  }

  TEST_CASE("synth") {
    const fs::path dir = scratch("synth");
    const auto [map, layer] = us_inputs(dir);
    const std::string a = (dir / "a.json").string(), b = (dir / "b.json").string();
    REQUIRE(run({"synth", "--map", map, "--layer", layer, "--seed", "42", "--out", a}).code == 0);
    REQUIRE(run({"synth", "--map", map, "--layer", layer, "--seed", "42", "--out", b}).code == 0);
    CHECK(read_text_file(a) == read_text_file(b));
    const auto side = nlohmann::json::parse(read_text_file(dir / "a.synth.json"));
    CHECK(std::abs(side["achievedI"].get<double>() - side["referenceI"].get<double>()) <= 0.01);

    const GeoMap m = read_mapfile(read_text_file(map));
    auto sorted = [&](const ThematicLayer& l) {
      auto v = values_in_map_order(m, l);
      std::sort(v.begin(), v.end());
      return v;
    };
    CHECK(sorted(read_layerfile(read_text_file(a))) == sorted(read_layerfile(read_text_file(layer))));

    const Run tight = run({"synth", "--map", map, "--layer", layer, "--tolerance", "1e-12", "--max-swaps", "500",
                           "--out", (dir / "c.json").string()});
    CHECK(tight.code == 3);
    CHECK(tight.err.rfind("TargetUnreachable:", 0) == 0);
  }

  TEST_CASE("tasks") {
    const fs::path dir = scratch("tasks");
    const auto [map, layer] = us_inputs(dir);
    const fs::path taskfile = dir / "study" / "tasks.json";
    const Run r = run({"tasks", "--map", map, "--layer", layer, "--profile", "US", "--regions", "1", "--comparisons",
                       "1", "--seed", "7", "--out", taskfile.string()});
    REQUIRE(r.code == 0);
    const auto tasks = read_taskfile(read_text_file(taskfile));
    CHECK(tasks.size() == 9);
    for (const TaskSpec& t : tasks) {
      CHECK(fs::exists(taskfile.parent_path() / t.layer_ref));
      CHECK(t.answer_range.contains(t.answer));
    }
    const Run none = run({"tasks", "--map", map, "--layer", layer, "--profile", "US", "--regions", "1",
                          "--comparisons", "0", "--ranges", "99.9-100", "--attempts", "100", "--out",
                          (dir / "x.json").string()});
    CHECK(none.code == 3);
    CHECK(none.err.rfind("GenerationExhausted:", 0) == 0);
    CHECK(run({"tasks", "--map", map, "--layer", layer, "--profile", "XX", "--out", (dir / "y.json").string()}).code == 2);
  }

  TEST_CASE("scene") {
    const fs::path dir = scratch("scene");
    const auto [map, layer] = us_inputs(dir);
    REQUIRE(run({"scene", "--map", map, "--layer", layer, "--tilt", "0", "--out", (dir / "s0.json").string()}).code == 0);
    const auto s0 = nlohmann::json::parse(read_text_file(dir / "s0.json"));
    CHECK(s0["phase"] == "a");
    CHECK(s0["areas"].size() == 48);
    for (const auto& a : s0["areas"]) {
      const auto& pos = a["positions"];
      for (std::size_t i = 2; i < pos.size(); i += 3) CHECK(pos[i].get<double>() == 0.0);
    }
    REQUIRE(run({"scene", "--map", map, "--layer", layer, "--tilt", "90", "--azimuth", "30", "--out",
                 (dir / "s90.json").string()}).code == 0);
    const auto s90 = nlohmann::json::parse(read_text_file(dir / "s90.json"));
    CHECK(s90["phase"] == "g");
    CHECK(s90["axes"].size() == 2);

    const Run sweep = run({"scene", "--map", map, "--layer", layer, "--sweep", "1", "--out", (dir / "sweep").string()});
    REQUIRE(sweep.code == 0);
    std::size_t files = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir / "sweep")) ++files;
    CHECK(files == 91);
    CHECK(run({"scene", "--map", map, "--layer", layer, "--tilt", "91", "--out", (dir / "x.json").string()}).code == 2);
    CHECK(run({"scene", "--map", map, "--layer", layer, "--schedule", "5,40", "--out", (dir / "x.json").string()}).code == 2);
  }

  TEST_CASE("analyze through files") {
    const fs::path dir = scratch("analyze");
    std::vector<TraceSample> s;
    Pose head;
    head.position = {0, 1.6, 0};
    for (int i = 0; i <= 20; ++i) {
      s.push_back(fixtures::sample_at(0.1 * i, head, fixtures::tilted_map(i < 10 ? 20 : 70, 0.02 * (i % 2)),
                                      ViewClass::Prism));
    }
    write_text_file(dir / "trace.jsonl", write_tracefile(s));
    TaskSpec t;
    t.targets = {"a"};
    t.answer = 50;
    t.answer_range = {40, 60};
    write_text_file(dir / "tasks.json", write_taskfile(std::vector<TaskSpec>{t}));
    write_text_file(dir / "answers.json", write_answers({{0, 45, 0.0, 2.0}}));
    const Run r = run({"analyze", "--trace", (dir / "trace.jsonl").string(), "--tasks", (dir / "tasks.json").string(),
                       "--answers", (dir / "answers.json").string()});
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["samples"] == 21);
    CHECK(doc["mapMovementPct"].get<double>() == doctest::Approx(100.0));
    CHECK(doc["tiltAbove45Pct"].get<double>() == doctest::Approx(100.0 * 11 / 21));
    CHECK(doc["tasks"][0]["absDiff"] == 5.0);
    CHECK(run({"analyze", "--trace", (dir / "none.jsonl").string()}).code == 4);
  }

  TEST_CASE("serve") {
    const fs::path dir = scratch("serve");
    const auto [map, layer] = us_inputs(dir);
    write_text_file(dir / "www" / "hello.txt", "hi\r\nthere\0x");
    nlohmann::json cfg{{"dataDir", "www"}, {"outDir", "out"}, {"map", "us.map.json"}, {"layer", "us.layer.json"}};
    write_text_file(dir / "serve.json", cfg.dump());

    DataServer server(ServeConfig::load(dir / "serve.json"));
    const int port = server.bind("127.0.0.1", 0);
    std::thread th([&] { server.run(); });

    httplib::Client cli("127.0.0.1", port);
    cli.set_connection_timeout(std::chrono::seconds(5));
    auto got = cli.Get("/hello.txt");
    REQUIRE(got);
    CHECK(got->status == 200);
    CHECK(got->body == read_text_file(dir / "www" / "hello.txt"));
    CHECK(got->get_header_value("Access-Control-Allow-Origin") == "*");

    auto missing = cli.Get("/nothing.json");
    REQUIRE(missing);
    CHECK(missing->status == 404);
    auto escape = cli.Get("/../serve.json");
    REQUIRE(escape);
    CHECK(escape->status >= 400);
    auto escape2 = cli.Get("/%2e%2e/serve.json");
    REQUIRE(escape2);
    CHECK(escape2->status >= 400);

    auto put = cli.Put("/traces/p01.jsonl", "{\"t\":0}\n", "application/x-ndjson");
    REQUIRE(put);
    CHECK(put->status == 201);
    CHECK(read_text_file(dir / "out" / "p01.jsonl") == "{\"t\":0}\n");
    auto bad_put = cli.Put("/traces/..evil", "x", "text/plain");
    REQUIRE(bad_put);
    CHECK(bad_put->status >= 400);

    auto sc = cli.Get("/api/scene?tilt=45&azimuth=0&style=tiltMap");
    REQUIRE(sc);
    CHECK(sc->status == 200);
    const auto doc = nlohmann::json::parse(sc->body);
    CHECK(doc["phase"] == "c");
    CHECK(doc["areas"].size() == 48);
    auto bad_sc = cli.Get("/api/scene?tilt=120");
    REQUIRE(bad_sc);
    CHECK(bad_sc->status == 400);
    CHECK(nlohmann::json::parse(bad_sc->body)["error"] == "OutOfRange");
    auto opts = cli.Options("/traces/x");
    REQUIRE(opts);
    CHECK(opts->status == 204);

    DataServer second(ServeConfig::load(dir / "serve.json"));
    bool in_use = false;
    try {
      second.bind("127.0.0.1", port);
    } catch (const Error& e) {
      in_use = e.code() == Errc::PortInUse;
    }
    CHECK(in_use);
    CHECK(exit_code_for(Errc::PortInUse) == 4);

    server.stop();
    th.join();
  }
}
