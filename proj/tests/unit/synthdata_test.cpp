#include <doctest.h>

#include <algorithm>
#include <random>

#include "fixtures.hpp"
#include "tiltmap/error.hpp"
#include "tiltmap/synthdata.hpp"

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

std::vector<double> sorted_values(const ThematicLayer& l) {
  std::vector<double> v;
  for (const auto& [k, x] : l.values) v.push_back(x);
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_SUITE("synthdata") {
  TEST_CASE("weights structure") {
    const std::vector<std::pair<std::size_t, std::size_t>> e{{0, 1}, {1, 2}, {1, 1}, {0, 1}};
    const auto bin = ContiguityWeights::from_edges(3, e, false);
    CHECK(bin.s0() == 4.0);
    CHECK(bin.weight(0, 1) == 1.0);
    CHECK(bin.weight(1, 0) == 1.0);
    CHECK(bin.weight(1, 1) == 0.0);
    const auto row = ContiguityWeights::from_edges(3, e, true);
    CHECK(row.weight(1, 0) == 0.5);
    CHECK(row.weight(0, 1) == 1.0);
    CHECK(row.s0() == doctest::Approx(3.0));
  }

  TEST_CASE("checkerboard gives I = -1") {
    const GeoMap g = fixtures::grid_map(2, 2);
    const auto layer = fixtures::layer_of({{"r0c0", 1}, {"r0c1", -1}, {"r1c0", -1}, {"r1c1", 1}});
    for (bool rs : {false, true}) CHECK(morans_i(g, layer, ContiguityWeights::from_map(g, rs)) == -1.0);
  }

  TEST_CASE("gradient on a path is positive") {
    std::vector<std::pair<std::size_t, std::size_t>> path;
    for (std::size_t i = 0; i + 1 < 10; ++i) path.emplace_back(i, i + 1);
    std::vector<double> x(10);
    for (std::size_t i = 0; i < 10; ++i) x[i] = static_cast<double>(i);
    const auto w = ContiguityWeights::from_edges(10, path, true);
    const double i = morans_i(x, w);
    CHECK(i > 0.0);
    CHECK(i == doctest::Approx(fixtures::brute_morans(x, path, true)).epsilon(1e-12));
  }

  TEST_CASE("matches the brute-force formula on random graphs") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 50; ++trial) {
      const std::size_t n = 3 + rng() % 10;
      std::vector<std::pair<std::size_t, std::size_t>> edges;
      for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
          if (rng() % 3 == 0) edges.emplace_back(a, b);
        }
      }
      if (edges.empty()) edges.emplace_back(0, 1);
      std::vector<double> x(n);
      std::normal_distribution<double> nd(10, 4);
      for (double& v : x) v = nd(rng);
      for (bool rs : {false, true}) {
        const double got = morans_i(x, ContiguityWeights::from_edges(n, edges, rs));
        CHECK(std::abs(got - fixtures::brute_morans(x, edges, rs)) < 1e-12);
      }
    }
  }

  TEST_CASE("invariant under shift and positive scaling") {
    const auto& d = fixtures::dataset("US");
    const auto w = ContiguityWeights::from_map(d.map);
    auto x = values_in_map_order(d.map, d.reference);
    const double base = morans_i(x, w);
    for (double& v : x) v = 3.5 * v + 1000.0;
    CHECK(std::abs(morans_i(x, w) - base) < 1e-9);
  }

  TEST_CASE("errors") {
    const auto w = ContiguityWeights::from_edges(3, std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}});
    CHECK(code_of([&] { morans_i(std::vector<double>{2, 2, 2}, w); }) == Errc::ZeroVariance);
    const auto none = ContiguityWeights::from_edges(3, std::vector<std::pair<std::size_t, std::size_t>>{});
    CHECK(code_of([&] { morans_i(std::vector<double>{1, 2, 3}, none); }) == Errc::NoNeighbors);
    SynthConfig bad;
    bad.target_tolerance = 0;
    CHECK(code_of([&] { bad.validate(); }) == Errc::InvalidArgument);
  }

  TEST_CASE("synthesize preserves the multiset and reaches the target") {
    for (const char* name : {"US", "EU"}) {
      const auto& d = fixtures::dataset(name);
      const auto w = ContiguityWeights::from_map(d.map);
      SynthConfig cfg;
      cfg.rng_seed = 42;
      const auto r = synthesize(d.map, d.reference, w, cfg);
      CHECK(sorted_values(r.layer) == sorted_values(d.reference));
      CHECK(std::abs(morans_i(d.map, r.layer, w) - morans_i(d.map, d.reference, w)) <= 0.01);
      CHECK(r.delta_i <= 0.01);
      CHECK(r.swaps <= 200000);
      CHECK(r.layer.values != d.reference.values);
      // Determinism.
      const auto again = synthesize(d.map, d.reference, w, cfg);
      CHECK(again.layer.values == r.layer.values);
      CHECK(write_synth_sidecar(again) == write_synth_sidecar(r));
    }
  }

  TEST_CASE("infinite tolerance accepts the first shuffle") {
    const auto& d = fixtures::dataset("US");
    SynthConfig cfg;
    cfg.target_tolerance = std::numeric_limits<double>::infinity();
    const auto r = synthesize(d.map, d.reference, ContiguityWeights::from_map(d.map), cfg);
    CHECK(r.swaps == 0);
    CHECK(sorted_values(r.layer) == sorted_values(d.reference));
  }

  TEST_CASE("two areas pick the better arrangement") {
    const GeoMap g = fixtures::grid_map(1, 2);
    const auto layer = fixtures::layer_of({{"r0c0", 0}, {"r0c1", 100}});
    SynthConfig cfg;
    cfg.max_swaps = 10;
    const auto r = synthesize(g, layer, ContiguityWeights::from_map(g), cfg);
    CHECK(r.achieved_i == -1.0);
    CHECK(sorted_values(r.layer) == std::vector<double>{0, 100});
  }

  TEST_CASE("unreachable tolerance reports the best delta") {
    const auto& d = fixtures::dataset("US");
    SynthConfig cfg;
    cfg.target_tolerance = 1e-15;
    cfg.max_swaps = 2000;
    try {
      synthesize(d.map, d.reference, ContiguityWeights::from_map(d.map), cfg);
      FAIL("expected TargetUnreachable");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::TargetUnreachable);
      CHECK(std::string(e.what()).find("best |dI|") != std::string::npos);
    }
  }

  TEST_CASE("sidecar fields") {
    const auto& d = fixtures::dataset("US");
    const auto r = synthesize(d.map, d.reference, ContiguityWeights::from_map(d.map), SynthConfig{});
    const auto doc = nlohmann::json::parse(write_synth_sidecar(r));
    for (const char* key : {"referenceI", "achievedI", "deltaI", "swaps", "restarts", "seed"}) CHECK(doc.contains(key));
  }
}
