#include <doctest.h>

#include <algorithm>
#include <random>

#include "fixtures.hpp"
#include "tiltmap/error.hpp"
#include "tiltmap/thematic.hpp"

using namespace tiltmap;

namespace {

double luminance(const Rgb& c) {
  auto lin = [](double u) { return u <= 0.04045 ? u / 12.92 : std::pow((u + 0.055) / 1.055, 2.4); };
  return 0.2126 * lin(c.r) + 0.7152 * lin(c.g) + 0.0722 * lin(c.b);
}

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

TEST_SUITE("thematic") {
  TEST_CASE("transform_and_normalize examples") {
    auto l = transform_and_normalize({{"a", 0}, {"b", 100}}, ValueTransform::SquareRoot);
    CHECK(l.values["a"] == 0.0);
    CHECK(l.values["b"] == 100.0);
    l = transform_and_normalize({{"a", 0}, {"b", 25}, {"c", 100}}, ValueTransform::SquareRoot);
    CHECK(l.values["b"] == doctest::Approx(50.0).epsilon(1e-12));
    l = transform_and_normalize({{"a", 0}, {"b", 16}, {"c", 256}}, ValueTransform::FourthRoot);
    CHECK(l.values["b"] == doctest::Approx(50.0).epsilon(1e-12));
    CHECK(l.source_min == 0.0);
    CHECK(l.source_max == 256.0);
    l = transform_and_normalize({{"a", 2}, {"b", 4}, {"c", 8}}, ValueTransform::None);
    CHECK(l.values["b"] == doctest::Approx(100.0 / 3.0));
  }

  TEST_CASE("transform_and_normalize errors") {
    CHECK(code_of([] { transform_and_normalize({{"a", 3}, {"b", 3}}, ValueTransform::None); }) == Errc::ConstantField);
    CHECK(code_of([] { transform_and_normalize({{"a", -1}, {"b", 3}}, ValueTransform::None); }) == Errc::NegativeValue);
  }

  TEST_CASE("transform_and_normalize preserves rank order and full range") {
    std::mt19937_64 rng(11);
    std::lognormal_distribution<double> dist(3.0, 1.5);
    std::map<std::string, double> raw;
    for (int i = 0; i < 200; ++i) raw["a" + std::to_string(i)] = dist(rng);
    for (auto t : {ValueTransform::None, ValueTransform::SquareRoot, ValueTransform::FourthRoot}) {
      const auto l = transform_and_normalize(raw, t);
      double lo = 1e9, hi = -1e9;
      for (const auto& [k, v] : l.values) lo = std::min(lo, v), hi = std::max(hi, v);
      CHECK(lo == 0.0);
      CHECK(hi == 100.0);
      std::vector<std::pair<double, double>> pairs;
      for (const auto& [k, r] : raw) pairs.emplace_back(r, l.values.at(k));
      std::sort(pairs.begin(), pairs.end());
      for (std::size_t i = 1; i < pairs.size(); ++i) CHECK(pairs[i].second > pairs[i - 1].second);
    }
  }

  TEST_CASE("color_of anchors and monotone lightness") {
    CHECK(color_of(0).hex() == 0xFFFFE5u);
    CHECK(color_of(100).hex() == 0x662506u);
    CHECK(color_of(50) == Rgb::from_hex(kYlOrBr9[4]));
    for (int i = 0; i < 9; ++i) CHECK(color_of(12.5 * i) == Rgb::from_hex(kYlOrBr9[static_cast<std::size_t>(i)]));
    for (int v = 1; v <= 100; ++v) CHECK(luminance(color_of(v)) < luminance(color_of(v - 1)));
    CHECK(code_of([] { color_of(100.5); }) == Errc::OutOfRange);
    CHECK(code_of([] { color_of(-0.1); }) == Errc::OutOfRange);
  }

  TEST_CASE("height_of examples and linearity") {
    CHECK(height_of(0) == 0.0);
    CHECK(height_of(100) == doctest::Approx(0.20).epsilon(1e-15));
    CHECK(height_of(50) == doctest::Approx(0.10).epsilon(1e-15));
    for (int a = 0; a <= 100; a += 7) {
      for (int b = 0; a + b <= 100; b += 9) CHECK(std::abs(height_of(a) + height_of(b) - height_of(a + b)) < 1e-12);
    }
    CHECK(code_of([] { height_of(101); }) == Errc::OutOfRange);
  }

  TEST_CASE("legend_spec ticks and labels") {
    const Legend l = legend_spec();
    CHECK(l.ticks.size() == 21);
    CHECK(l.labels == std::vector<double>{0, 25, 50, 75, 100});
    for (double lab : l.labels) CHECK(std::find(l.ticks.begin(), l.ticks.end(), lab) != l.ticks.end());
    CHECK(l.domain_min == 0.0);
    CHECK(l.domain_max == 100.0);
  }

  TEST_CASE("style fills") {
    CHECK(fill_color(Style::MonochromePrism, 3) == fill_color(Style::MonochromePrism, 97));
    CHECK(fill_color(Style::ColoredPrism, 30) == color_of(30));
    CHECK(fill_color(Style::TiltMap, 30) == color_of(30));
    CHECK(parse_style("monochromePrism") == Style::MonochromePrism);
    for (auto s : {Style::Choropleth, Style::MonochromePrism, Style::ColoredPrism, Style::TiltMap}) {
      CHECK(parse_style(style_name(s)) == s);
    }
    CHECK(code_of([] { parse_style("pie"); }) == Errc::InvalidArgument);
  }

  TEST_CASE("layerfile round trip") {
    const auto l = transform_and_normalize({{"a", 0}, {"b", 25}, {"c", 100}}, ValueTransform::SquareRoot);
    const std::string text = write_layerfile(l);
    const auto back = read_layerfile(text);
    CHECK(back.values == l.values);
    CHECK(back.transform == l.transform);
    CHECK(write_layerfile(back) == text);
    const auto doc = nlohmann::json::parse(text);
    for (const char* key : {"transform", "values", "sourceMin", "sourceMax"}) CHECK(doc.contains(key));
    CHECK(code_of([] { read_layerfile(R"({"values":{"a":120}})"); }) == Errc::MalformedDocument);
  }

  TEST_CASE("values_in_map_order") {
    const GeoMap m = fixtures::grid_map(1, 2);
    CHECK(values_in_map_order(m, fixtures::layer_of({{"r0c0", 1}, {"r0c1", 2}})) == std::vector<double>{1, 2});
    CHECK(code_of([&] { values_in_map_order(m, fixtures::layer_of({{"r0c0", 1}})); }) == Errc::UnknownArea);
  }
}
