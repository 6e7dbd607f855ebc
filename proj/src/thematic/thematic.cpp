#include "tiltmap/thematic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "tiltmap/error.hpp"

namespace tiltmap {
namespace {

void check_display(double v) {
  if (!(v >= 0.0 && v <= 100.0)) throw Error(Errc::OutOfRange, "display value " + std::to_string(v) + " outside [0,100]");
}

double apply(ValueTransform t, double v) {
  switch (t) {
    case ValueTransform::None: return v;
    case ValueTransform::SquareRoot: return std::sqrt(v);
    case ValueTransform::FourthRoot: return std::sqrt(std::sqrt(v));
  }
  return v;
}

}  // namespace

std::string_view transform_name(ValueTransform t) noexcept {
  switch (t) {
    case ValueTransform::None: return "none";
    case ValueTransform::SquareRoot: return "squareRoot";
    case ValueTransform::FourthRoot: return "fourthRoot";
  }
  return "none";
}

ValueTransform parse_transform(std::string_view s) {
  if (s == "none") return ValueTransform::None;
  if (s == "squareRoot" || s == "sqrt") return ValueTransform::SquareRoot;
  if (s == "fourthRoot") return ValueTransform::FourthRoot;
  throw Error(Errc::InvalidArgument, "unknown transform '" + std::string(s) + "'");
}

ThematicLayer transform_and_normalize(const std::map<std::string, double>& raw, ValueTransform transform) {
  ThematicLayer layer;
  layer.transform = transform;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  double src_lo = lo, src_hi = hi;
  for (const auto& [id, v] : raw) {
    if (!(v >= 0.0)) throw Error(Errc::NegativeValue, "raw value for '" + id + "' is negative");
    const double t = apply(transform, v);
    lo = std::min(lo, t);
    hi = std::max(hi, t);
    src_lo = std::min(src_lo, v);
    src_hi = std::max(src_hi, v);
  }
  if (raw.size() < 2 || !(hi > lo)) throw Error(Errc::ConstantField, "need at least two distinct raw values");
  for (const auto& [id, v] : raw) {
    const double d = 100.0 * (apply(transform, v) - lo) / (hi - lo);
    layer.values[id] = std::clamp(d, 0.0, 100.0);
  }
  layer.source_min = src_lo;
  layer.source_max = src_hi;
  return layer;
}

std::vector<double> values_in_map_order(const GeoMap& map, const ThematicLayer& layer) {
  std::vector<double> out;
  out.reserve(map.size());
  for (const Area& a : map.areas()) {
    auto it = layer.values.find(a.id);
    if (it == layer.values.end()) throw Error(Errc::UnknownArea, "layer has no value for '" + a.id + "'");
    out.push_back(it->second);
  }
  return out;
}

std::uint32_t Rgb::hex() const {
  auto byte = [](double c) { return static_cast<std::uint32_t>(std::lround(std::clamp(c, 0.0, 1.0) * 255.0)); };
  return (byte(r) << 16) | (byte(g) << 8) | byte(b);
}

Rgb Rgb::from_hex(std::uint32_t hex) {
  return {((hex >> 16) & 0xFF) / 255.0, ((hex >> 8) & 0xFF) / 255.0, (hex & 0xFF) / 255.0};
}

Rgb color_of(double display) {
  check_display(display);
  constexpr double segments = kYlOrBr9.size() - 1;
  const double pos = display / 100.0 * segments;
  const std::size_t i = std::min(static_cast<std::size_t>(pos), kYlOrBr9.size() - 2);
  const double s = pos - static_cast<double>(i);
  const Rgb a = Rgb::from_hex(kYlOrBr9[i]), b = Rgb::from_hex(kYlOrBr9[i + 1]);
  if (s == 0.0) return a;
  if (s == 1.0) return b;
  return {a.r + s * (b.r - a.r), a.g + s * (b.g - a.g), a.b + s * (b.b - a.b)};
}

double height_of(double display) {
  check_display(display);
  return kMaxPrismHeightM * display / 100.0;
}

Legend legend_spec() {
  Legend legend;
  for (int v = 0; v <= 100; v += 5) legend.ticks.push_back(v);
  legend.labels = {0.0, 25.0, 50.0, 75.0, 100.0};
  return legend;
}

std::string_view style_name(Style s) noexcept {
  switch (s) {
    case Style::Choropleth: return "choropleth";
    case Style::MonochromePrism: return "monochromePrism";
    case Style::ColoredPrism: return "coloredPrism";
    case Style::TiltMap: return "tiltMap";
  }
  return "tiltMap";
}

Style parse_style(std::string_view s) {
  for (Style st : {Style::Choropleth, Style::MonochromePrism, Style::ColoredPrism, Style::TiltMap}) {
    if (style_name(st) == s) return st;
  }
  throw Error(Errc::InvalidArgument, "unknown style '" + std::string(s) + "'");
}

Rgb monochrome_color() { return color_of(60.0); }

Rgb fill_color(Style style, double display) {
  if (style == Style::MonochromePrism) {
    check_display(display);
    return monochrome_color();
  }
  return color_of(display);
}

std::string write_layerfile(const ThematicLayer& layer) {
  nlohmann::ordered_json doc;
  doc["transform"] = transform_name(layer.transform);
  nlohmann::ordered_json values = nlohmann::ordered_json::object();
  for (const auto& [id, v] : layer.values) values[id] = v;
  doc["values"] = std::move(values);
  doc["sourceMin"] = layer.source_min;
  doc["sourceMax"] = layer.source_max;
  return doc.dump(1) + "\n";
}

ThematicLayer read_layerfile(std::string_view json) {
  try {
    const auto doc = nlohmann::json::parse(json);
    ThematicLayer layer;
    layer.transform = parse_transform(doc.at("transform").get<std::string>());
    for (const auto& [id, v] : doc.at("values").items()) {
      const double d = v.get<double>();
      if (!(d >= 0.0 && d <= 100.0)) throw Error(Errc::MalformedDocument, "layer value for '" + id + "' outside [0,100]");
      layer.values[id] = d;
    }
    layer.source_min = doc.at("sourceMin").get<double>();
    layer.source_max = doc.at("sourceMax").get<double>();
    return layer;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::MalformedDocument, std::string("layerfile: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == Errc::InvalidArgument) throw Error(Errc::MalformedDocument, e.what());
    throw;
  }
}

}  // namespace tiltmap
