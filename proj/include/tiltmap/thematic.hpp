#pragma once

// Display-domain encoding: raw attribute -> [0,100] -> colour and height.

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "tiltmap/geodata.hpp"

namespace tiltmap {

enum class ValueTransform { None, SquareRoot, FourthRoot };

std::string_view transform_name(ValueTransform t) noexcept;
/// Accepts "none", "squareRoot"/"sqrt", "fourthRoot". Throws InvalidArgument.
ValueTransform parse_transform(std::string_view s);

struct ThematicLayer {
  std::map<std::string, double> values;  // area id -> display value in [0,100]
  ValueTransform transform = ValueTransform::None;
  double source_min = 0.0;
  double source_max = 0.0;
};

/// display = 100 (t(raw) - min t) / (max t - min t).
/// Throws NegativeValue, ConstantField.
ThematicLayer transform_and_normalize(const std::map<std::string, double>& raw, ValueTransform transform);

/// Layer values in map area order. Throws UnknownArea when the layer lacks
/// an area of the map.
std::vector<double> values_in_map_order(const GeoMap& map, const ThematicLayer& layer);

struct Rgb {
  double r = 0.0, g = 0.0, b = 0.0;  // [0,1]

  std::uint32_t hex() const;
  static Rgb from_hex(std::uint32_t hex);
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// ColorBrewer YlOrBr, 9 classes, lightest first.
inline constexpr std::array<std::uint32_t, 9> kYlOrBr9 = {0xFFFFE5, 0xFFF7BC, 0xFEE391, 0xFEC44F, 0xFE9929,
                                                         0xEC7014, 0xCC4C02, 0x993404, 0x662506};

/// Component-wise sRGB interpolation through the YlOrBr anchors placed at
/// 0, 12.5, ..., 100. Throws OutOfRange.
Rgb color_of(double display);

inline constexpr double kMaxPrismHeightM = 0.20;

/// Metres of extrusion for a display value. Throws OutOfRange.
double height_of(double display);

struct Legend {
  double domain_min = 0.0;
  double domain_max = 100.0;
  std::vector<double> ticks;
  std::vector<double> labels;
};

Legend legend_spec();

enum class Style { Choropleth, MonochromePrism, ColoredPrism, TiltMap };

std::string_view style_name(Style s) noexcept;
/// Throws InvalidArgument.
Style parse_style(std::string_view s);

/// Uniform fill of the monochrome prism map.
Rgb monochrome_color();
Rgb fill_color(Style style, double display);

std::string write_layerfile(const ThematicLayer& layer);
/// Throws MalformedDocument.
ThematicLayer read_layerfile(std::string_view json);

}  // namespace tiltmap
