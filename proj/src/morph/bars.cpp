#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "tiltmap/error.hpp"
#include "tiltmap/morph.hpp"

namespace tiltmap {
namespace {

// sin/cos of an angle in degrees, exact at multiples of 90.
std::pair<double, double> sincos_deg(double deg) {
  double d = std::fmod(deg, 360.0);
  if (d < 0.0) d += 360.0;
  if (d == 0.0) return {0.0, 1.0};
  if (d == 90.0) return {1.0, 0.0};
  if (d == 180.0) return {0.0, -1.0};
  if (d == 270.0) return {-1.0, 0.0};
  const double r = d * std::numbers::pi / 180.0;
  return {std::sin(r), std::cos(r)};
}

double normalize_azimuth(double deg) {
  double d = std::fmod(deg, 360.0);
  if (d < 0.0) d += 360.0;
  return d == 360.0 ? 0.0 : d;
}

}  // namespace

ViewFrame ViewFrame::from_azimuth(double azimuth_deg) {
  const auto [s, c] = sincos_deg(azimuth_deg);
  return {{c, -s}, {s, c}};
}

std::vector<std::string> bar_order(const GeoMap& map, double azimuth_deg) {
  if (!map.projected()) throw Error(Errc::InvalidState, "bar order needs a projected map");
  const Vec2 u = ViewFrame::from_azimuth(azimuth_deg).right;
  struct Key {
    double along;
    const std::string* id;
  };
  std::vector<Key> keys;
  keys.reserve(map.size());
  for (const Area& a : map.areas()) {
    keys.push_back({(a.planar_centroid.x - 0.5) * u.x + (a.planar_centroid.y - 0.5) * u.y, &a.id});
  }
  std::sort(keys.begin(), keys.end(), [](const Key& l, const Key& r) {
    if (l.along != r.along) return l.along < r.along;
    return *l.id < *r.id;
  });
  std::vector<std::string> out;
  out.reserve(keys.size());
  for (const Key& k : keys) out.push_back(*k.id);
  return out;
}

BarLayout bar_layout(const GeoMap& map, std::vector<std::string> order, double min_bar_width) {
  const std::size_t n = map.size();
  if (n == 0) throw Error(Errc::InvalidArgument, "bar layout needs at least one area");
  if (order.size() != n) throw Error(Errc::InvalidState, "bar order is not a permutation of the map's areas");
  const double slot = 1.0 / static_cast<double>(n);
  BarLayout layout;
  layout.bar_width = (1.0 - kBarGapFraction) * slot;
  layout.gap = kBarGapFraction * slot;
  if (layout.bar_width < min_bar_width) {
    throw Error(Errc::TooManyBars, std::to_string(n) + " bars would be " + std::to_string(layout.bar_width) +
                                       " map units wide, below " + std::to_string(min_bar_width));
  }
  layout.slot_centers.reserve(n);
  for (std::size_t i = 0; i < n; ++i) layout.slot_centers.push_back((static_cast<double>(i) + 0.5) * slot);
  layout.order = std::move(order);
  return layout;
}

void TiltState::validate(const GeoMap& map, const PhaseSchedule& schedule) const {
  if (!(tilt_deg >= 0.0 && tilt_deg <= PhaseSchedule::kDomainEnd)) {
    throw Error(Errc::OutOfRange, "tilt " + std::to_string(tilt_deg) + " outside [0, 90]");
  }
  if (!std::isfinite(view_azimuth_deg)) throw Error(Errc::OutOfRange, "azimuth is not finite");
  const bool should_freeze = tilt_deg > schedule.prism_end;
  if (should_freeze != frozen.has_value()) {
    throw Error(Errc::InvalidState, should_freeze ? "bar order must be frozen beyond the prism stage"
                                                  : "bar order may only be frozen beyond the prism stage");
  }
  if (frozen) {
    if (frozen->order.size() != map.size()) throw Error(Errc::InvalidState, "frozen bar order has wrong length");
    std::set<std::string> seen(frozen->order.begin(), frozen->order.end());
    if (seen.size() != map.size()) throw Error(Errc::InvalidState, "frozen bar order repeats an area");
    for (const std::string& id : seen) {
      if (!map.find(id)) throw Error(Errc::InvalidState, "frozen bar order names unknown area '" + id + "'");
    }
  }
}

TiltState tilt_state_at(const GeoMap& map, double tilt_deg, double azimuth_deg, const PhaseSchedule& schedule) {
  TiltController c(map, schedule);
  return c.update(tilt_deg, azimuth_deg);
}

TiltController::TiltController(const GeoMap& map, PhaseSchedule schedule) : map_(&map), schedule_(schedule) {
  schedule_.validate();
}

const TiltState& TiltController::update(double tilt_deg, double azimuth_deg) {
  if (!(tilt_deg >= 0.0 && tilt_deg <= PhaseSchedule::kDomainEnd)) {
    throw Error(Errc::OutOfRange, "tilt " + std::to_string(tilt_deg) + " outside [0, 90]");
  }
  state_.tilt_deg = tilt_deg;
  state_.view_azimuth_deg = normalize_azimuth(azimuth_deg);
  if (tilt_deg > schedule_.prism_end) {
    if (!state_.frozen) state_.frozen = FrozenBars{bar_order(*map_, state_.view_azimuth_deg), state_.view_azimuth_deg};
  } else {
    state_.frozen.reset();
  }
  return state_;
}

}  // namespace tiltmap
