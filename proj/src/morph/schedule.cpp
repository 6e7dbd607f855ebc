#include <charconv>
#include <cmath>
#include <sstream>

#include "tiltmap/error.hpp"
#include "tiltmap/morph.hpp"

namespace tiltmap {

void PhaseSchedule::validate() const {
  const double b[] = {0.0, choropleth_end, prism_start, prism_end, shrink_end, bars_on_map_end, slide_end, kDomainEnd};
  for (std::size_t i = 0; i + 1 < std::size(b); ++i) {
    if (!(b[i] < b[i + 1])) throw Error(Errc::InvalidArgument, "schedule breakpoints must increase strictly within (0, 90)");
  }
}

PhaseSchedule PhaseSchedule::parse(std::string_view csv) {
  double v[6];
  std::size_t n = 0;
  while (!csv.empty()) {
    const std::size_t comma = csv.find(',');
    std::string_view tok = csv.substr(0, comma);
    while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
    while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
    if (n == 6) throw Error(Errc::InvalidArgument, "schedule needs exactly 6 breakpoints");
    const auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v[n]);
    if (ec != std::errc{} || end != tok.data() + tok.size()) {
      throw Error(Errc::InvalidArgument, "bad schedule breakpoint '" + std::string(tok) + "'");
    }
    ++n;
    if (comma == std::string_view::npos) break;
    csv.remove_prefix(comma + 1);
  }
  if (n != 6) throw Error(Errc::InvalidArgument, "schedule needs exactly 6 breakpoints");
  PhaseSchedule s{v[0], v[1], v[2], v[3], v[4], v[5]};
  s.validate();
  return s;
}

std::string PhaseSchedule::to_string() const {
  std::ostringstream os;
  os << choropleth_end << ',' << prism_start << ',' << prism_end << ',' << shrink_end << ',' << bars_on_map_end
     << ',' << slide_end;
  return os.str();
}

char phase_letter(Phase p) noexcept { return static_cast<char>('a' + static_cast<int>(p)); }

PhasePosition phase_of(double tilt, const PhaseSchedule& s) {
  if (!(tilt >= 0.0 && tilt <= PhaseSchedule::kDomainEnd)) {
    throw Error(Errc::OutOfRange, "tilt " + std::to_string(tilt) + " outside [0, 90]");
  }
  auto ramp = [tilt](Phase p, double lo, double hi) { return PhasePosition{p, (tilt - lo) / (hi - lo)}; };
  if (tilt <= s.choropleth_end) return {Phase::A, 0.0};
  if (tilt < s.prism_start) return ramp(Phase::B, s.choropleth_end, s.prism_start);
  if (tilt <= s.prism_end) return {Phase::C, 0.0};
  if (tilt < s.shrink_end) return ramp(Phase::D, s.prism_end, s.shrink_end);
  if (tilt < s.bars_on_map_end) return ramp(Phase::E, s.shrink_end, s.bars_on_map_end);
  if (tilt < s.slide_end) return ramp(Phase::F, s.bars_on_map_end, s.slide_end);
  return {Phase::G, 0.0};
}

double prism_height_factor(double tilt, const PhaseSchedule& s) {
  if (tilt <= s.choropleth_end) return 0.0;
  if (tilt >= s.prism_start) return 1.0;
  return (tilt - s.choropleth_end) / (s.prism_start - s.choropleth_end);
}

}  // namespace tiltmap
