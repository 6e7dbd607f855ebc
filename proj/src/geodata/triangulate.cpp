// Ear clipping over a single boundary: holes are first spliced into the outer
// ring through mutually visible bridge vertices, then ears are cut from a
// circular linked list until three vertices remain.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "tiltmap/error.hpp"
#include "tiltmap/geodata.hpp"

namespace tiltmap {
namespace {

double cross(Vec2 o, Vec2 a, Vec2 b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); }

int sign(double v) { return (v > 0.0) - (v < 0.0); }

struct Seg {
  Vec2 a, b;
  std::size_t ring, pos, ring_len;
};

bool properly_cross(const Seg& s, const Seg& t) {
  const int d1 = sign(cross(s.a, s.b, t.a)), d2 = sign(cross(s.a, s.b, t.b));
  const int d3 = sign(cross(t.a, t.b, s.a)), d4 = sign(cross(t.a, t.b, s.b));
  return d1 * d2 < 0 && d3 * d4 < 0;
}

bool consecutive(const Seg& s, const Seg& t) {
  if (s.ring != t.ring) return false;
  const std::size_t n = s.ring_len;
  return (s.pos + 1) % n == t.pos || (t.pos + 1) % n == s.pos;
}

void check_simple(const std::vector<std::vector<Vec2>>& rings) {
  std::vector<Seg> segs;
  for (std::size_t r = 0; r < rings.size(); ++r) {
    const auto& ring = rings[r];
    for (std::size_t i = 0; i < ring.size(); ++i) {
      segs.push_back({ring[i], ring[(i + 1) % ring.size()], r, i, ring.size()});
    }
  }
  std::sort(segs.begin(), segs.end(),
            [](const Seg& s, const Seg& t) { return std::min(s.a.x, s.b.x) < std::min(t.a.x, t.b.x); });
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const double max_x = std::max(segs[i].a.x, segs[i].b.x);
    for (std::size_t j = i + 1; j < segs.size() && std::min(segs[j].a.x, segs[j].b.x) <= max_x; ++j) {
      if (consecutive(segs[i], segs[j])) continue;
      if (properly_cross(segs[i], segs[j])) {
        throw Error(Errc::SelfIntersectingRing, "ring edges cross near (" + std::to_string(segs[i].a.x) + ", " +
                                                    std::to_string(segs[i].a.y) + ")");
      }
    }
  }
}

class Clipper {
 public:
  explicit Clipper(std::vector<Vec2> pts) : pts_(std::move(pts)) {}

  /// Splices hole `hole` (CW vertex indices) into `boundary` (CCW).
  void bridge(std::vector<std::uint32_t>& boundary, const std::vector<std::uint32_t>& hole) const {
    std::size_t m_at = 0;
    for (std::size_t i = 1; i < hole.size(); ++i) {
      const Vec2 p = pts_[hole[i]], q = pts_[hole[m_at]];
      if (p.x > q.x || (p.x == q.x && p.y > q.y)) m_at = i;
    }
    const Vec2 m = pts_[hole[m_at]];

    // Nearest upward edge hit by the ray from m towards +x.
    const std::size_t n = boundary.size();
    double best_x = std::numeric_limits<double>::infinity();
    std::size_t best_edge = n;
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 a = pts_[boundary[i]], b = pts_[boundary[(i + 1) % n]];
      if (!(a.y <= m.y && m.y <= b.y) || a.y == b.y) continue;
      const double x = a.x + (m.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (x < m.x) continue;
      if (x < best_x) {
        best_x = x;
        best_edge = i;
      }
    }
    if (best_edge == n) throw Error(Errc::SelfIntersectingRing, "hole is not inside the outer ring");

    const std::size_t ia = best_edge, ib = (best_edge + 1) % n;
    const Vec2 hit{best_x, m.y};
    std::size_t p_at = pts_[boundary[ia]].x > pts_[boundary[ib]].x ? ia : ib;
    if (pts_[boundary[ia]] == hit) p_at = ia;
    if (pts_[boundary[ib]] == hit) p_at = ib;
    Vec2 p = pts_[boundary[p_at]];

    if (!(p == hit)) {
      // Reflex vertices inside triangle (m, hit, p) can block the bridge; take
      // the one making the smallest angle with the ray.
      const bool ccw = cross(m, hit, p) > 0.0;
      double best_tan = std::numeric_limits<double>::infinity();
      double best_dist = best_tan;
      for (std::size_t i = 0; i < n; ++i) {
        const Vec2 v = pts_[boundary[i]];
        if (v == p || v.x < m.x) continue;
        const Vec2 prev = pts_[boundary[(i + n - 1) % n]], next = pts_[boundary[(i + 1) % n]];
        if (cross(prev, v, next) > 0.0) continue;
        const double c1 = cross(m, hit, v), c2 = cross(hit, p, v), c3 = cross(p, m, v);
        const bool inside = ccw ? (c1 >= 0 && c2 >= 0 && c3 >= 0) : (c1 <= 0 && c2 <= 0 && c3 <= 0);
        if (!inside) continue;
        const double t = std::abs(v.y - m.y) / std::max(v.x - m.x, 1e-300);
        const double d = std::hypot(v.x - m.x, v.y - m.y);
        if (t < best_tan || (t == best_tan && d < best_dist)) {
          best_tan = t;
          best_dist = d;
          p_at = i;
        }
      }
      p = pts_[boundary[p_at]];
    }

    // With repeated vertices (earlier bridges) pick the copy whose interior
    // wedge contains the bridge direction.
    const Vec2 dir{m.x - p.x, m.y - p.y};
    for (std::size_t i = 0; i < n; ++i) {
      if (!(pts_[boundary[i]] == p)) continue;
      if (wedge_contains(pts_[boundary[(i + n - 1) % n]], p, pts_[boundary[(i + 1) % n]], dir)) {
        p_at = i;
        break;
      }
    }

    std::vector<std::uint32_t> merged;
    merged.reserve(n + hole.size() + 2);
    merged.insert(merged.end(), boundary.begin(), boundary.begin() + static_cast<std::ptrdiff_t>(p_at) + 1);
    for (std::size_t k = 0; k <= hole.size(); ++k) merged.push_back(hole[(m_at + k) % hole.size()]);
    merged.insert(merged.end(), boundary.begin() + static_cast<std::ptrdiff_t>(p_at), boundary.end());
    boundary = std::move(merged);
  }

  std::vector<Triangle> clip(const std::vector<std::uint32_t>& boundary) const {
    const std::size_t n = boundary.size();
    std::vector<Triangle> out;
    out.reserve(n > 2 ? n - 2 : 0);
    std::vector<std::size_t> prev(n), next(n);
    for (std::size_t i = 0; i < n; ++i) {
      prev[i] = (i + n - 1) % n;
      next[i] = (i + 1) % n;
    }
    auto pt = [&](std::size_t node) { return pts_[boundary[node]]; };
    auto emit = [&](std::size_t node) {
      out.push_back({boundary[prev[node]], boundary[node], boundary[next[node]]});
      next[prev[node]] = next[node];
      prev[next[node]] = prev[node];
    };

    auto is_ear = [&](std::size_t node) {
      const Vec2 a = pt(prev[node]), b = pt(node), c = pt(next[node]);
      if (cross(a, b, c) <= 0.0) return false;
      for (std::size_t v = next[next[node]]; v != prev[node]; v = next[v]) {
        const Vec2 p = pt(v);
        if (p == a || p == b || p == c) continue;
        if (cross(pt(prev[v]), p, pt(next[v])) > 0.0) continue;  // convex vertices cannot intrude
        if (cross(a, b, p) >= 0.0 && cross(b, c, p) >= 0.0 && cross(c, a, p) >= 0.0) return false;
      }
      return true;
    };

    std::size_t remaining = n;
    std::size_t node = 0;
    std::size_t stall = 0;
    while (remaining > 3) {
      if (is_ear(node)) {
        emit(node);
        node = next[node];
        --remaining;
        stall = 0;
        continue;
      }
      node = next[node];
      if (++stall < remaining) continue;

      // No proper ear: cut a flat vertex, else the first convex one.
      std::size_t pick = remaining;
      std::size_t v = node;
      for (std::size_t k = 0; k < remaining; ++k, v = next[v]) {
        if (cross(pt(prev[v]), pt(v), pt(next[v])) == 0.0) {
          pick = v;
          break;
        }
      }
      if (pick == remaining) {
        v = node;
        for (std::size_t k = 0; k < remaining; ++k, v = next[v]) {
          if (cross(pt(prev[v]), pt(v), pt(next[v])) > 0.0) {
            pick = v;
            break;
          }
        }
      }
      if (pick == remaining) pick = node;
      emit(pick);
      node = next[pick];
      --remaining;
      stall = 0;
    }
    if (remaining == 3) emit(node);
    return out;
  }

 private:
  static bool wedge_contains(Vec2 a, Vec2 p, Vec2 b, Vec2 d) {
    const Vec2 to_prev{a.x - p.x, a.y - p.y}, to_next{b.x - p.x, b.y - p.y};
    auto cr = [](Vec2 u, Vec2 v) { return u.x * v.y - u.y * v.x; };
    if (cross(a, p, b) >= 0.0) return cr(to_next, d) > 0.0 && cr(d, to_prev) > 0.0;
    return !(cr(to_prev, d) >= 0.0 && cr(d, to_next) >= 0.0);
  }

  std::vector<Vec2> pts_;
};

std::vector<Vec2> open_ring(const PlanarRing& r) {
  std::vector<Vec2> out(r.begin(), r.end());
  if (out.size() >= 2 && out.front() == out.back()) out.pop_back();
  if (out.size() < 3) throw Error(Errc::DegenerateRing, "planar ring has fewer than 3 distinct vertices");
  return out;
}

}  // namespace

double signed_area(const PlanarRing& ring) {
  double a = 0.0;
  for (std::size_t i = 0; i + 1 < ring.size(); ++i) a += ring[i].x * ring[i + 1].y - ring[i + 1].x * ring[i].y;
  if (!ring.empty() && !(ring.front() == ring.back())) {
    a += ring.back().x * ring.front().y - ring.front().x * ring.back().y;
  }
  return a / 2.0;
}

double planar_area(const PlanarPolygon& polygon) {
  double a = std::abs(signed_area(polygon.outer));
  for (const PlanarRing& h : polygon.holes) a -= std::abs(signed_area(h));
  return a;
}

std::vector<Triangle> triangulate(const PlanarPolygon& polygon) {
  std::vector<std::vector<Vec2>> rings;
  rings.push_back(open_ring(polygon.outer));
  for (const PlanarRing& h : polygon.holes) rings.push_back(open_ring(h));
  check_simple(rings);

  std::vector<Vec2> pts;
  std::vector<std::vector<std::uint32_t>> idx(rings.size());
  for (std::size_t r = 0; r < rings.size(); ++r) {
    for (const Vec2& p : rings[r]) {
      idx[r].push_back(static_cast<std::uint32_t>(pts.size()));
      pts.push_back(p);
    }
    const double a = signed_area(PlanarRing(rings[r].begin(), rings[r].end()));
    const bool want_ccw = r == 0;
    if ((a > 0.0) != want_ccw) std::reverse(idx[r].begin(), idx[r].end());
  }

  Clipper clipper(pts);
  std::vector<std::uint32_t> boundary = idx[0];
  std::vector<std::size_t> order(rings.size() - 1);
  std::iota(order.begin(), order.end(), 1);
  auto max_x = [&](std::size_t r) {
    double m = -std::numeric_limits<double>::infinity();
    for (const Vec2& p : rings[r]) m = std::max(m, p.x);
    return m;
  };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return max_x(a) > max_x(b); });
  for (std::size_t r : order) clipper.bridge(boundary, idx[r]);
  return clipper.clip(boundary);
}

}  // namespace tiltmap
