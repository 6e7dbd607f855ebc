#include <algorithm>
#include <queue>

#include "tiltmap/error.hpp"
#include "tiltmap/geodata.hpp"

namespace tiltmap {

std::vector<std::size_t> contiguous_region(const GeoMap& map, std::size_t seed, std::size_t k, Rng& rng) {
  if (seed >= map.size()) throw Error(Errc::UnknownArea, "seed index out of range");
  if (k == 0) throw Error(Errc::InvalidArgument, "region size must be at least 1");
  const std::size_t component = map.component_sizes()[seed];
  if (component < k) {
    throw Error(Errc::ComponentTooSmall, "component of '" + map.area(seed).id + "' has " +
                                             std::to_string(component) + " areas, need " + std::to_string(k));
  }

  std::vector<char> in_region(map.size(), 0), in_frontier(map.size(), 0);
  std::vector<std::size_t> region{seed}, frontier;
  in_region[seed] = 1;
  auto extend = [&](std::size_t a) {
    for (std::size_t b : map.adjacency().neighbors(a)) {
      if (!in_region[b] && !in_frontier[b]) {
        in_frontier[b] = 1;
        frontier.push_back(b);
      }
    }
  };
  extend(seed);
  while (region.size() < k) {
    std::uniform_int_distribution<std::size_t> pick(0, frontier.size() - 1);
    const std::size_t i = pick(rng);
    const std::size_t a = frontier[i];
    frontier[i] = frontier.back();
    frontier.pop_back();
    in_frontier[a] = 0;
    in_region[a] = 1;
    region.push_back(a);
    extend(a);
  }
  std::sort(region.begin(), region.end());
  return region;
}

bool is_connected(const GeoMap& map, std::span<const std::size_t> members) {
  if (members.empty()) return false;
  std::vector<char> member(map.size(), 0), seen(map.size(), 0);
  for (std::size_t m : members) member.at(m) = 1;
  std::queue<std::size_t> q;
  q.push(members.front());
  seen[members.front()] = 1;
  std::size_t reached = 0;
  while (!q.empty()) {
    const std::size_t a = q.front();
    q.pop();
    ++reached;
    for (std::size_t b : map.adjacency().neighbors(a)) {
      if (member[b] && !seen[b]) {
        seen[b] = 1;
        q.push(b);
      }
    }
  }
  std::size_t distinct = 0;
  for (char c : member) distinct += c ? 1 : 0;
  return reached == distinct;
}

}  // namespace tiltmap
