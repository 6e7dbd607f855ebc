#include <algorithm>
#include <queue>

#include "tiltmap/error.hpp"
#include "tiltmap/geodata.hpp"

namespace tiltmap {

void Adjacency::connect(std::size_t a, std::size_t b) {
  if (a == b) return;
  auto insert = [](std::vector<std::size_t>& list, std::size_t v) {
    auto it = std::lower_bound(list.begin(), list.end(), v);
    if (it == list.end() || *it != v) list.insert(it, v);
  };
  insert(neighbors_.at(a), b);
  insert(neighbors_.at(b), a);
}

bool Adjacency::adjacent(std::size_t a, std::size_t b) const {
  const auto& list = neighbors_.at(a);
  return std::binary_search(list.begin(), list.end(), b);
}

std::vector<std::pair<std::size_t, std::size_t>> Adjacency::pairs() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t a = 0; a < neighbors_.size(); ++a) {
    for (std::size_t b : neighbors_[a]) {
      if (a < b) out.emplace_back(a, b);
    }
  }
  return out;
}

GeoMap::GeoMap(std::vector<Area> areas) : GeoMap(std::move(areas), Adjacency{}, std::nullopt) {}

GeoMap::GeoMap(std::vector<Area> areas, Adjacency adjacency, std::optional<Projection> projection)
    : areas_(std::move(areas)), adjacency_(std::move(adjacency)), projection_(projection) {
  if (adjacency_.size() != areas_.size()) adjacency_ = Adjacency(areas_.size());
  index_.reserve(areas_.size());
  for (std::size_t i = 0; i < areas_.size(); ++i) {
    if (!index_.emplace(areas_[i].id, i).second) {
      throw Error(Errc::MalformedDocument, "duplicate area id '" + areas_[i].id + "'");
    }
  }
}

std::optional<std::size_t> GeoMap::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t GeoMap::index_of(std::string_view id) const {
  if (auto i = find(id)) return *i;
  throw Error(Errc::UnknownArea, "no area with id '" + std::string(id) + "'");
}

GeoMap GeoMap::with_adjacency(Adjacency adjacency) const {
  return GeoMap(areas_, std::move(adjacency), projection_);
}

std::vector<std::size_t> GeoMap::component_sizes() const {
  const std::size_t n = areas_.size();
  std::vector<std::size_t> label(n, n), sizes;
  for (std::size_t s = 0; s < n; ++s) {
    if (label[s] != n) continue;
    const std::size_t id = sizes.size();
    std::size_t count = 0;
    std::queue<std::size_t> q;
    q.push(s);
    label[s] = id;
    while (!q.empty()) {
      const std::size_t a = q.front();
      q.pop();
      ++count;
      for (std::size_t b : adjacency_.neighbors(a)) {
        if (label[b] == n) {
          label[b] = id;
          q.push(b);
        }
      }
    }
    sizes.push_back(count);
  }
  std::vector<std::size_t> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = sizes[label[i]];
  return out;
}

}  // namespace tiltmap
