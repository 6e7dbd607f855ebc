#include <algorithm>
#include <cmath>

#include "tiltmap/error.hpp"
#include "tiltmap/synthdata.hpp"

namespace tiltmap {

ContiguityWeights ContiguityWeights::from_map(const GeoMap& map, bool row_standardize) {
  const auto pairs = map.adjacency().pairs();
  return from_edges(map.size(), pairs, row_standardize);
}

ContiguityWeights ContiguityWeights::from_edges(std::size_t n,
                                                std::span<const std::pair<std::size_t, std::size_t>> edges,
                                                bool row_standardize) {
  std::vector<std::vector<std::size_t>> nb(n);
  for (const auto& [a, b] : edges) {
    if (a >= n || b >= n) throw Error(Errc::InvalidArgument, "weight edge refers to a node outside the graph");
    if (a == b) continue;
    nb[a].push_back(b);
    nb[b].push_back(a);
  }
  ContiguityWeights w;
  w.row_standardized_ = row_standardize;
  w.rows_.resize(n);
  w.cols_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& list = nb[i];
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    const double wt = row_standardize && !list.empty() ? 1.0 / static_cast<double>(list.size()) : 1.0;
    for (std::size_t j : list) {
      w.rows_[i].push_back({j, wt});
      w.cols_[j].push_back({i, wt});
      w.s0_ += wt;
    }
  }
  return w;
}

double ContiguityWeights::weight(std::size_t i, std::size_t j) const {
  for (const Entry& e : rows_.at(i)) {
    if (e.index == j) return e.weight;
  }
  return 0.0;
}

double morans_i(std::span<const double> values, const ContiguityWeights& weights) {
  const std::size_t n = values.size();
  if (n != weights.size()) throw Error(Errc::InvalidArgument, "value count does not match the weights");
  if (n < 2) throw Error(Errc::InvalidArgument, "Moran's I needs at least two areas");
  if (weights.s0() <= 0.0) throw Error(Errc::NoNeighbors, "no area has a neighbour");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  double den = 0.0, num = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double zi = values[i] - mean;
    den += zi * zi;
    for (const auto& e : weights.row(i)) num += e.weight * zi * (values[e.index] - mean);
  }
  if (den <= 0.0) throw Error(Errc::ZeroVariance, "all values are equal");
  return static_cast<double>(n) / weights.s0() * num / den;
}

double morans_i(const GeoMap& map, const ThematicLayer& layer, const ContiguityWeights& weights) {
  const auto values = values_in_map_order(map, layer);
  return morans_i(values, weights);
}

}  // namespace tiltmap
