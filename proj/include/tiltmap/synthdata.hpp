#pragma once

// Synthetic thematic layers that keep the value distribution of a reference
// layer exactly while matching its spatial autocorrelation (Moran's I).

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tiltmap/geodata.hpp"
#include "tiltmap/seed.hpp"
#include "tiltmap/thematic.hpp"

namespace tiltmap {

/// Sparse spatial weights with a zero diagonal. Binary weights are
/// symmetric; row standardization divides every row by its neighbour count.
class ContiguityWeights {
 public:
  struct Entry {
    std::size_t index;
    double weight;
  };

  static ContiguityWeights from_map(const GeoMap& map, bool row_standardize = true);
  /// Undirected edges over n nodes. Self loops and duplicates are ignored.
  static ContiguityWeights from_edges(std::size_t n, std::span<const std::pair<std::size_t, std::size_t>> edges,
                                      bool row_standardize = true);

  std::size_t size() const noexcept { return rows_.size(); }
  bool row_standardized() const noexcept { return row_standardized_; }
  /// Sum of all weights.
  double s0() const noexcept { return s0_; }
  double weight(std::size_t i, std::size_t j) const;
  std::span<const Entry> row(std::size_t i) const { return rows_.at(i); }
  std::span<const Entry> column(std::size_t j) const { return cols_.at(j); }

 private:
  std::vector<std::vector<Entry>> rows_;
  std::vector<std::vector<Entry>> cols_;
  double s0_ = 0.0;
  bool row_standardized_ = false;
};

/// I = (n / S0) * sum_ij w_ij z_i z_j / sum_i z_i^2. Throws ZeroVariance,
/// NoNeighbors, InvalidArgument (size mismatch or fewer than 2 values).
double morans_i(std::span<const double> values, const ContiguityWeights& weights);
/// Values taken in map order. Throws UnknownArea as well.
double morans_i(const GeoMap& map, const ThematicLayer& layer, const ContiguityWeights& weights);

struct SynthConfig {
  double target_tolerance = 0.01;
  std::size_t max_swaps = 200000;  // swap proposals over all restarts
  std::size_t max_restarts = 10;
  std::uint64_t rng_seed = 0;

  void validate() const;  // InvalidArgument unless tolerance > 0
};

struct SynthResult {
  ThematicLayer layer;
  double reference_i = 0.0;
  double achieved_i = 0.0;
  double delta_i = 0.0;  // |achieved - reference|
  std::size_t swaps = 0;
  std::size_t restarts = 0;
  std::uint64_t seed = 0;
};

/// Shuffles the reference values over the map, then runs greedy pairwise
/// swap descent on |I - I_ref|, restarting from a fresh shuffle on stalls.
/// Throws TargetUnreachable when the swap budget runs out.
SynthResult synthesize(const GeoMap& map, const ThematicLayer& reference, const ContiguityWeights& weights,
                       const SynthConfig& config, Rng& rng);
/// Seeds its own generator from config.rng_seed.
SynthResult synthesize(const GeoMap& map, const ThematicLayer& reference, const ContiguityWeights& weights,
                       const SynthConfig& config);

/// {referenceI, achievedI, deltaI, swaps, restarts, seed}
std::string write_synth_sidecar(const SynthResult& result);

}  // namespace tiltmap
