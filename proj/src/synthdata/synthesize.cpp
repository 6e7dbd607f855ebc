#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "tiltmap/error.hpp"
#include "tiltmap/synthdata.hpp"

namespace tiltmap {
namespace {

/// Centered values with running W z and W^T z so a swap's effect on the
/// cross-product sum costs O(1).
class SwapState {
 public:
  SwapState(std::vector<double> z, const ContiguityWeights& w) : z_(std::move(z)), w_(w) { rebuild(); }

  void rebuild() {
    const std::size_t n = z_.size();
    wz_.assign(n, 0.0);
    wtz_.assign(n, 0.0);
    num_ = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (const auto& e : w_.row(i)) {
        wz_[i] += e.weight * z_[e.index];
        wtz_[e.index] += e.weight * z_[i];
      }
      num_ += z_[i] * wz_[i];
    }
  }

  double numerator_after_swap(std::size_t i, std::size_t j) const {
    const double d = z_[j] - z_[i];
    const double wij = w_.weight(i, j), wji = w_.weight(j, i);
    return num_ + d * (wz_[i] + wtz_[i] - wz_[j] - wtz_[j]) - d * d * (wij + wji);
  }

  void swap(std::size_t i, std::size_t j, double new_num) {
    const double d = z_[j] - z_[i];
    for (const auto& e : w_.column(i)) wz_[e.index] += e.weight * d;
    for (const auto& e : w_.column(j)) wz_[e.index] -= e.weight * d;
    for (const auto& e : w_.row(i)) wtz_[e.index] += e.weight * d;
    for (const auto& e : w_.row(j)) wtz_[e.index] -= e.weight * d;
    std::swap(z_[i], z_[j]);
    num_ = new_num;
  }

  const std::vector<double>& z() const noexcept { return z_; }
  double numerator() const noexcept { return num_; }

 private:
  std::vector<double> z_;
  const ContiguityWeights& w_;
  std::vector<double> wz_, wtz_;
  double num_ = 0.0;
};

}  // namespace

void SynthConfig::validate() const {
  if (!(target_tolerance > 0.0)) throw Error(Errc::InvalidArgument, "target tolerance must be positive");
}

SynthResult synthesize(const GeoMap& map, const ThematicLayer& reference, const ContiguityWeights& weights,
                       const SynthConfig& config, Rng& rng) {
  config.validate();
  const std::vector<double> ref_values = values_in_map_order(map, reference);
  const double ref_i = morans_i(ref_values, weights);
  const std::size_t n = ref_values.size();

  double mean = 0.0;
  for (double v : ref_values) mean += v;
  mean /= static_cast<double>(n);
  // Permutations leave the mean and sum of squares unchanged, so only the
  // numerator moves. Work on positions into the value array.
  double den = 0.0;
  for (double v : ref_values) den += (v - mean) * (v - mean);
  const double scale = static_cast<double>(n) / weights.s0() / den;
  auto delta_of = [&](double num) { return std::abs(num * scale - ref_i); };

  std::vector<std::size_t> best_perm;
  double best_delta = std::numeric_limits<double>::infinity();
  std::size_t swaps = 0, restarts = 0;
  const std::size_t stall_limit = std::max<std::size_t>(2000, 20 * n);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);

  for (;; ++restarts) {
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<double> z(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = ref_values[perm[i]] - mean;
    SwapState state(std::move(z), weights);
    double cur = delta_of(state.numerator());
    std::size_t stall = 0;
    while (cur > config.target_tolerance && swaps < config.max_swaps && stall < stall_limit) {
      ++swaps;
      ++stall;
      const std::size_t i = pick(rng), j = pick(rng);
      if (i == j || state.z()[i] == state.z()[j]) continue;
      const double num = state.numerator_after_swap(i, j);
      const double d = delta_of(num);
      if (d < cur) {
        state.swap(i, j, num);
        std::swap(perm[i], perm[j]);
        cur = d;
        stall = 0;
      }
    }
    if (cur < best_delta) {
      best_delta = cur;
      best_perm = perm;
    }
    if (best_delta <= config.target_tolerance || swaps >= config.max_swaps || restarts >= config.max_restarts) break;
  }

  SynthResult result;
  result.reference_i = ref_i;
  result.swaps = swaps;
  result.restarts = restarts;
  result.seed = config.rng_seed;
  result.layer.transform = reference.transform;
  result.layer.source_min = reference.source_min;
  result.layer.source_max = reference.source_max;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = ref_values[best_perm[i]];
    result.layer.values[map.area(i).id] = out[i];
  }
  result.achieved_i = morans_i(out, weights);
  result.delta_i = std::abs(result.achieved_i - ref_i);
  if (result.delta_i > config.target_tolerance) {
    std::ostringstream os;
    os << "best |dI| " << result.delta_i << " after " << swaps << " swaps and " << restarts << " restarts";
    throw Error(Errc::TargetUnreachable, os.str());
  }
  return result;
}

SynthResult synthesize(const GeoMap& map, const ThematicLayer& reference, const ContiguityWeights& weights,
                       const SynthConfig& config) {
  Rng rng = make_rng(config.rng_seed);
  return synthesize(map, reference, weights, config, rng);
}

std::string write_synth_sidecar(const SynthResult& r) {
  nlohmann::ordered_json doc;
  doc["referenceI"] = r.reference_i;
  doc["achievedI"] = r.achieved_i;
  doc["deltaI"] = r.delta_i;
  doc["swaps"] = r.swaps;
  doc["restarts"] = r.restarts;
  doc["seed"] = r.seed;
  return doc.dump(2) + "\n";
}

}  // namespace tiltmap
