#include <algorithm>
#include <cctype>
#include <cmath>

#include "tiltmap/error.hpp"
#include "tiltmap/seed.hpp"
#include "tiltmap/taskgen.hpp"

namespace tiltmap {
namespace {

constexpr std::uint64_t kTaskStream = 1;
constexpr std::uint64_t kSynthStream = 2;
constexpr std::uint64_t kDrawStream = 3;

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::string range_text(AnswerRange r) { return std::to_string(r.lo) + ".." + std::to_string(r.hi); }

/// Re-synthesizes the layer every `every` failed draws.
class LayerSource {
 public:
  LayerSource(const GeoMap& map, const ThematicLayer& reference, const ContiguityWeights& weights,
              const GenConfig& config, std::uint64_t seed)
      : map_(map), reference_(reference), weights_(weights), config_(config), seed_(seed) {}

  const SynthResult& current(std::size_t attempt) {
    const std::size_t epoch = attempt / std::max<std::size_t>(config_.resynth_every, 1);
    if (!synth_ || epoch != epoch_) {
      SynthConfig sc = config_.synth;
      sc.rng_seed = derive_seed(seed_, kSynthStream, epoch);
      synth_ = synthesize(map_, reference_, weights_, sc);
      epoch_ = epoch;
    }
    return *synth_;
  }

 private:
  const GeoMap& map_;
  const ThematicLayer& reference_;
  const ContiguityWeights& weights_;
  const GenConfig& config_;
  std::uint64_t seed_;
  std::optional<SynthResult> synth_;
  std::size_t epoch_ = 0;
};

}  // namespace

std::string_view distance_class_name(DistanceClass c) noexcept {
  switch (c) {
    case DistanceClass::Close: return "close";
    case DistanceClass::Far: return "far";
    case DistanceClass::Neither: return "neither";
  }
  return "neither";
}

DistanceClass parse_distance_class(std::string_view s) {
  if (s == "close") return DistanceClass::Close;
  if (s == "far") return DistanceClass::Far;
  if (s == "neither") return DistanceClass::Neither;
  throw Error(Errc::InvalidArgument, "unknown distance class '" + std::string(s) + "'");
}

std::string_view task_kind_name(TaskKind k) noexcept {
  return k == TaskKind::AreaComparison ? "areaComparison" : "region";
}

DistanceClass DatasetProfile::classify(double d) const {
  if (close_max_deg && d < *close_max_deg) return DistanceClass::Close;
  if (far_range && d >= far_range->first && d <= far_range->second) return DistanceClass::Far;
  return DistanceClass::Neither;
}

void DatasetProfile::validate() const {
  if (region_min < 1 || region_max < region_min) throw Error(Errc::InvalidArgument, "bad region size range");
  if (close_max_deg.has_value() != far_range.has_value()) {
    throw Error(Errc::InvalidArgument, "close and far bands must be given together");
  }
  if (far_range && !(*close_max_deg < far_range->first && far_range->first <= far_range->second)) {
    throw Error(Errc::InvalidArgument, "close band must lie below the far band");
  }
}

DatasetProfile DatasetProfile::us() { return {"US", 5, 5, 3.0, std::pair{25.0, 28.0}, ValueTransform::SquareRoot}; }
DatasetProfile DatasetProfile::uk() { return {"UK", 15, 20, 0.5, std::pair{5.0, 5.5}, ValueTransform::SquareRoot}; }
DatasetProfile DatasetProfile::eu() {
  return {"EU", 10, 10, std::nullopt, std::nullopt, ValueTransform::FourthRoot};
}

DatasetProfile DatasetProfile::named(std::string_view name) {
  const std::string n = upper(name);
  if (n == "US") return us();
  if (n == "UK") return uk();
  if (n == "EU") return eu();
  throw Error(Errc::InvalidArgument, "unknown dataset profile '" + std::string(name) + "'");
}

double cv(std::span<const double> values) {
  if (values.size() < 2) throw Error(Errc::InvalidArgument, "CV needs at least two values");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  if (!(mean > 0.0)) throw Error(Errc::NonPositiveMean, "mean is not positive");
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size())) / mean;
}

double region_answer(const GeoMap& map, const ThematicLayer& layer, std::span<const std::string> ids) {
  if (ids.empty()) throw Error(Errc::InvalidArgument, "region is empty");
  double num = 0.0, den = 0.0;
  for (const std::string& id : ids) {
    const Area& a = map.area(map.index_of(id));
    const auto it = layer.values.find(id);
    if (it == layer.values.end()) throw Error(Errc::UnknownArea, "layer has no value for '" + id + "'");
    num += a.surface * it->second;
    den += a.surface;
  }
  return num / den;
}

GeneratedTask gen_area_comparison(const GeoMap& map, const ThematicLayer& reference, const DatasetProfile& profile,
                                  AnswerRange range, DistanceClass target_class, const ContiguityWeights& weights,
                                  const GenConfig& config, std::uint64_t seed) {
  profile.validate();
  if (!profile.has_comparisons()) {
    throw Error(Errc::InvalidArgument, "profile " + profile.name + " defines no comparison distance bands");
  }
  if (target_class == DistanceClass::Neither) throw Error(Errc::InvalidArgument, "distance class must be close or far");

  struct Pair {
    std::size_t a, b;
    double deg;
  };
  std::vector<Pair> pairs;
  for (std::size_t a = 0; a < map.size(); ++a) {
    for (std::size_t b = a + 1; b < map.size(); ++b) {
      const double d = great_circle_deg(map.area(a).centroid, map.area(b).centroid);
      if (profile.classify(d) == target_class) pairs.push_back({a, b, d});
    }
  }
  if (pairs.empty()) {
    throw Error(Errc::GenerationExhausted, "no " + std::string(distance_class_name(target_class)) + " pairs in map");
  }

  Rng rng = make_rng(derive_seed(seed, kDrawStream, 0));
  std::uniform_int_distribution<std::size_t> pick(0, pairs.size() - 1);
  std::bernoulli_distribution flip(0.5);
  LayerSource source(map, reference, weights, config, seed);
  for (std::size_t attempt = 0; attempt < config.attempt_budget; ++attempt) {
    const SynthResult& synth = source.current(attempt);
    Pair p = pairs[pick(rng)];
    if (flip(rng)) std::swap(p.a, p.b);
    const std::string& ia = map.area(p.a).id;
    const std::string& ib = map.area(p.b).id;
    const double diff = std::abs(synth.layer.values.at(ia) - synth.layer.values.at(ib));
    if (!range.contains(diff)) continue;
    GeneratedTask out;
    out.layer = synth.layer;
    out.synth = synth;
    out.task.kind = TaskKind::AreaComparison;
    out.task.targets = {ia, ib};
    out.task.distance_deg = p.deg;
    out.task.distance_class = target_class;
    out.task.answer = diff;
    out.task.answer_range = range;
    out.task.seed = seed;
    return out;
  }
  throw Error(Errc::GenerationExhausted, "no " + std::string(distance_class_name(target_class)) +
                                             " comparison with answer in " + range_text(range) + " after " +
                                             std::to_string(config.attempt_budget) + " attempts");
}

GeneratedTask gen_region(const GeoMap& map, const ThematicLayer& reference, const DatasetProfile& profile,
                         AnswerRange range, const ContiguityWeights& weights, const GenConfig& config,
                         std::uint64_t seed) {
  profile.validate();
  const std::vector<std::size_t> comp = map.component_sizes();
  std::vector<std::size_t> seeds;
  for (std::size_t i = 0; i < map.size(); ++i) {
    if (comp[i] >= profile.region_min) seeds.push_back(i);
  }
  if (seeds.empty()) {
    throw Error(Errc::ComponentTooSmall, "no connected component holds " + std::to_string(profile.region_min) +
                                             " areas");
  }

  Rng rng = make_rng(derive_seed(seed, kDrawStream, 0));
  std::uniform_int_distribution<std::size_t> pick_seed(0, seeds.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_size(profile.region_min, profile.region_max);
  LayerSource source(map, reference, weights, config, seed);
  for (std::size_t attempt = 0; attempt < config.attempt_budget; ++attempt) {
    const SynthResult& synth = source.current(attempt);
    const std::size_t start = seeds[pick_seed(rng)];
    const std::size_t k = pick_size(rng);
    if (comp[start] < k) continue;
    const std::vector<std::size_t> members = contiguous_region(map, start, k, rng);

    std::vector<std::string> ids;
    std::vector<double> values;
    for (std::size_t m : members) {
      ids.push_back(map.area(m).id);
      values.push_back(synth.layer.values.at(ids.back()));
    }
    double mean = 0.0;
    for (double v : values) mean += v;
    if (!(mean > 0.0)) continue;
    const double c = values.size() >= 2 ? cv(values) : 0.0;
    if (c < kCvMin || c > kCvMax) continue;
    const double answer = region_answer(map, synth.layer, ids);
    if (!range.contains(answer)) continue;

    GeneratedTask out;
    out.layer = synth.layer;
    out.synth = synth;
    out.task.kind = TaskKind::Region;
    std::sort(ids.begin(), ids.end());
    out.task.targets = std::move(ids);
    out.task.cv = c;
    out.task.answer = answer;
    out.task.answer_range = range;
    out.task.seed = seed;
    return out;
  }
  throw Error(Errc::GenerationExhausted, "no region with CV in [0.40, 0.60] and answer in " + range_text(range) +
                                             " after " + std::to_string(config.attempt_budget) + " attempts");
}

std::vector<TaskRequest> round_robin_requests(const DatasetProfile& profile, std::size_t regions_per_range,
                                              std::size_t comparisons_per_range_and_class) {
  std::vector<TaskRequest> out;
  const std::size_t rounds = std::max(regions_per_range, comparisons_per_range_and_class);
  for (std::size_t r = 0; r < rounds; ++r) {
    for (const AnswerRange& range : kAnswerRanges) {
      if (profile.has_comparisons() && r < comparisons_per_range_and_class) {
        out.push_back({TaskKind::AreaComparison, range, DistanceClass::Close});
        out.push_back({TaskKind::AreaComparison, range, DistanceClass::Far});
      }
      if (r < regions_per_range) out.push_back({TaskKind::Region, range, DistanceClass::Neither});
    }
  }
  return out;
}

std::vector<GeneratedTask> generate_tasks(const GeoMap& map, const ThematicLayer& reference,
                                          const DatasetProfile& profile, std::span<const TaskRequest> requests,
                                          const ContiguityWeights& weights, const GenConfig& config,
                                          std::uint64_t master_seed) {
  std::vector<GeneratedTask> out;
  out.reserve(requests.size());
  for (std::size_t i = 0; i < requests.size(); ++i) {
    const TaskRequest& rq = requests[i];
    const std::uint64_t seed = derive_seed(master_seed, kTaskStream, i);
    if (rq.kind == TaskKind::AreaComparison) {
      out.push_back(gen_area_comparison(map, reference, profile, rq.range, rq.distance_class, weights, config, seed));
    } else {
      out.push_back(gen_region(map, reference, profile, rq.range, weights, config, seed));
    }
  }
  return out;
}

double abs_diff(int participant_answer, double truth) {
  if (participant_answer < 0 || participant_answer > 100) {
    throw Error(Errc::OutOfRange, "answer " + std::to_string(participant_answer) + " outside [0, 100]");
  }
  return std::abs(static_cast<double>(participant_answer) - truth);
}

}  // namespace tiltmap
