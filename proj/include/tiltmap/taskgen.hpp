#pragma once

// Study questions with controlled answers: pairwise area comparisons at
// close or far distances, and area-weighted region averages.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tiltmap/geodata.hpp"
#include "tiltmap/synthdata.hpp"
#include "tiltmap/thematic.hpp"

namespace tiltmap {

enum class DistanceClass { Close, Far, Neither };

std::string_view distance_class_name(DistanceClass c) noexcept;
/// Throws InvalidArgument.
DistanceClass parse_distance_class(std::string_view s);

struct DatasetProfile {
  std::string name;
  std::size_t region_min = 0;
  std::size_t region_max = 0;
  std::optional<double> close_max_deg;                 // close iff distance < close_max_deg
  std::optional<std::pair<double, double>> far_range;  // far iff distance in [lo, hi]
  ValueTransform transform = ValueTransform::SquareRoot;

  bool has_comparisons() const noexcept { return close_max_deg.has_value() && far_range.has_value(); }
  DistanceClass classify(double distance_deg) const;
  /// Throws InvalidArgument.
  void validate() const;

  static DatasetProfile us();
  static DatasetProfile uk();
  static DatasetProfile eu();
  /// "US", "UK" or "EU", case-insensitive. Throws InvalidArgument.
  static DatasetProfile named(std::string_view name);
};

struct AnswerRange {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double v) const noexcept { return v >= lo && v <= hi; }
  friend bool operator==(const AnswerRange&, const AnswerRange&) = default;
};

inline constexpr AnswerRange kAnswerRanges[] = {{20.0, 40.0}, {40.0, 60.0}, {60.0, 80.0}};

enum class TaskKind { AreaComparison, Region };

std::string_view task_kind_name(TaskKind k) noexcept;

struct TaskSpec {
  TaskKind kind = TaskKind::Region;
  std::vector<std::string> targets;  // comparison: two ids; region: member ids ascending
  std::optional<double> distance_deg;
  std::optional<DistanceClass> distance_class;
  std::optional<double> cv;
  double answer = 0.0;
  AnswerRange answer_range;
  std::string layer_ref;  // layerfile path
  std::uint64_t seed = 0;
};

/// Population standard deviation over the mean. Throws NonPositiveMean,
/// InvalidArgument (fewer than two values).
double cv(std::span<const double> values);

/// Surface-weighted mean of layer values. Throws UnknownArea, InvalidArgument (empty).
double region_answer(const GeoMap& map, const ThematicLayer& layer, std::span<const std::string> ids);

inline constexpr double kCvMin = 0.40;
inline constexpr double kCvMax = 0.60;

struct GenConfig {
  SynthConfig synth;
  std::size_t attempt_budget = 10000;
  std::size_t resynth_every = 50;
};

struct GeneratedTask {
  ThematicLayer layer;
  SynthResult synth;
  TaskSpec task;
};

/// Throws GenerationExhausted, InvalidArgument (profile without distance bands
/// or class Neither), TargetUnreachable.
GeneratedTask gen_area_comparison(const GeoMap& map, const ThematicLayer& reference, const DatasetProfile& profile,
                                  AnswerRange range, DistanceClass target_class, const ContiguityWeights& weights,
                                  const GenConfig& config, std::uint64_t seed);
/// Throws GenerationExhausted, ComponentTooSmall, TargetUnreachable.
GeneratedTask gen_region(const GeoMap& map, const ThematicLayer& reference, const DatasetProfile& profile,
                         AnswerRange range, const ContiguityWeights& weights, const GenConfig& config,
                         std::uint64_t seed);

struct TaskRequest {
  TaskKind kind = TaskKind::Region;
  AnswerRange range;
  DistanceClass distance_class = DistanceClass::Neither;
};

/// `per_range` region tasks for every answer range, plus the same number of
/// comparisons per range and distance class when the profile has bands.
std::vector<TaskRequest> round_robin_requests(const DatasetProfile& profile, std::size_t regions_per_range,
                                              std::size_t comparisons_per_range_and_class);

/// Task i uses seed derive_seed(master_seed, 1, i).
std::vector<GeneratedTask> generate_tasks(const GeoMap& map, const ThematicLayer& reference,
                                          const DatasetProfile& profile, std::span<const TaskRequest> requests,
                                          const ContiguityWeights& weights, const GenConfig& config,
                                          std::uint64_t master_seed);

/// |answer - truth|. Throws OutOfRange unless answer is in [0, 100].
double abs_diff(int participant_answer, double truth);

std::string write_taskfile(std::span<const TaskSpec> tasks);
/// Throws MalformedDocument.
std::vector<TaskSpec> read_taskfile(std::string_view json);

}  // namespace tiltmap
