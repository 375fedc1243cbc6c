#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fogsched/igeo.hpp"
#include "fogsched/metrics.hpp"
#include "fogsched/rl.hpp"

namespace fogsched {

// Mean-split comparisons treat values within this relative distance of the
// mean as equal to it, so a set of identical values never splits on
// rounding noise in the mean.
inline constexpr double kMeanTieTolerance = 1e-12;
bool strictly_below_mean(double value, double mean);

struct TrafficClassification {
  std::vector<double> node_traffic;  // mean traffic_load over incident node-node links, 0 if none
  double average_traffic = 0.0;
  std::vector<int> low_traffic_nodes;
  std::vector<int> high_traffic_nodes;
  int computed_at = 0;
};

struct DeadlinePartition {
  double deadline_threshold = 0.0;
  std::vector<int> low_deadline_tasks;
  std::vector<int> high_deadline_tasks;
};

struct ThresholdPolicy {
  enum class Kind { batch_mean, fixed };
  Kind kind = Kind::batch_mean;
  double value = 0.0;

  static ThresholdPolicy batch_mean() { return {}; }
  static ThresholdPolicy fixed(double ms) { return {Kind::fixed, ms}; }
};

TrafficClassification classify_nodes(const Topology& topology);
TrafficClassification reclassify(const TrafficClassification& previous, const Topology& topology);
DeadlinePartition partition_tasks(std::span<const Task> tasks, const ThresholdPolicy& policy);

struct RigeoConfig {
  IgeoParams igeo;
  RlConfig rl;
  FitnessWeights weights;
  ThresholdPolicy threshold;
};

struct RigeoResult {
  Assignment assignment;
  MetricsReport report;
  TrafficClassification classification;
  DeadlinePartition partition;
  std::optional<SubSchedule> igeo;  // low-deadline tasks
  std::optional<SubSchedule> rl;    // high-deadline tasks
  bool igeo_fallback = false;       // low-traffic class empty, IGEO used every node
  bool rl_fallback = false;         // high-traffic class empty, RL used every node
  std::vector<std::string> warnings;
};

// Low-deadline tasks go to IGEO over low-traffic nodes, high-deadline tasks
// to the RL assigner over high-traffic nodes. Each sub-problem is optimized
// against its own tasks only; the merged assignment is then evaluated once
// over all tasks with shared queues.
RigeoResult rigeo_schedule(const Evaluator& evaluator, const RigeoConfig& config);

nlohmann::json routing_summary(const RigeoResult& result);

}  // namespace fogsched
