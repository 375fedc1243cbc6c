#include "fogsched/rigeo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fogsched {

bool strictly_below_mean(double value, double mean) {
  return value < mean - kMeanTieTolerance * std::max(1.0, std::abs(mean));
}

TrafficClassification classify_nodes(const Topology& topology) {
  const std::size_t m = topology.nodes.size();
  if (m == 0) throw std::invalid_argument("classify_nodes: topology has no nodes");
  std::vector<double> load(m, 0.0);
  std::vector<int> degree(m, 0);
  for (const Link& link : topology.links) {
    if (link.uplink) continue;
    for (int end : link.endpoints) {
      if (end < 0 || end >= static_cast<int>(m)) throw std::out_of_range("classify_nodes: dangling link endpoint");
      load[end] += link.traffic_load;
      ++degree[end];
    }
  }
  TrafficClassification c;
  c.node_traffic.resize(m);
  for (std::size_t j = 0; j < m; ++j) c.node_traffic[j] = degree[j] > 0 ? load[j] / degree[j] : 0.0;
  c.average_traffic = std::accumulate(c.node_traffic.begin(), c.node_traffic.end(), 0.0) / static_cast<double>(m);
  for (std::size_t j = 0; j < m; ++j) {
    if (strictly_below_mean(c.node_traffic[j], c.average_traffic)) c.low_traffic_nodes.push_back(static_cast<int>(j));
    else c.high_traffic_nodes.push_back(static_cast<int>(j));
  }
  return c;
}

TrafficClassification reclassify(const TrafficClassification& previous, const Topology& topology) {
  TrafficClassification c = classify_nodes(topology);
  c.computed_at = previous.computed_at + 1;
  return c;
}

DeadlinePartition partition_tasks(std::span<const Task> tasks, const ThresholdPolicy& policy) {
  if (tasks.empty()) throw std::invalid_argument("partition_tasks: empty task set");
  DeadlinePartition p;
  const bool by_mean = policy.kind == ThresholdPolicy::Kind::batch_mean;
  if (by_mean) {
    double sum = 0.0;
    for (const Task& t : tasks) sum += t.deadline;
    p.deadline_threshold = sum / static_cast<double>(tasks.size());
  } else {
    p.deadline_threshold = policy.value;
  }
  for (const Task& t : tasks) {
    const bool low = by_mean ? strictly_below_mean(t.deadline, p.deadline_threshold) : t.deadline < p.deadline_threshold;
    (low ? p.low_deadline_tasks : p.high_deadline_tasks).push_back(t.id);
  }
  return p;
}

RigeoResult rigeo_schedule(const Evaluator& evaluator, const RigeoConfig& config) {
  const Instance& inst = evaluator.instance();
  const FitnessWeights report_weights = resolve_weights(evaluator, config.weights);
  RigeoResult r;
  r.classification = classify_nodes(inst.topology);

  std::vector<int> all_nodes(inst.node_count());
  std::iota(all_nodes.begin(), all_nodes.end(), 0);
  std::vector<int> mapping(inst.task_count(), -1);

  if (!inst.tasks.empty()) {
    r.partition = partition_tasks(inst.tasks, config.threshold);
    // Sub-problem normalizers come from each sub-problem itself.
    FitnessWeights sub_weights = config.weights;
    sub_weights.normalizers.reset();

    if (!r.partition.low_deadline_tasks.empty()) {
      std::vector<int> nodes = r.classification.low_traffic_nodes;
      if (nodes.empty()) {
        r.igeo_fallback = true;
        r.warnings.push_back("low-traffic node class is empty; IGEO falls back to all nodes");
        nodes = all_nodes;
      }
      const Objective objective(evaluator, r.partition.low_deadline_tasks, std::move(nodes), sub_weights);
      r.igeo = igeo_optimize(objective, config.igeo);
      for (std::size_t k = 0; k < r.igeo->tasks.size(); ++k) mapping[r.igeo->tasks[k]] = r.igeo->nodes[k];
    }
    if (!r.partition.high_deadline_tasks.empty()) {
      std::vector<int> nodes = r.classification.high_traffic_nodes;
      if (nodes.empty()) {
        r.rl_fallback = true;
        r.warnings.push_back("high-traffic node class is empty; RL falls back to all nodes");
        nodes = all_nodes;
      }
      const Objective objective(evaluator, r.partition.high_deadline_tasks, std::move(nodes), sub_weights);
      r.rl = rl_optimize(objective, config.rl);
      for (std::size_t k = 0; k < r.rl->tasks.size(); ++k) mapping[r.rl->tasks[k]] = r.rl->nodes[k];
    }
  }

  r.assignment = make_assignment(inst, std::move(mapping));
  r.report = evaluator.report(r.assignment, report_weights);
  return r;
}

nlohmann::json routing_summary(const RigeoResult& r) {
  using nlohmann::json;
  auto sub = [](const std::optional<SubSchedule>& s) -> json {
    if (!s) return nullptr;
    return {{"tasks", s->tasks}, {"nodes", s->nodes}, {"fitness", s->fitness}, {"evaluations", s->evaluations}};
  };
  return {
      {"node_classes",
       {{"node_traffic", r.classification.node_traffic},
        {"average_traffic", r.classification.average_traffic},
        {"low_traffic_nodes", r.classification.low_traffic_nodes},
        {"high_traffic_nodes", r.classification.high_traffic_nodes},
        {"computed_at", r.classification.computed_at}}},
      {"task_partition",
       {{"deadline_threshold", r.partition.deadline_threshold},
        {"low_deadline_tasks", r.partition.low_deadline_tasks},
        {"high_deadline_tasks", r.partition.high_deadline_tasks}}},
      {"igeo", sub(r.igeo)},
      {"rl", sub(r.rl)},
      {"igeo_fallback", r.igeo_fallback},
      {"rl_fallback", r.rl_fallback},
      {"warnings", r.warnings},
      {"mapping", r.assignment.mapping},
      {"metrics",
       {{"dv_total", r.report.dv_total},
        {"energy_total", r.report.energy_total},
        {"response_total", r.report.response_total},
        {"response_max", r.report.response_max},
        {"fitness", r.report.fitness}}},
  };
}

}  // namespace fogsched
