#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "fogsched/model.hpp"

namespace fogsched {

struct ResponseBreakdown {
  int task_id = 0;
  double propagation = 0.0;   // P_i
  double transmission = 0.0;  // T_i
  double execution = 0.0;     // E_i
  double queue_wait = 0.0;    // Q_i
  double response = 0.0;      // R_i = P_i + T_i + E_i + Q_i

  bool operator==(const ResponseBreakdown&) const = default;
};

struct Normalizers {
  double response = 1.0;  // ms
  double deadline = 1.0;  // ms
  double energy = 1.0;    // J

  bool operator==(const Normalizers&) const = default;
};

// Weighted, normalized sum of total response, total deadline violation and
// total energy. When normalizers are absent, Objective fills them from a
// uniformly random assignment of the same (sub)problem.
struct FitnessWeights {
  double w_response = 1.0;
  double w_deadline = 1.0;
  double w_energy = 1.0;
  std::optional<Normalizers> normalizers;

  void validate() const;
};

struct MetricsReport {
  std::vector<ResponseBreakdown> per_task;
  std::vector<double> dv_per_task;
  double dv_total = 0.0;
  std::vector<double> energy_per_node;
  double energy_total = 0.0;
  double response_total = 0.0;
  double response_max = 0.0;
  double horizon = 0.0;  // max per-node busy time
  double fitness = 0.0;
};

// Aggregates of one evaluation; everything fitness needs.
struct Totals {
  double response_total = 0.0;
  double response_max = 0.0;
  double dv_total = 0.0;
  double energy_total = 0.0;
  double horizon = 0.0;
};

double deadline_violation(const ResponseBreakdown& breakdown, double deadline);
double deadline_violation(double response, double deadline);

double weighted_fitness(const Totals& totals, const FitnessWeights& weights);

// Precomputes per (task, node) network and execution costs for an instance.
// Routing follows the hop-count shortest path from the task's gateway (BFS,
// neighbours visited in ascending node id, first-listed parallel link wins),
// preceded by the device uplink when one exists.
class Evaluator {
 public:
  explicit Evaluator(Instance instance);

  const Instance& instance() const { return instance_; }
  int task_count() const { return instance_.task_count(); }
  int node_count() const { return instance_.node_count(); }

  double propagation(int task, int node) const { return propagation_[idx(task, node)]; }
  double transmission(int task, int node) const { return transmission_[idx(task, node)]; }
  double execution(int task, int node) const { return execution_[idx(task, node)]; }
  // Position of a task in the global (deadline, id) order.
  int edf_rank(int task) const { return edf_rank_[task]; }
  // Hop path (node ids) from the gateway of `task` to `node`, inclusive.
  std::vector<int> route(int task, int node) const;

  ResponseBreakdown response_breakdown(const Assignment& assignment, int task_id) const;
  double total_deadline_violation(const Assignment& assignment) const;
  double node_energy(const Assignment& assignment, int node_id, double horizon) const;
  double total_energy(const Assignment& assignment, double horizon) const;
  double makespan(const Assignment& assignment) const;
  double fitness(const Assignment& assignment, const FitnessWeights& weights) const;
  MetricsReport report(const Assignment& assignment, const FitnessWeights& weights) const;

  // Evaluates only `tasks` (task ids), with tasks[k] on nodes[k]; queues hold
  // only these tasks, energy covers every node of the instance.
  // `edf_positions` must list positions into `tasks` sorted by edf_rank.
  Totals totals(std::span<const int> tasks, std::span<const int> nodes, std::span<const int> edf_positions) const;

  // Normalizers from a uniform random placement of `tasks` over `candidates`.
  Normalizers random_normalizers(std::span<const int> tasks, std::span<const int> candidates,
                                 std::uint64_t seed = kNormalizerSeed) const;

  static constexpr std::uint64_t kNormalizerSeed = 0x6e6f726dULL;

 private:
  std::size_t idx(int task, int node) const {
    return static_cast<std::size_t>(task) * static_cast<std::size_t>(instance_.node_count()) + node;
  }
  void check(const Assignment& assignment) const;
  std::vector<double> queue_waits(const Assignment& assignment) const;
  std::vector<double> busy_times(const Assignment& assignment) const;

  Instance instance_;
  std::vector<double> propagation_;
  std::vector<double> transmission_;
  std::vector<double> execution_;
  std::vector<int> edf_rank_;
  std::vector<std::vector<int>> parent_;  // BFS tree per source node
};

FitnessWeights resolve_weights(const Evaluator& evaluator, FitnessWeights weights);

// Fitness of a genome restricted to a task subset and a candidate node list:
// genome[k] is an index into candidates() for task tasks()[k].
class Objective {
 public:
  Objective(const Evaluator& evaluator, std::vector<int> tasks, std::vector<int> candidates,
            FitnessWeights weights);

  double operator()(std::span<const int> genome) const;
  Totals totals(std::span<const int> genome) const;

  const Evaluator& evaluator() const { return *evaluator_; }
  const std::vector<int>& tasks() const { return tasks_; }
  const std::vector<int>& candidates() const { return candidates_; }
  const FitnessWeights& weights() const { return weights_; }
  int dimension() const { return static_cast<int>(tasks_.size()); }
  int candidate_count() const { return static_cast<int>(candidates_.size()); }
  std::vector<int> node_ids(std::span<const int> genome) const;

 private:
  const Evaluator* evaluator_;
  std::vector<int> tasks_;
  std::vector<int> candidates_;
  std::vector<int> edf_positions_;
  FitnessWeights weights_;
};

nlohmann::json report_to_json(const MetricsReport& report);
// One row: dv_total,energy_total,response_total,fitness
std::string report_csv_header();
std::string report_csv_row(const MetricsReport& report);

}  // namespace fogsched
