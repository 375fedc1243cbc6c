#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace fogsched {

using Rng = std::mt19937_64;

// Units used throughout: time in ms, work in MI, rate in MIPS, data in
// kilobits, bandwidth in kb/ms, energy in J, power in J/s.

struct Task {
  int id = 0;
  double length = 0.0;        // MI
  double data_size = 0.0;     // kb
  double deadline = 0.0;      // ms
  double arrival_time = 0.0;  // ms
  int source_device = 0;

  bool operator==(const Task&) const = default;
};

struct FogNode {
  int id = 0;
  double mips = 0.0;
  double active_power = 0.0;
  double idle_power = 0.0;
  double alpha = 1.0;
  double beta = 1.0;

  bool operator==(const FogNode&) const = default;
};

// A node-node link, or (uplink == true) the access link from an IoT device
// (endpoints[0] is the device index) to its gateway node (endpoints[1]).
struct Link {
  std::array<int, 2> endpoints{0, 0};
  double bandwidth = 0.0;          // kb/ms
  double propagation_delay = 0.0;  // ms
  double traffic_load = 0.0;
  bool uplink = false;

  bool operator==(const Link&) const = default;
};

struct Topology {
  std::vector<FogNode> nodes;
  std::vector<Link> links;
  std::vector<int> device_gateways;  // device index -> gateway node id

  bool operator==(const Topology&) const = default;
};

struct Range {
  double min = 0.0;
  double max = 0.0;

  bool operator==(const Range&) const = default;
};

struct ScenarioConfig {
  int n_tasks = 200;
  int n_nodes = 20;
  int n_devices = 0;  // 0 selects 2 * n_nodes
  Range mips_range{2000.0, 6000.0};
  Range active_power_range{80.0, 200.0};
  Range idle_ratio_range{0.1, 0.3};  // idle_power = ratio * active_power
  Range deadline_range{50.0, 500.0};
  Range task_length_range{100.0, 1000.0};
  Range data_size_range{100.0, 1000.0};
  Range traffic_range{0.0, 1.0};
  Range bandwidth_range{20.0, 100.0};
  Range propagation_range{0.5, 5.0};
  Range arrival_range{0.0, 0.0};
  double alpha = 1.0;
  double beta = 1.0;
  std::uint64_t rng_seed = 0;

  int device_count() const { return n_devices > 0 ? n_devices : 2 * n_nodes; }
  // Throws std::invalid_argument naming the first bad field.
  void validate() const;

  bool operator==(const ScenarioConfig&) const = default;
};

struct Instance {
  std::optional<ScenarioConfig> config;
  Topology topology;
  std::vector<Task> tasks;

  int task_count() const { return static_cast<int>(tasks.size()); }
  int node_count() const { return static_cast<int>(topology.nodes.size()); }

  bool operator==(const Instance&) const = default;
};

// mapping[i] is the node executing task i; order[j] is node j's execution
// sequence (earliest deadline first, ties by lower task id).
struct Assignment {
  std::vector<int> mapping;
  std::vector<std::vector<int>> order;

  bool operator==(const Assignment&) const = default;
};

struct Violation {
  std::string entity;  // "task", "node", "link", "device", "topology", "assignment"
  int id = -1;
  std::string rule;

  bool operator==(const Violation&) const = default;
};

std::vector<Violation> validate_instance(const Topology& topology, std::span<const Task> tasks);
inline std::vector<Violation> validate_instance(const Instance& instance) {
  return validate_instance(instance.topology, instance.tasks);
}

// Orders tasks by (deadline, id).
bool edf_before(const Task& a, const Task& b);

Assignment make_assignment(const Instance& instance, std::vector<int> mapping);
std::vector<Violation> validate_assignment(const Instance& instance, const Assignment& assignment);

Instance generate_scenario(const ScenarioConfig& config);

}  // namespace fogsched
