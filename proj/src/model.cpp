#include "fogsched/model.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>
#include <utility>

namespace fogsched {

namespace {

void check_range(const Range& r, const char* name, bool positive) {
  if (!(r.min <= r.max)) throw std::invalid_argument(std::string(name) + ": min > max");
  if (positive ? !(r.min > 0.0) : !(r.min >= 0.0))
    throw std::invalid_argument(std::string(name) + (positive ? ": must be > 0" : ": must be >= 0"));
}

double sample(const Range& r, Rng& rng) {
  if (r.min == r.max) return r.min;
  return std::uniform_real_distribution<double>(r.min, r.max)(rng);
}

bool finite_nonneg(double v) { return v >= 0.0 && v <= std::numeric_limits<double>::max(); }

}  // namespace

void ScenarioConfig::validate() const {
  if (n_tasks <= 0) throw std::invalid_argument("n_tasks must be > 0");
  if (n_nodes <= 0) throw std::invalid_argument("n_nodes must be > 0");
  if (n_devices < 0) throw std::invalid_argument("n_devices must be >= 0");
  check_range(mips_range, "mips_range", true);
  check_range(active_power_range, "active_power_range", false);
  check_range(idle_ratio_range, "idle_ratio_range", false);
  if (idle_ratio_range.max > 1.0) throw std::invalid_argument("idle_ratio_range: max > 1");
  check_range(deadline_range, "deadline_range", true);
  check_range(task_length_range, "task_length_range", true);
  check_range(data_size_range, "data_size_range", false);
  check_range(traffic_range, "traffic_range", false);
  check_range(bandwidth_range, "bandwidth_range", true);
  check_range(propagation_range, "propagation_range", false);
  check_range(arrival_range, "arrival_range", false);
  if (!(alpha >= 0.0)) throw std::invalid_argument("alpha must be >= 0");
  if (!(beta >= 0.0)) throw std::invalid_argument("beta must be >= 0");
}

std::vector<Violation> validate_instance(const Topology& topology, std::span<const Task> tasks) {
  std::vector<Violation> out;
  const int m = static_cast<int>(topology.nodes.size());
  const int devices = static_cast<int>(topology.device_gateways.size());

  for (int j = 0; j < m; ++j) {
    const FogNode& node = topology.nodes[j];
    if (node.id != j) out.push_back({"node", node.id, "ids unique and contiguous"});
    if (!(node.mips > 0.0)) out.push_back({"node", node.id, "mips > 0"});
    if (!(node.idle_power >= 0.0)) out.push_back({"node", node.id, "idle_power >= 0"});
    if (!(node.active_power >= node.idle_power)) out.push_back({"node", node.id, "active_power >= idle_power"});
    if (!(node.alpha >= 0.0)) out.push_back({"node", node.id, "alpha >= 0"});
    if (!(node.beta >= 0.0)) out.push_back({"node", node.id, "beta >= 0"});
  }

  for (int d = 0; d < devices; ++d) {
    const int g = topology.device_gateways[d];
    if (g < 0 || g >= m) out.push_back({"device", d, "dangling gateway"});
  }

  // Union-find over nodes for the connectivity check.
  std::vector<int> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };

  std::vector<int> uplinks_per_device(devices, 0);
  for (int l = 0; l < static_cast<int>(topology.links.size()); ++l) {
    const Link& link = topology.links[l];
    if (!(link.bandwidth > 0.0)) out.push_back({"link", l, "bandwidth > 0"});
    if (!finite_nonneg(link.propagation_delay)) out.push_back({"link", l, "propagation_delay >= 0"});
    if (!finite_nonneg(link.traffic_load)) out.push_back({"link", l, "traffic_load >= 0"});
    const auto [a, b] = link.endpoints;
    if (link.uplink) {
      bool ok = true;
      if (a < 0 || a >= devices || b < 0 || b >= m) {
        out.push_back({"link", l, "dangling endpoint"});
        ok = false;
      }
      if (ok && topology.device_gateways[a] != b) out.push_back({"link", l, "uplink must end at the device gateway"});
      if (ok && ++uplinks_per_device[a] > 1) out.push_back({"link", l, "duplicate uplink"});
      continue;
    }
    if (a == b) {
      out.push_back({"link", l, "endpoints distinct"});
      continue;
    }
    if (a < 0 || a >= m || b < 0 || b >= m) {
      out.push_back({"link", l, "dangling endpoint"});
      continue;
    }
    parent[find(a)] = find(b);
  }
  for (int j = 1; j < m; ++j) {
    if (find(j) != find(0)) {
      out.push_back({"topology", j, "graph connected"});
      break;
    }
  }

  for (int i = 0; i < static_cast<int>(tasks.size()); ++i) {
    const Task& t = tasks[i];
    if (t.id != i) out.push_back({"task", t.id, "ids unique and contiguous"});
    if (!(t.length > 0.0)) out.push_back({"task", t.id, "length > 0"});
    if (!finite_nonneg(t.data_size)) out.push_back({"task", t.id, "data_size >= 0"});
    if (!(t.deadline > 0.0)) out.push_back({"task", t.id, "deadline > 0"});
    if (!finite_nonneg(t.arrival_time)) out.push_back({"task", t.id, "arrival_time >= 0"});
    if (t.source_device < 0 || t.source_device >= devices) out.push_back({"task", t.id, "unknown source_device"});
  }
  return out;
}

bool edf_before(const Task& a, const Task& b) {
  if (a.deadline != b.deadline) return a.deadline < b.deadline;
  return a.id < b.id;
}

Assignment make_assignment(const Instance& instance, std::vector<int> mapping) {
  const int n = instance.task_count();
  const int m = instance.node_count();
  if (static_cast<int>(mapping.size()) != n) throw std::invalid_argument("mapping length differs from task count");
  Assignment result;
  result.order.resize(m);
  std::vector<int> by_deadline(n);
  std::iota(by_deadline.begin(), by_deadline.end(), 0);
  std::sort(by_deadline.begin(), by_deadline.end(),
            [&](int a, int b) { return edf_before(instance.tasks[a], instance.tasks[b]); });
  for (int i : by_deadline) {
    const int j = mapping[i];
    if (j < 0 || j >= m) throw std::out_of_range("mapping references nonexistent node " + std::to_string(j));
    result.order[j].push_back(i);
  }
  result.mapping = std::move(mapping);
  return result;
}

std::vector<Violation> validate_assignment(const Instance& instance, const Assignment& assignment) {
  std::vector<Violation> out;
  const int n = instance.task_count();
  const int m = instance.node_count();
  if (static_cast<int>(assignment.mapping.size()) != n) {
    out.push_back({"assignment", -1, "mapping length equals task count"});
    return out;
  }
  if (static_cast<int>(assignment.order.size()) != m) {
    out.push_back({"assignment", -1, "one execution order per node"});
    return out;
  }
  for (int i = 0; i < n; ++i) {
    const int j = assignment.mapping[i];
    if (j < 0 || j >= m) out.push_back({"assignment", i, "mapping entry is a valid node id"});
  }
  for (int j = 0; j < m; ++j) {
    std::vector<int> expected;
    for (int i = 0; i < n; ++i)
      if (assignment.mapping[i] == j) expected.push_back(i);
    std::vector<int> got = assignment.order[j];
    std::sort(got.begin(), got.end());
    if (got != expected) out.push_back({"assignment", j, "node order is a permutation of its mapped tasks"});
  }
  return out;
}

Instance generate_scenario(const ScenarioConfig& config) {
  config.validate();
  Rng rng(config.rng_seed);
  Instance inst;
  inst.config = config;
  Topology& topo = inst.topology;
  const int m = config.n_nodes;

  topo.nodes.reserve(m);
  for (int j = 0; j < m; ++j) {
    FogNode node;
    node.id = j;
    node.mips = sample(config.mips_range, rng);
    node.active_power = sample(config.active_power_range, rng);
    node.idle_power = node.active_power * sample(config.idle_ratio_range, rng);
    node.alpha = config.alpha;
    node.beta = config.beta;
    topo.nodes.push_back(node);
  }

  auto make_link = [&](int a, int b) {
    Link link;
    link.endpoints = {a, b};
    link.bandwidth = sample(config.bandwidth_range, rng);
    link.propagation_delay = sample(config.propagation_range, rng);
    link.traffic_load = sample(config.traffic_range, rng);
    return link;
  };

  // Random spanning tree: each node in a shuffled order attaches to an
  // earlier one.
  std::vector<int> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::set<std::pair<int, int>> present;
  for (int k = 1; k < m; ++k) {
    const int other = perm[std::uniform_int_distribution<int>(0, k - 1)(rng)];
    const int a = std::min(perm[k], other), b = std::max(perm[k], other);
    present.insert({a, b});
    topo.links.push_back(make_link(a, b));
  }
  // Extra edges until the average degree reaches 3 or the graph is complete.
  const std::size_t complete = static_cast<std::size_t>(m) * (m - 1) / 2;
  while (2 * present.size() < 3 * static_cast<std::size_t>(m) && present.size() < complete) {
    int a = std::uniform_int_distribution<int>(0, m - 1)(rng);
    int b = std::uniform_int_distribution<int>(0, m - 1)(rng);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    if (!present.insert({a, b}).second) continue;
    topo.links.push_back(make_link(a, b));
  }

  const int devices = config.device_count();
  topo.device_gateways.resize(devices);
  for (int d = 0; d < devices; ++d) {
    const int g = std::uniform_int_distribution<int>(0, m - 1)(rng);
    topo.device_gateways[d] = g;
    Link up = make_link(d, g);
    up.uplink = true;
    up.traffic_load = 0.0;
    topo.links.push_back(up);
  }

  inst.tasks.reserve(config.n_tasks);
  for (int i = 0; i < config.n_tasks; ++i) {
    Task t;
    t.id = i;
    t.length = sample(config.task_length_range, rng);
    t.data_size = sample(config.data_size_range, rng);
    t.deadline = sample(config.deadline_range, rng);
    t.arrival_time = sample(config.arrival_range, rng);
    t.source_device = std::uniform_int_distribution<int>(0, devices - 1)(rng);
    inst.tasks.push_back(t);
  }
  return inst;
}

}  // namespace fogsched
