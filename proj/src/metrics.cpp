#include "fogsched/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace fogsched {

void FitnessWeights::validate() const {
  if (!(w_response >= 0.0) || !(w_deadline >= 0.0) || !(w_energy >= 0.0))
    throw std::invalid_argument("fitness weights must be >= 0");
  if (!(w_response > 0.0 || w_deadline > 0.0 || w_energy > 0.0))
    throw std::invalid_argument("at least one fitness weight must be > 0");
  if (normalizers && !(normalizers->response > 0.0 && normalizers->deadline > 0.0 && normalizers->energy > 0.0))
    throw std::invalid_argument("fitness normalizers must be > 0");
}

double deadline_violation(double response, double deadline) {
  if (!(deadline > 0.0)) throw std::invalid_argument("deadline must be > 0");
  return std::max(0.0, response - deadline);
}

double deadline_violation(const ResponseBreakdown& breakdown, double deadline) {
  return deadline_violation(breakdown.response, deadline);
}

double weighted_fitness(const Totals& totals, const FitnessWeights& weights) {
  const Normalizers norm = weights.normalizers.value_or(Normalizers{});
  return weights.w_response * (totals.response_total / norm.response) +
         weights.w_deadline * (totals.dv_total / norm.deadline) + weights.w_energy * (totals.energy_total / norm.energy);
}

Evaluator::Evaluator(Instance instance) : instance_(std::move(instance)) {
  if (auto v = validate_instance(instance_); !v.empty())
    throw std::invalid_argument("invalid instance: " + v.front().entity + " " + std::to_string(v.front().id) + " violates " +
                                v.front().rule);
  const int n = instance_.task_count();
  const int m = instance_.node_count();
  const Topology& topo = instance_.topology;

  // adjacency[u] = (neighbour, link index), ascending by neighbour then link.
  std::vector<std::vector<std::pair<int, int>>> adjacency(m);
  std::vector<int> uplink_of(topo.device_gateways.size(), -1);
  for (int l = 0; l < static_cast<int>(topo.links.size()); ++l) {
    const Link& link = topo.links[l];
    if (link.uplink) {
      if (uplink_of[link.endpoints[0]] < 0) uplink_of[link.endpoints[0]] = l;
      continue;
    }
    adjacency[link.endpoints[0]].push_back({link.endpoints[1], l});
    adjacency[link.endpoints[1]].push_back({link.endpoints[0], l});
  }
  for (auto& adj : adjacency) std::sort(adj.begin(), adj.end());

  // parent_[s][v] = link index used to reach v in the BFS tree rooted at s.
  parent_.assign(m, std::vector<int>(m, -1));
  std::vector<std::vector<double>> path_delay(m, std::vector<double>(m, 0.0));
  std::vector<std::vector<double>> path_bandwidth(m, std::vector<double>(m, std::numeric_limits<double>::infinity()));
  for (int s = 0; s < m; ++s) {
    std::vector<bool> seen(m, false);
    std::deque<int> frontier{s};
    seen[s] = true;
    while (!frontier.empty()) {
      const int u = frontier.front();
      frontier.pop_front();
      for (auto [v, l] : adjacency[u]) {
        if (seen[v]) continue;
        seen[v] = true;
        parent_[s][v] = l;
        path_delay[s][v] = path_delay[s][u] + topo.links[l].propagation_delay;
        path_bandwidth[s][v] = std::min(path_bandwidth[s][u], topo.links[l].bandwidth);
        frontier.push_back(v);
      }
    }
  }

  propagation_.resize(static_cast<std::size_t>(n) * m);
  transmission_.resize(propagation_.size());
  execution_.resize(propagation_.size());
  for (int i = 0; i < n; ++i) {
    const Task& t = instance_.tasks[i];
    const int g = topo.device_gateways[t.source_device];
    const int up = uplink_of[t.source_device];
    const double up_delay = up >= 0 ? topo.links[up].propagation_delay : 0.0;
    const double up_bandwidth = up >= 0 ? topo.links[up].bandwidth : std::numeric_limits<double>::infinity();
    for (int j = 0; j < m; ++j) {
      const double bottleneck = std::min(up_bandwidth, path_bandwidth[g][j]);
      propagation_[idx(i, j)] = up_delay + path_delay[g][j];
      transmission_[idx(i, j)] = std::isinf(bottleneck) ? 0.0 : t.data_size / bottleneck;
      execution_[idx(i, j)] = t.length / topo.nodes[j].mips * 1000.0;
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return edf_before(instance_.tasks[a], instance_.tasks[b]); });
  edf_rank_.resize(n);
  for (int r = 0; r < n; ++r) edf_rank_[order[r]] = r;
}

std::vector<int> Evaluator::route(int task, int node) const {
  const int g = instance_.topology.device_gateways.at(instance_.tasks.at(task).source_device);
  std::vector<int> path{node};
  int v = node;
  while (v != g) {
    const Link& l = instance_.topology.links[parent_[g][v]];
    v = l.endpoints[0] == v ? l.endpoints[1] : l.endpoints[0];
    path.push_back(v);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

void Evaluator::check(const Assignment& assignment) const {
  if (auto v = validate_assignment(instance_, assignment); !v.empty())
    throw std::invalid_argument("invalid assignment: " + v.front().rule);
}

std::vector<double> Evaluator::queue_waits(const Assignment& assignment) const {
  std::vector<double> wait(instance_.tasks.size(), 0.0);
  for (int j = 0; j < node_count(); ++j) {
    double clock = 0.0;
    for (int i : assignment.order[j]) {
      wait[i] = clock;
      clock += execution(i, j);
    }
  }
  return wait;
}

std::vector<double> Evaluator::busy_times(const Assignment& assignment) const {
  std::vector<double> busy(node_count(), 0.0);
  for (int j = 0; j < node_count(); ++j)
    for (int i : assignment.order[j]) busy[j] += execution(i, j);
  return busy;
}

ResponseBreakdown Evaluator::response_breakdown(const Assignment& assignment, int task_id) const {
  if (task_id < 0 || task_id >= task_count()) throw std::out_of_range("unknown task id " + std::to_string(task_id));
  check(assignment);
  const int j = assignment.mapping[task_id];
  ResponseBreakdown b;
  b.task_id = task_id;
  b.propagation = propagation(task_id, j);
  b.transmission = transmission(task_id, j);
  b.execution = execution(task_id, j);
  for (int k : assignment.order[j]) {
    if (k == task_id) break;
    b.queue_wait += execution(k, j);
  }
  b.response = b.propagation + b.transmission + b.execution + b.queue_wait;
  return b;
}

double Evaluator::total_deadline_violation(const Assignment& assignment) const {
  check(assignment);
  const auto wait = queue_waits(assignment);
  double total = 0.0;
  for (int i = 0; i < task_count(); ++i) {
    const int j = assignment.mapping[i];
    const double r = propagation(i, j) + transmission(i, j) + execution(i, j) + wait[i];
    total += deadline_violation(r, instance_.tasks[i].deadline);
  }
  return total;
}

namespace {

double energy_of(const FogNode& node, double busy, double horizon) {
  return node.alpha * node.active_power * busy / 1000.0 + node.beta * node.idle_power * (horizon - busy) / 1000.0;
}

}  // namespace

double Evaluator::makespan(const Assignment& assignment) const {
  check(assignment);
  const auto busy = busy_times(assignment);
  return busy.empty() ? 0.0 : *std::max_element(busy.begin(), busy.end());
}

double Evaluator::node_energy(const Assignment& assignment, int node_id, double horizon) const {
  if (node_id < 0 || node_id >= node_count()) throw std::out_of_range("unknown node id " + std::to_string(node_id));
  check(assignment);
  double busy = 0.0;
  for (int i : assignment.order[node_id]) busy += execution(i, node_id);
  if (horizon < busy) throw std::invalid_argument("horizon shorter than node busy time");
  return energy_of(instance_.topology.nodes[node_id], busy, horizon);
}

double Evaluator::total_energy(const Assignment& assignment, double horizon) const {
  check(assignment);
  const auto busy = busy_times(assignment);
  double total = 0.0;
  for (int j = 0; j < node_count(); ++j) {
    if (horizon < busy[j]) throw std::invalid_argument("horizon shorter than node busy time");
    total += energy_of(instance_.topology.nodes[j], busy[j], horizon);
  }
  return total;
}

double Evaluator::fitness(const Assignment& assignment, const FitnessWeights& weights) const {
  return report(assignment, weights).fitness;
}

MetricsReport Evaluator::report(const Assignment& assignment, const FitnessWeights& weights) const {
  check(assignment);
  const FitnessWeights resolved = resolve_weights(*this, weights);
  MetricsReport rep;
  const auto wait = queue_waits(assignment);
  const auto busy = busy_times(assignment);
  const int n = task_count();
  rep.per_task.reserve(n);
  rep.dv_per_task.reserve(n);
  for (int i = 0; i < n; ++i) {
    const int j = assignment.mapping[i];
    ResponseBreakdown b{i, propagation(i, j), transmission(i, j), execution(i, j), wait[i], 0.0};
    b.response = b.propagation + b.transmission + b.execution + b.queue_wait;
    rep.per_task.push_back(b);
    rep.dv_per_task.push_back(deadline_violation(b.response, instance_.tasks[i].deadline));
    rep.dv_total += rep.dv_per_task.back();
    rep.response_total += b.response;
    rep.response_max = std::max(rep.response_max, b.response);
  }
  rep.horizon = busy.empty() ? 0.0 : *std::max_element(busy.begin(), busy.end());
  for (int j = 0; j < node_count(); ++j) {
    rep.energy_per_node.push_back(energy_of(instance_.topology.nodes[j], busy[j], rep.horizon));
    rep.energy_total += rep.energy_per_node.back();
  }
  rep.fitness = weighted_fitness({rep.response_total, rep.response_max, rep.dv_total, rep.energy_total, rep.horizon},
                                 resolved);
  return rep;
}

Totals Evaluator::totals(std::span<const int> tasks, std::span<const int> nodes,
                         std::span<const int> edf_positions) const {
  const std::size_t k = tasks.size();
  std::vector<double> clock(node_count(), 0.0);
  std::vector<double> response(k);
  for (int pos : edf_positions) {
    const int i = tasks[pos];
    const int j = nodes[pos];
    const double e = execution(i, j);
    response[pos] = propagation(i, j) + transmission(i, j) + e + clock[j];
    clock[j] += e;
  }
  Totals out;
  for (std::size_t pos = 0; pos < k; ++pos) {
    out.response_total += response[pos];
    out.response_max = std::max(out.response_max, response[pos]);
    out.dv_total += std::max(0.0, response[pos] - instance_.tasks[tasks[pos]].deadline);
  }
  out.horizon = clock.empty() ? 0.0 : *std::max_element(clock.begin(), clock.end());
  for (int j = 0; j < node_count(); ++j) out.energy_total += energy_of(instance_.topology.nodes[j], clock[j], out.horizon);
  return out;
}

Normalizers Evaluator::random_normalizers(std::span<const int> tasks, std::span<const int> candidates,
                                          std::uint64_t seed) const {
  if (candidates.empty()) throw std::invalid_argument("empty candidate node set");
  Rng rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
  std::vector<int> nodes(tasks.size());
  for (auto& v : nodes) v = candidates[pick(rng)];
  std::vector<int> positions(tasks.size());
  std::iota(positions.begin(), positions.end(), 0);
  std::sort(positions.begin(), positions.end(), [&](int a, int b) { return edf_rank_[tasks[a]] < edf_rank_[tasks[b]]; });
  const Totals t = totals(tasks, nodes, positions);
  auto positive = [](double v) { return v > 0.0 ? v : 1.0; };
  return {positive(t.response_total), positive(t.dv_total), positive(t.energy_total)};
}

FitnessWeights resolve_weights(const Evaluator& evaluator, FitnessWeights weights) {
  weights.validate();
  if (!weights.normalizers) {
    std::vector<int> tasks(evaluator.task_count()), nodes(evaluator.node_count());
    std::iota(tasks.begin(), tasks.end(), 0);
    std::iota(nodes.begin(), nodes.end(), 0);
    weights.normalizers = evaluator.random_normalizers(tasks, nodes);
  }
  return weights;
}

Objective::Objective(const Evaluator& evaluator, std::vector<int> tasks, std::vector<int> candidates,
                     FitnessWeights weights)
    : evaluator_(&evaluator), tasks_(std::move(tasks)), candidates_(std::move(candidates)), weights_(std::move(weights)) {
  if (candidates_.empty()) throw std::invalid_argument("empty candidate node set");
  for (int j : candidates_)
    if (j < 0 || j >= evaluator.node_count()) throw std::out_of_range("candidate node " + std::to_string(j));
  for (int i : tasks_)
    if (i < 0 || i >= evaluator.task_count()) throw std::out_of_range("unknown task id " + std::to_string(i));
  weights_.validate();
  if (!weights_.normalizers) weights_.normalizers = evaluator.random_normalizers(tasks_, candidates_);
  edf_positions_.resize(tasks_.size());
  std::iota(edf_positions_.begin(), edf_positions_.end(), 0);
  std::sort(edf_positions_.begin(), edf_positions_.end(),
            [&](int a, int b) { return evaluator.edf_rank(tasks_[a]) < evaluator.edf_rank(tasks_[b]); });
}

std::vector<int> Objective::node_ids(std::span<const int> genome) const {
  if (genome.size() != tasks_.size()) throw std::invalid_argument("genome length differs from task count");
  std::vector<int> nodes(genome.size());
  for (std::size_t k = 0; k < genome.size(); ++k) nodes[k] = candidates_.at(genome[k]);
  return nodes;
}

Totals Objective::totals(std::span<const int> genome) const {
  const auto nodes = node_ids(genome);
  return evaluator_->totals(tasks_, nodes, edf_positions_);
}

double Objective::operator()(std::span<const int> genome) const { return weighted_fitness(totals(genome), weights_); }

nlohmann::json report_to_json(const MetricsReport& report) {
  nlohmann::json tasks = nlohmann::json::array();
  for (std::size_t i = 0; i < report.per_task.size(); ++i) {
    const auto& b = report.per_task[i];
    tasks.push_back({{"task_id", b.task_id},
                     {"propagation", b.propagation},
                     {"transmission", b.transmission},
                     {"execution", b.execution},
                     {"queue_wait", b.queue_wait},
                     {"response", b.response},
                     {"deadline_violation", report.dv_per_task[i]}});
  }
  return {{"per_task", std::move(tasks)},
          {"dv_total", report.dv_total},
          {"energy_per_node", report.energy_per_node},
          {"energy_total", report.energy_total},
          {"response_total", report.response_total},
          {"response_max", report.response_max},
          {"horizon", report.horizon},
          {"fitness", report.fitness}};
}

std::string report_csv_header() { return "dv_total,energy_total,response_total,fitness"; }

std::string report_csv_row(const MetricsReport& report) {
  std::ostringstream out;
  out.precision(17);
  out << report.dv_total << ',' << report.energy_total << ',' << report.response_total << ',' << report.fitness;
  return out.str();
}

}  // namespace fogsched
