#pragma once

#include <vector>

#include "fogsched/model.hpp"

namespace fogsched::testing {

inline FogNode node(int id, double mips, double active = 100.0, double idle = 10.0, double alpha = 1.0,
                    double beta = 1.0) {
  return {id, mips, active, idle, alpha, beta};
}

inline Link link(int a, int b, double bandwidth, double delay, double traffic = 0.0) {
  return {{a, b}, bandwidth, delay, traffic, false};
}

inline Link uplink(int device, int gateway, double bandwidth, double delay) {
  return {{device, gateway}, bandwidth, delay, 0.0, true};
}

inline Task task(int id, double length, double deadline, int device = 0, double data = 0.0) {
  return {id, length, data, deadline, 0.0, device};
}

// Line 0 - 1 - 2 with devices on both ends; shortest paths are unique.
// Values are arbitrary non-round numbers so that exact comparisons exercise
// real floating-point arithmetic.
inline Instance six_by_three() {
  Instance inst;
  inst.topology.nodes = {node(0, 2300.0, 120.0, 17.0, 1.0, 1.0), node(1, 4100.0, 95.5, 22.25, 1.0, 0.8),
                         node(2, 3300.0, 181.0, 9.5, 1.3, 1.0)};
  inst.topology.device_gateways = {0, 2};
  inst.topology.links = {link(0, 1, 37.0, 2.3, 0.7), link(1, 2, 61.0, 1.7, 0.2), uplink(0, 0, 45.0, 0.9),
                         uplink(1, 2, 29.0, 1.4)};
  inst.tasks = {task(0, 420.0, 260.0, 0, 310.0), task(1, 910.0, 140.0, 1, 120.0), task(2, 230.0, 260.0, 0, 75.0),
                task(3, 655.0, 480.0, 1, 640.0), task(4, 377.0, 95.0, 0, 205.0), task(5, 812.0, 330.0, 1, 52.0)};
  return inst;
}

// One node, one device attached by an uplink.
inline Instance single_node(double mips, double uplink_delay, double uplink_bandwidth) {
  Instance inst;
  inst.topology.nodes = {node(0, mips)};
  inst.topology.device_gateways = {0};
  inst.topology.links = {uplink(0, 0, uplink_bandwidth, uplink_delay)};
  return inst;
}

// Identical nodes in a line with zero-latency, effectively unlimited links.
inline Instance identical_nodes(int m, int n, double mips = 1000.0) {
  Instance inst;
  for (int j = 0; j < m; ++j) inst.topology.nodes.push_back(node(j, mips));
  for (int j = 0; j + 1 < m; ++j) inst.topology.links.push_back(link(j, j + 1, 1e12, 0.0));
  inst.topology.device_gateways = {0};
  for (int i = 0; i < n; ++i) inst.tasks.push_back(task(i, 500.0, 1000.0 + i, 0, 0.0));
  return inst;
}

// Instance with m nodes whose link traffic is chosen per node pair; nodes
// form a star around node 0 plus a ring so every node has links.
inline std::vector<int> iota(int n) {
  std::vector<int> v(n);
  for (int k = 0; k < n; ++k) v[k] = k;
  return v;
}

}  // namespace fogsched::testing
