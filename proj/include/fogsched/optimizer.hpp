#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace fogsched {

struct TracePoint {
  int iteration = 0;
  double best_fitness = 0.0;
};

// Result of optimizing a task subset: nodes[k] executes tasks[k].
struct SubSchedule {
  std::vector<int> tasks;
  std::vector<int> nodes;
  double fitness = 0.0;
  std::vector<TracePoint> trace;  // best-so-far after each iteration
  int evaluations = 0;
};

// CSV with header algorithm,iteration,best_fitness.
void write_trace_csv(std::ostream& out, const std::string& algorithm, const std::vector<TracePoint>& trace);

}  // namespace fogsched
