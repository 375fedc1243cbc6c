#pragma once

#include <cstdint>
#include <vector>

#include "fogsched/metrics.hpp"
#include "fogsched/optimizer.hpp"

namespace fogsched {

// Learning-automaton assigner: one action-probability vector per task over
// the candidate nodes, trained by reward/penalty feedback from fitness.
struct RlConfig {
  int episodes = 2000;
  double learning_rate = 0.05;
  double exploration_rate = 0.3;
  double exploration_decay = 0.995;  // multiplied into exploration_rate each episode
  double reward_value = 1.0;
  double penalty_value = 0.1;
  double probability_floor = 0.01;
  std::uint64_t seed = 0;

  void validate() const;
};

struct PolicyState {
  std::vector<int> assignment;  // candidate index per task, the last accepted sample
  double fitness = 0.0;         // fitness of `assignment`
  std::vector<std::vector<double>> preference;
  std::vector<int> best_seen;
  double best_fitness = 0.0;
  double exploration_rate = 0.0;
  double probability_floor = 0.0;  // effective floor, at most 1/(2m)
  int episode = 0;
  double last_sampled_fitness = 0.0;
  bool last_rewarded = false;
};

struct RlTracePoint {
  int episode = 0;
  double sampled_fitness = 0.0;
  double best_fitness = 0.0;
  double exploration_rate = 0.0;
};

PolicyState rl_init(const Objective& objective, const RlConfig& config, Rng& rng);
PolicyState rl_episode(PolicyState state, const Objective& objective, const RlConfig& config, Rng& rng);

// Linear reward-inaction step toward `chosen`, then floor projection.
void reinforce(std::vector<double>& preference, int chosen, double rate, double floor);
// Linear penalty step away from `chosen`, then floor projection.
void penalize(std::vector<double>& preference, int chosen, double rate, double floor);
// Lifts entries below `floor` to it, taking the deficit proportionally from
// the mass above the floor; keeps the sum at 1.
void apply_floor(std::vector<double>& preference, double floor);

SubSchedule rl_optimize(const Objective& objective, const RlConfig& config, std::vector<RlTracePoint>* detail = nullptr);
SubSchedule rl_optimize(const Evaluator& evaluator, std::vector<int> tasks, std::vector<int> candidates,
                        const RlConfig& config, const FitnessWeights& weights);

void write_rl_trace_csv(std::ostream& out, const std::vector<RlTracePoint>& trace);

}  // namespace fogsched
