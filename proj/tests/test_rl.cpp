#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "fogsched/rl.hpp"
#include "support/exhaustive.hpp"
#include "support/fixtures.hpp"

using namespace fogsched;
using namespace fogsched::testing;

namespace {

void expect_distribution(const std::vector<double>& p, double floor) {
  EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-9);
  for (double v : p) EXPECT_GE(v, floor - 1e-12);
}

}  // namespace

TEST(RlConfig, Validation) {
  RlConfig c;
  c.episodes = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.learning_rate = 1.5;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.penalty_value = 0.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.exploration_rate = -0.1;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(RlInit, UniformPreferencesAndDeterministicSample) {
  const Instance inst = small_instance(1);
  const Evaluator ev(inst);
  const Objective obj(ev, iota(6), iota(3), FitnessWeights{});
  Rng a(4), b(4);
  const PolicyState s = rl_init(obj, RlConfig{}, a);
  for (const auto& p : s.preference)
    for (double v : p) EXPECT_EQ(v, 1.0 / 3.0);
  EXPECT_EQ(s.assignment, rl_init(obj, RlConfig{}, b).assignment);
  EXPECT_EQ(s.fitness, obj(s.assignment));
  EXPECT_EQ(s.best_fitness, s.fitness);
}

TEST(RlInit, NoTasks) {
  const Instance inst = small_instance(1);
  const Evaluator ev(inst);
  const Objective obj(ev, {}, iota(3), FitnessWeights{});
  Rng rng(0);
  const PolicyState s = rl_init(obj, RlConfig{}, rng);
  EXPECT_TRUE(s.assignment.empty());
  EXPECT_EQ(s.fitness, 0.0);
}

TEST(RlUpdate, RewardRaisesChosenPreference) {
  std::vector<double> p{0.2, 0.5, 0.3};
  reinforce(p, 0, 0.05, 0.01);
  EXPECT_GT(p[0], 0.2);
  EXPECT_LT(p[1], 0.5);
  expect_distribution(p, 0.01);
}

TEST(RlUpdate, PenaltyNeverRaisesChosenPreference) {
  std::vector<double> p{0.2, 0.5, 0.3};
  penalize(p, 1, 0.005, 0.01);
  EXPECT_LE(p[1], 0.5);
  expect_distribution(p, 0.01);
  std::vector<double> floored{0.01, 0.98, 0.01};
  penalize(floored, 0, 0.005, 0.01);
  EXPECT_LE(floored[0], 0.01 + 1e-15);
  expect_distribution(floored, 0.01);
}

TEST(RlUpdate, FloorWaterFilling) {
  std::vector<double> p{0.0, 0.4, 0.6};
  apply_floor(p, 0.1);
  EXPECT_DOUBLE_EQ(p[0], 0.1);
  // Deficit 0.1 taken proportionally from the mass above the floor (0.3, 0.5).
  EXPECT_DOUBLE_EQ(p[1], 0.1 + 0.3 * (1.0 - 0.1 / 0.8));
  EXPECT_DOUBLE_EQ(p[2], 0.1 + 0.5 * (1.0 - 0.1 / 0.8));
  expect_distribution(p, 0.1);
}

TEST(RlEpisode, DistributionsStayValid) {
  const Instance inst = small_instance(7, 30, 5);
  const Evaluator ev(inst);
  const Objective obj(ev, iota(30), iota(5), FitnessWeights{});
  RlConfig c;
  Rng rng(21);
  PolicyState s = rl_init(obj, c, rng);
  double best = s.best_fitness;
  for (int e = 0; e < 300; ++e) {
    const PolicyState before = s;
    s = rl_episode(std::move(s), obj, c, rng);
    for (const auto& p : s.preference) expect_distribution(p, s.probability_floor);
    EXPECT_LE(s.best_fitness, best);
    best = s.best_fitness;
    if (s.last_rewarded) {
      EXPECT_EQ(s.fitness, s.last_sampled_fitness);
      for (int k = 0; k < 30; ++k) EXPECT_GE(s.preference[k][s.assignment[k]], before.preference[k][s.assignment[k]] - 1e-12);
    } else {
      EXPECT_EQ(s.fitness, before.fitness);
    }
  }
  EXPECT_NEAR(s.exploration_rate, 0.3 * std::pow(0.995, 300), 1e-12);
}

TEST(RlEpisode, PureRandomSearchMode) {
  const Instance inst = small_instance(7, 20, 4);
  const Evaluator ev(inst);
  const Objective obj(ev, iota(20), iota(4), FitnessWeights{});
  RlConfig c;
  c.learning_rate = 0.0;
  c.exploration_rate = 1.0;
  c.exploration_decay = 1.0;
  Rng rng(3);
  PolicyState s = rl_init(obj, c, rng);
  const double start = s.best_fitness;
  for (int e = 0; e < 200; ++e) s = rl_episode(std::move(s), obj, c, rng);
  EXPECT_LE(s.best_fitness, start);
  for (const auto& p : s.preference)
    for (double v : p) EXPECT_DOUBLE_EQ(v, 0.25);
}

TEST(RlOptimize, SingleCandidate) {
  const Instance inst = small_instance(2);
  const Evaluator ev(inst);
  RlConfig c;
  c.episodes = 7;
  EXPECT_EQ(rl_optimize(ev, iota(6), {0}, c, FitnessWeights{}).nodes, std::vector<int>(6, 0));
  EXPECT_THROW(rl_optimize(ev, iota(6), {}, c, FitnessWeights{}), std::invalid_argument);
}

TEST(RlOptimize, OneEpisodeKeepsTheBetterOfTwo) {
  const Instance inst = small_instance(2, 12, 4);
  const Evaluator ev(inst);
  const Objective obj(ev, iota(12), iota(4), FitnessWeights{});
  RlConfig c;
  c.episodes = 1;
  c.seed = 31;
  Rng rng(31);
  const double initial = rl_init(obj, c, rng).fitness;
  std::vector<RlTracePoint> detail;
  const auto r = rl_optimize(obj, c, &detail);
  ASSERT_EQ(detail.size(), 1u);
  EXPECT_EQ(r.fitness, std::min(initial, detail[0].sampled_fitness));
  EXPECT_EQ(r.evaluations, 2);
}

TEST(RlOptimize, TwoByTwoFindsTheOptimum) {
  Instance inst;
  inst.topology.nodes = {node(0, 4000.0), node(1, 200.0)};
  inst.topology.links = {link(0, 1, 100.0, 1.0)};
  inst.topology.device_gateways = {0};
  inst.tasks = {task(0, 300.0, 400.0), task(1, 200.0, 300.0)};
  const Evaluator ev(inst);
  const Objective obj(ev, iota(2), iota(2), FitnessWeights{});
  const double optimum = exhaustive_optimum(obj);
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    RlConfig c;
    c.episodes = 500;
    c.seed = seed;
    hits += rl_optimize(obj, c).fitness == optimum ? 1 : 0;
  }
  EXPECT_GE(hits, 48);
}

TEST(RlOptimize, SmallInstanceWithinFivePercent) {
  const Instance inst = small_instance(303);
  const Evaluator ev(inst);
  const Objective obj(ev, iota(6), iota(3), FitnessWeights{});
  const double optimum = exhaustive_optimum(obj);
  int close = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    RlConfig c;
    c.seed = seed;
    close += within(rl_optimize(obj, c).fitness, optimum, 0.05) ? 1 : 0;
  }
  EXPECT_GE(close, 45);  // >= 90%
}

TEST(RlOptimize, TraceNonIncreasingAndDeterministic) {
  const Instance inst = small_instance(9, 40, 6);
  const Evaluator ev(inst);
  const Objective obj(ev, iota(40), iota(6), FitnessWeights{});
  RlConfig c;
  c.episodes = 400;
  c.seed = 8;
  std::vector<RlTracePoint> detail;
  const auto a = rl_optimize(obj, c, &detail);
  const auto b = rl_optimize(obj, c);
  EXPECT_EQ(a.nodes, b.nodes);
  for (std::size_t k = 1; k < a.trace.size(); ++k) EXPECT_LE(a.trace[k].best_fitness, a.trace[k - 1].best_fitness);
  std::ostringstream out;
  write_rl_trace_csv(out, detail);
  const std::string csv = out.str();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "episode,sampled_fitness,best_fitness,exploration_rate");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 401);
}
