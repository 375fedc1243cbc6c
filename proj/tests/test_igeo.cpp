#include <gtest/gtest.h>

#include <array>
#include <set>

#include "fogsched/igeo.hpp"
#include "support/exhaustive.hpp"
#include "support/fixtures.hpp"

using namespace fogsched;
using namespace fogsched::testing;

namespace {

int hamming(std::span<const int> a, std::span<const int> b) {
  int d = 0;
  for (std::size_t k = 0; k < a.size(); ++k) d += a[k] != b[k] ? 1 : 0;
  return d;
}

}  // namespace

TEST(Mutate, SingleCandidateIsIdentity) {
  Rng rng(1);
  const Genome g{0, 0, 0, 0};
  EXPECT_EQ(mutate(g, 1, 0.5, rng), g);
}

TEST(Mutate, OneGeneFlipsOnBinaryAlphabet) {
  // Enumerating seeds: every output is one of the three single flips, and
  // all three occur.
  std::set<Genome> seen;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const Genome out = mutate(Genome{0, 0, 0}, 2, 0.1, rng);
    EXPECT_EQ(hamming(out, Genome{0, 0, 0}), 1);
    seen.insert(out);
  }
  EXPECT_EQ(seen, (std::set<Genome>{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}));
}

TEST(Mutate, ChangesExactlyKGenes) {
  Rng rng(3);
  std::uniform_int_distribution<int> allele(0, 6);
  for (int trial = 0; trial < 500; ++trial) {
    Genome g(1 + trial % 57);
    for (int& x : g) x = allele(rng);
    const double rate = (trial % 10) / 10.0;
    const Genome out = mutate(g, 7, rate, rng);
    EXPECT_EQ(hamming(out, g), mutation_count(g.size(), rate));
  }
  EXPECT_EQ(mutation_count(20, 0.1), 2);
  EXPECT_EQ(mutation_count(21, 0.1), 3);
  EXPECT_EQ(mutation_count(5, 0.0), 1);
  EXPECT_EQ(mutation_count(5, 1.0), 5);
}

TEST(Crossover, SinglePointDefinition) {
  EXPECT_EQ(crossover_single_at(Genome{1, 1, 1, 1}, Genome{2, 2, 2, 2}, 2), (Genome{1, 1, 2, 2}));
  Rng rng(2);
  const Genome same{4, 0, 3, 3, 1};
  EXPECT_EQ(crossover_single(same, same, rng), same);
  EXPECT_THROW(crossover_single(Genome{1}, Genome{2}, rng), std::invalid_argument);
  EXPECT_THROW(crossover_single(Genome{1, 2}, Genome{2}, rng), std::invalid_argument);
  EXPECT_THROW(crossover_single_at(Genome{1, 1}, Genome{2, 2}, 2), std::out_of_range);
}

TEST(Crossover, TwoPointDefinition) {
  EXPECT_EQ(crossover_two_at(Genome{1, 1, 1, 1, 1}, Genome{2, 2, 2, 2, 2}, 1, 3), (Genome{1, 2, 2, 1, 1}));
  Rng rng(2);
  const Genome same{4, 0, 3, 3, 1};
  EXPECT_EQ(crossover_two(same, same, rng), same);
  EXPECT_THROW(crossover_two(Genome{1, 1}, Genome{2, 2}, rng), std::invalid_argument);
  EXPECT_THROW(crossover_two_at(Genome{1, 1, 1, 1}, Genome{2, 2, 2, 2}, 2, 2), std::out_of_range);
}

TEST(Crossover, PositionalInheritance) {
  Rng rng(8);
  std::uniform_int_distribution<int> allele(0, 4);
  std::set<std::pair<std::size_t, std::size_t>> cuts;
  for (int trial = 0; trial < 2000; ++trial) {
    Genome a(6), b(6);
    for (int& x : a) x = allele(rng);
    for (int& x : b) x = allele(rng);
    const Genome one = crossover_single(a, b, rng);
    const Genome two = crossover_two(a, b, rng);
    for (std::size_t k = 0; k < 6; ++k) {
      EXPECT_TRUE(one[k] == a[k] || one[k] == b[k]);
      EXPECT_TRUE(two[k] == a[k] || two[k] == b[k]);
    }
    // Recover the cut pair from distinct parents to check its range.
    const Genome ones(6, 0), twos(6, 1);
    const Genome marker = crossover_two(ones, twos, rng);
    const auto first = std::find(marker.begin(), marker.end(), 1) - marker.begin();
    const auto last = std::find(marker.begin() + first, marker.end(), 0) - marker.begin();
    cuts.insert({static_cast<std::size_t>(first), static_cast<std::size_t>(last)});
  }
  for (const auto& [c1, c2] : cuts) {
    EXPECT_GE(c1, 1u);
    EXPECT_LT(c1, c2);
    EXPECT_LE(c2, 5u);
  }
  EXPECT_EQ(cuts.size(), 10u);  // every pair 1 <= c1 < c2 <= 5
}

TEST(StepSign, MagnitudeRuleThenSumTieBreak) {
  const std::vector<double> pos{0.5, 0.1}, neg{-0.5, 0.1};
  EXPECT_EQ(resolve_step_sign(0.2, 0.4, pos), StepSign::negative);
  EXPECT_EQ(resolve_step_sign(0.6, 0.4, neg), StepSign::positive);
  EXPECT_EQ(resolve_step_sign(0.4, 0.4, neg), StepSign::negative);
  EXPECT_EQ(resolve_step_sign(0.4, 0.4, pos), StepSign::positive);
}

TEST(IgeoStep, BranchSelection) {
  EXPECT_EQ(select_branch({0, 0, StepSign::negative, 0.7}), IgeoBranch::mutate_best);
  EXPECT_EQ(select_branch({0, 0, StepSign::negative, 0.5}), IgeoBranch::mutate_best);
  EXPECT_EQ(select_branch({0, 0, StepSign::negative, 0.2}), IgeoBranch::mutate_current);
  EXPECT_EQ(select_branch({0, 0, StepSign::positive, 0.7}), IgeoBranch::single_point);
  EXPECT_EQ(select_branch({0, 0, StepSign::positive, 0.2}), IgeoBranch::two_point);
}

TEST(IgeoStep, NegativeHighRMutatesBest) {
  Rng rng(6);
  DiscreteEagle eagle;
  eagle.genome = Genome(20, 3);
  const Genome best(20, 1);
  const Genome out = igeo_step(eagle, best, {0.1, 0.9, StepSign::negative, 0.7}, 5, 0.1, rng);
  EXPECT_EQ(hamming(out, best), mutation_count(20, 0.1));
}

TEST(IgeoStep, PositiveHighRIsOneCutMix) {
  Rng rng(6);
  DiscreteEagle eagle;
  eagle.genome = Genome(10, 3);
  const Genome best(10, 1);
  const Genome out = igeo_step(eagle, best, {0.9, 0.1, StepSign::positive, 0.7}, 5, 0.1, rng);
  // Prefix from x_best, suffix from x_t, one switch.
  int switches = 0;
  for (std::size_t k = 1; k < out.size(); ++k) switches += out[k] != out[k - 1] ? 1 : 0;
  EXPECT_EQ(out.front(), 1);
  EXPECT_EQ(out.back(), 3);
  EXPECT_EQ(switches, 1);
}

TEST(IgeoStep, CurrentEqualsBestWithPositiveStep) {
  Rng rng(6);
  DiscreteEagle eagle;
  eagle.genome = {0, 2, 1, 1, 0};
  for (double r : {0.1, 0.9}) EXPECT_EQ(igeo_step(eagle, eagle.genome, {1, 0, StepSign::positive, r}, 3, 0.1, rng), eagle.genome);
}

TEST(IgeoStep, ShortGenomesDegrade) {
  Rng rng(6);
  DiscreteEagle eagle;
  eagle.genome = {2, 0};
  const Genome best{1, 1};
  const Genome two = igeo_step(eagle, best, {1, 0, StepSign::positive, 0.1}, 3, 0.1, rng);
  EXPECT_EQ(two, (Genome{1, 0}));
  eagle.genome = {2};
  EXPECT_EQ(igeo_step(eagle, Genome{1}, {1, 0, StepSign::positive, 0.1}, 3, 0.1, rng), Genome{1});
}

TEST(IgeoOptimize, SingleCandidate) {
  const Instance inst = small_instance(4);
  const Evaluator ev(inst);
  IgeoParams p;
  p.geo.population_size = 4;
  p.geo.iterations = 5;
  EXPECT_EQ(igeo_optimize(ev, iota(6), {1}, p, FitnessWeights{}).nodes, std::vector<int>(6, 1));
  EXPECT_THROW(igeo_optimize(ev, iota(6), {}, p, FitnessWeights{}), std::invalid_argument);
}

TEST(IgeoOptimize, ClosureElitismAndBranchCoverage) {
  const Instance inst = small_instance(19, 40, 7);
  const Evaluator ev(inst);
  const Objective obj(ev, iota(40), iota(7), FitnessWeights{});
  IgeoParams p;
  p.geo.population_size = 25;
  p.geo.iterations = 400;  // 10,000 steps
  p.geo.seed = 13;
  std::array<int, 4> branches{};
  double best = std::numeric_limits<double>::infinity();
  int steps = 0;
  const auto r = igeo_optimize(obj, p, [&](const IgeoEvent& e) {
    ++steps;
    ++branches[static_cast<int>(e.branch)];
    ASSERT_EQ(e.candidate->size(), 40u);
    for (int g : *e.candidate) {
      ASSERT_GE(g, 0);
      ASSERT_LT(g, 7);
    }
    best = std::min(best, e.candidate_fitness);
  });
  EXPECT_EQ(steps, 10000);
  for (int count : branches) EXPECT_GT(count, 0);
  for (std::size_t k = 1; k < r.trace.size(); ++k) EXPECT_LE(r.trace[k].best_fitness, r.trace[k - 1].best_fitness);
  EXPECT_LE(r.fitness, best);
  EXPECT_EQ(r.evaluations, 25 + 10000);
}

TEST(IgeoOptimize, DeterministicPerSeed) {
  const Instance inst = small_instance(5, 30, 5);
  const Evaluator ev(inst);
  IgeoParams p;
  p.geo.iterations = 30;
  p.geo.seed = 2;
  const auto a = igeo_optimize(ev, iota(30), iota(5), p, FitnessWeights{});
  const auto b = igeo_optimize(ev, iota(30), iota(5), p, FitnessWeights{});
  EXPECT_EQ(a.nodes, b.nodes);
  EXPECT_EQ(a.fitness, b.fitness);
}

namespace {

struct SmallRunStats {
  int exact = 0;
  int close = 0;
};

SmallRunStats small_instance_runs() {
  const Instance inst = small_instance(202);
  const Evaluator ev(inst);
  const Objective obj(ev, iota(6), iota(3), FitnessWeights{});
  const double optimum = exhaustive_optimum(obj);
  SmallRunStats stats;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    IgeoParams p;
    p.geo.population_size = 20;
    p.geo.iterations = 200;
    p.geo.seed = seed;
    const double f = igeo_optimize(obj, p).fitness;
    stats.exact += f == optimum ? 1 : 0;
    stats.close += within(f, optimum, 0.05) ? 1 : 0;
  }
  return stats;
}

}  // namespace

TEST(IgeoOptimize, SmallInstanceWithinFivePercent) {
  EXPECT_GE(small_instance_runs().close, 49);  // >= 98% of 50
}

TEST(IgeoOptimize, SmallInstanceExactOptimum) {
  EXPECT_GE(small_instance_runs().exact, 40);  // >= 80% of 50
}

TEST(IgeoOptimize, NotWorseThanGeoOnPaperScale) {
  double igeo_sum = 0.0, geo_sum = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Instance inst = small_instance(seed, 200, 20);
    const Evaluator ev(inst);
    const Objective obj(ev, iota(200), iota(20), FitnessWeights{});
    IgeoParams p;
    p.geo.population_size = 30;
    p.geo.iterations = 100;
    p.geo.seed = seed;
    igeo_sum += igeo_optimize(obj, p).fitness;
    geo_sum += geo_optimize(obj, p.geo).fitness;
  }
  EXPECT_LE(igeo_sum / 20, geo_sum / 20);
}
