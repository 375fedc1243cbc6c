#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "fogsched/geo.hpp"

namespace fogsched {

using Genome = std::vector<int>;

struct IgeoParams {
  GeoParams geo;
  double mutation_rate = 0.1;  // fraction of genes changed per mutation, at least one

  void validate() const;
};

enum class StepSign { negative, positive };

// The four update rules: mutation of x_best (the chosen prey's memory) or of
// the current genome (negative step), one- or two-point crossover of x_best
// with the current genome (positive step).
enum class IgeoBranch { mutate_best = 0, mutate_current = 1, single_point = 2, two_point = 3 };

const char* branch_name(IgeoBranch branch);

struct OperatorDraw {
  double r1pa = 0.0;
  double r2pc = 0.0;
  StepSign step_sign = StepSign::positive;
  double r = 0.0;
};

struct DiscreteEagle {
  Genome genome;
  double fitness = 0.0;
  Genome memory;
  double memory_fitness = 0.0;
  std::vector<double> shadow;  // continuous mirror, used only for the step sign
};

// Cruise dominance (r1pa < r2pc) gives a negative step, attack dominance a
// positive one; an exact tie falls back to the sign of the summed step.
StepSign resolve_step_sign(double r1pa, double r2pc, std::span<const double> delta);
IgeoBranch select_branch(const OperatorDraw& draw);

int mutation_count(std::size_t length, double rate);

Genome mutate(std::span<const int> genome, int n_candidates, double rate, Rng& rng);

// child = a[0..cut) ++ b[cut..), cut in [1, length-1].
Genome crossover_single_at(std::span<const int> a, std::span<const int> b, std::size_t cut);
Genome crossover_single(std::span<const int> a, std::span<const int> b, Rng& rng);

// child = a outside [c1, c2), b inside; 1 <= c1 < c2 <= length-1.
Genome crossover_two_at(std::span<const int> a, std::span<const int> b, std::size_t c1, std::size_t c2);
Genome crossover_two(std::span<const int> a, std::span<const int> b, Rng& rng);

// Candidate genome for one eagle. Genomes too short for the selected
// crossover degrade to the next simpler one (two-point -> one-point -> copy
// of x_best).
Genome igeo_step(const DiscreteEagle& eagle, std::span<const int> x_best, const OperatorDraw& draw, int n_candidates,
                 double mutation_rate, Rng& rng);

struct IgeoEvent {
  int iteration = 0;
  int eagle = 0;
  IgeoBranch branch = IgeoBranch::mutate_best;
  const Genome* candidate = nullptr;
  double candidate_fitness = 0.0;
  bool accepted = false;
};

using IgeoObserver = std::function<void(const IgeoEvent&)>;

SubSchedule igeo_optimize(const Objective& objective, const IgeoParams& params, const IgeoObserver& observer = {});
SubSchedule igeo_optimize(const Evaluator& evaluator, std::vector<int> tasks, std::vector<int> candidates,
                          const IgeoParams& params, const FitnessWeights& weights);

}  // namespace fogsched
