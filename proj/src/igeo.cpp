#include "fogsched/igeo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fogsched {

void IgeoParams::validate() const {
  geo.validate();
  if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) throw std::invalid_argument("mutation_rate must be in [0, 1]");
}

const char* branch_name(IgeoBranch branch) {
  switch (branch) {
    case IgeoBranch::mutate_best: return "mutate_best";
    case IgeoBranch::mutate_current: return "mutate_current";
    case IgeoBranch::single_point: return "single_point";
    case IgeoBranch::two_point: return "two_point";
  }
  return "?";
}

StepSign resolve_step_sign(double r1pa, double r2pc, std::span<const double> delta) {
  if (std::abs(r1pa) < std::abs(r2pc)) return StepSign::negative;
  if (std::abs(r1pa) > std::abs(r2pc)) return StepSign::positive;
  const double sum = std::accumulate(delta.begin(), delta.end(), 0.0);
  return sum < 0.0 ? StepSign::negative : StepSign::positive;
}

IgeoBranch select_branch(const OperatorDraw& draw) {
  if (draw.step_sign == StepSign::negative)
    return draw.r >= 0.5 ? IgeoBranch::mutate_best : IgeoBranch::mutate_current;
  return draw.r >= 0.5 ? IgeoBranch::single_point : IgeoBranch::two_point;
}

int mutation_count(std::size_t length, double rate) {
  if (length == 0) return 0;
  const auto k = static_cast<std::size_t>(std::ceil(rate * static_cast<double>(length)));
  return static_cast<int>(std::clamp<std::size_t>(k, 1, length));
}

Genome mutate(std::span<const int> genome, int n_candidates, double rate, Rng& rng) {
  Genome child(genome.begin(), genome.end());
  if (n_candidates < 2 || child.empty()) return child;
  const int k = mutation_count(child.size(), rate);
  std::vector<std::size_t> positions(child.size());
  std::iota(positions.begin(), positions.end(), 0);
  // Partial Fisher-Yates: the first k entries are a uniform sample.
  for (int s = 0; s < k; ++s) {
    std::uniform_int_distribution<std::size_t> pick(s, positions.size() - 1);
    std::swap(positions[s], positions[pick(rng)]);
  }
  std::uniform_int_distribution<int> other(0, n_candidates - 2);
  for (int s = 0; s < k; ++s) {
    int& gene = child[positions[s]];
    const int v = other(rng);
    gene = v >= gene ? v + 1 : v;  // uniform over the n_candidates - 1 other alleles
  }
  return child;
}

Genome crossover_single_at(std::span<const int> a, std::span<const int> b, std::size_t cut) {
  if (a.size() != b.size()) throw std::invalid_argument("crossover: parent length mismatch");
  if (a.size() < 2) throw std::invalid_argument("one-point crossover needs length >= 2");
  if (cut < 1 || cut > a.size() - 1) throw std::out_of_range("one-point crossover cut out of range");
  Genome child(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(cut));
  child.insert(child.end(), b.begin() + static_cast<std::ptrdiff_t>(cut), b.end());
  return child;
}

Genome crossover_single(std::span<const int> a, std::span<const int> b, Rng& rng) {
  if (a.size() != b.size()) throw std::invalid_argument("crossover: parent length mismatch");
  if (a.size() < 2) throw std::invalid_argument("one-point crossover needs length >= 2");
  const std::size_t cut = std::uniform_int_distribution<std::size_t>(1, a.size() - 1)(rng);
  return crossover_single_at(a, b, cut);
}

Genome crossover_two_at(std::span<const int> a, std::span<const int> b, std::size_t c1, std::size_t c2) {
  if (a.size() != b.size()) throw std::invalid_argument("crossover: parent length mismatch");
  if (a.size() < 3) throw std::invalid_argument("two-point crossover needs length >= 3");
  if (c1 < 1 || c1 >= c2 || c2 > a.size() - 1) throw std::out_of_range("two-point crossover cuts out of range");
  Genome child(a.begin(), a.end());
  std::copy(b.begin() + static_cast<std::ptrdiff_t>(c1), b.begin() + static_cast<std::ptrdiff_t>(c2),
            child.begin() + static_cast<std::ptrdiff_t>(c1));
  return child;
}

Genome crossover_two(std::span<const int> a, std::span<const int> b, Rng& rng) {
  if (a.size() != b.size()) throw std::invalid_argument("crossover: parent length mismatch");
  if (a.size() < 3) throw std::invalid_argument("two-point crossover needs length >= 3");
  // Two distinct cut points from [1, length-1].
  std::uniform_int_distribution<std::size_t> first(1, a.size() - 1);
  std::uniform_int_distribution<std::size_t> second(1, a.size() - 2);
  std::size_t c1 = first(rng);
  std::size_t c2 = second(rng);
  if (c2 >= c1) ++c2;
  if (c1 > c2) std::swap(c1, c2);
  return crossover_two_at(a, b, c1, c2);
}

Genome igeo_step(const DiscreteEagle& eagle, std::span<const int> x_best, const OperatorDraw& draw, int n_candidates,
                 double mutation_rate, Rng& rng) {
  switch (select_branch(draw)) {
    case IgeoBranch::mutate_best: return mutate(x_best, n_candidates, mutation_rate, rng);
    case IgeoBranch::mutate_current: return mutate(eagle.genome, n_candidates, mutation_rate, rng);
    case IgeoBranch::two_point:
      if (x_best.size() >= 3) return crossover_two(x_best, eagle.genome, rng);
      [[fallthrough]];
    case IgeoBranch::single_point:
      if (x_best.size() >= 2) return crossover_single(x_best, eagle.genome, rng);
      return Genome(x_best.begin(), x_best.end());
  }
  return Genome(x_best.begin(), x_best.end());
}

SubSchedule igeo_optimize(const Objective& objective, const IgeoParams& params, const IgeoObserver& observer) {
  params.validate();
  const GeoParams& geo = params.geo;
  Rng rng(geo.seed);
  const int n = objective.dimension();
  const int m = objective.candidate_count();
  const double upper = m - 1;
  std::uniform_int_distribution<int> allele(0, m - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  SubSchedule result;
  result.tasks = objective.tasks();

  std::vector<DiscreteEagle> eagles(geo.population_size);
  Genome best;
  double best_fitness = 0.0;
  for (auto& eagle : eagles) {
    eagle.genome.resize(n);
    for (int& g : eagle.genome) g = allele(rng);
    eagle.fitness = objective(eagle.genome);
    ++result.evaluations;
    eagle.memory = eagle.genome;
    eagle.memory_fitness = eagle.fitness;
    eagle.shadow.assign(eagle.genome.begin(), eagle.genome.end());
    if (&eagle == &eagles.front() || eagle.fitness < best_fitness) {
      best = eagle.genome;
      best_fitness = eagle.fitness;
    }
  }

  std::vector<int> prey(geo.population_size);
  std::vector<double> prey_position(n);
  for (int t = 0; t < geo.iterations; ++t) {
    const double pa = geo.attack_coefficient(t);
    const double pc = geo.cruise_coefficient(t);
    std::iota(prey.begin(), prey.end(), 0);
    std::shuffle(prey.begin(), prey.end(), rng);

    for (int e = 0; e < geo.population_size; ++e) {
      DiscreteEagle& eagle = eagles[e];
      const Genome& target = eagles[prey[e]].memory;
      std::copy(target.begin(), target.end(), prey_position.begin());
      const auto attack = attack_vector(eagle.shadow, prey_position);

      OperatorDraw draw;
      std::vector<double> delta(n, 0.0);
      const double na = norm(attack);
      if (na > 0.0) {
        const auto cruise = cruise_vector(attack, rng);
        if (norm(cruise) > 0.0) {
          StepVector step = step_vector(attack, cruise, pa, pc, rng);
          draw.r1pa = step.r1pa;
          draw.r2pc = step.r2pc;
          delta = std::move(step.delta);
        } else {
          draw.r1pa = unit(rng) * pa;
          draw.r2pc = unit(rng) * pc;
          for (int k = 0; k < n; ++k) delta[k] = draw.r1pa * attack[k] / na;
        }
        for (int k = 0; k < n; ++k) eagle.shadow[k] = std::clamp(eagle.shadow[k] + delta[k], 0.0, upper);
      } else {
        draw.r1pa = unit(rng) * pa;
        draw.r2pc = unit(rng) * pc;
      }
      draw.step_sign = resolve_step_sign(draw.r1pa, draw.r2pc, delta);
      draw.r = unit(rng);

      // Operators combine with the prey's memory; the swarm best is only tracked.
      Genome candidate = igeo_step(eagle, target, draw, m, params.mutation_rate, rng);
      const double f = objective(candidate);
      ++result.evaluations;
      const bool accepted = f <= eagle.fitness;
      if (observer) observer({t, e, select_branch(draw), &candidate, f, accepted});
      if (f < eagle.memory_fitness) {
        eagle.memory = candidate;
        eagle.memory_fitness = f;
      }
      if (f < best_fitness) {
        best = candidate;
        best_fitness = f;
      }
      if (accepted) {
        eagle.genome = std::move(candidate);
        eagle.fitness = f;
      }
    }
    result.trace.push_back({t, best_fitness});
  }

  result.nodes = objective.node_ids(best);
  result.fitness = best_fitness;
  return result;
}

SubSchedule igeo_optimize(const Evaluator& evaluator, std::vector<int> tasks, std::vector<int> candidates,
                          const IgeoParams& params, const FitnessWeights& weights) {
  const Objective objective(evaluator, std::move(tasks), std::move(candidates), weights);
  return igeo_optimize(objective, params);
}

}  // namespace fogsched
