#include "fogsched/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fogsched {

void GeoParams::validate() const {
  if (population_size < 2) throw std::invalid_argument("population_size must be >= 2");
  if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
  if (!(pa_start >= 0.0 && pa_end >= 0.0 && pc_start >= 0.0 && pc_end >= 0.0))
    throw std::invalid_argument("attack/cruise coefficients must be >= 0");
}

namespace {

double lerp_schedule(double from, double to, int iteration, int iterations) {
  if (iterations <= 1) return from;
  return from + (to - from) * static_cast<double>(iteration) / static_cast<double>(iterations - 1);
}

}  // namespace

double GeoParams::attack_coefficient(int iteration) const {
  return lerp_schedule(pa_start, pa_end, iteration, iterations);
}

double GeoParams::cruise_coefficient(int iteration) const {
  return lerp_schedule(pc_start, pc_end, iteration, iterations);
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("vector length mismatch");
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

double norm(std::span<const double> v) { return std::sqrt(dot(v, v)); }

std::vector<double> attack_vector(std::span<const double> eagle, std::span<const double> prey) {
  if (eagle.size() != prey.size()) throw std::invalid_argument("attack_vector: length mismatch");
  std::vector<double> a(eagle.size());
  for (std::size_t k = 0; k < a.size(); ++k) a[k] = prey[k] - eagle[k];
  return a;
}

std::vector<double> cruise_vector(std::span<const double> attack, Rng& rng) {
  const std::size_t n = attack.size();
  if (std::all_of(attack.begin(), attack.end(), [](double v) { return v == 0.0; }))
    throw std::invalid_argument("cruise_vector: zero attack vector");
  std::vector<double> c(n, 0.0);
  if (n == 1) return c;
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::size_t fixed = pick(rng);
  while (attack[fixed] == 0.0) fixed = pick(rng);
  std::uniform_real_distribution<double> free(-1.0, 1.0);
  double partial = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (k == fixed) continue;
    c[k] = free(rng);
    partial += attack[k] * c[k];
  }
  c[fixed] = -partial / attack[fixed];
  return c;
}

StepVector step_vector(std::span<const double> attack, std::span<const double> cruise, double pa, double pc, double r1,
                       double r2) {
  if (attack.size() != cruise.size()) throw std::invalid_argument("step_vector: length mismatch");
  const double na = norm(attack);
  const double nc = norm(cruise);
  if (!(na > 0.0) || !(nc > 0.0)) throw std::invalid_argument("step_vector: zero-norm input");
  StepVector s;
  s.r1pa = r1 * pa;
  s.r2pc = r2 * pc;
  s.delta.resize(attack.size());
  for (std::size_t k = 0; k < attack.size(); ++k) s.delta[k] = s.r1pa * attack[k] / na + s.r2pc * cruise[k] / nc;
  return s;
}

StepVector step_vector(std::span<const double> attack, std::span<const double> cruise, double pa, double pc, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double r1 = unit(rng);
  const double r2 = unit(rng);
  return step_vector(attack, cruise, pa, pc, r1, r2);
}

int decode_coordinate(double x, int upper) {
  const double clamped = std::clamp(x, 0.0, static_cast<double>(upper));
  return std::min(upper, static_cast<int>(std::floor(clamped + 0.5)));
}

std::vector<int> decode_position(std::span<const double> position, int upper) {
  std::vector<int> genome(position.size());
  for (std::size_t k = 0; k < position.size(); ++k) genome[k] = decode_coordinate(position[k], upper);
  return genome;
}

SubSchedule geo_optimize(const Objective& objective, const GeoParams& params, const SwarmObserver& observer) {
  params.validate();
  Rng rng(params.seed);
  const int n = objective.dimension();
  const int upper = objective.candidate_count() - 1;
  std::uniform_real_distribution<double> coord(0.0, static_cast<double>(upper));
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  SubSchedule result;
  result.tasks = objective.tasks();

  SwarmState swarm;
  swarm.eagles.resize(params.population_size);
  for (auto& eagle : swarm.eagles) {
    eagle.position.resize(n);
    for (double& x : eagle.position) x = upper > 0 ? coord(rng) : 0.0;
    Location& mem = eagle.memory_best;
    mem.position = eagle.position;
    mem.genome = decode_position(eagle.position, upper);
    mem.fitness = objective(mem.genome);
    ++result.evaluations;
    if (&eagle == &swarm.eagles.front() || mem.fitness < swarm.global_best.fitness) swarm.global_best = mem;
  }

  std::vector<int> prey(params.population_size);
  for (int t = 0; t < params.iterations; ++t) {
    swarm.iteration = t;
    const double pa = params.attack_coefficient(t);
    const double pc = params.cruise_coefficient(t);
    std::iota(prey.begin(), prey.end(), 0);
    std::shuffle(prey.begin(), prey.end(), rng);

    for (int e = 0; e < params.population_size; ++e) {
      EagleState& eagle = swarm.eagles[e];
      const auto attack = attack_vector(eagle.position, swarm.eagles[prey[e]].memory_best.position);
      if (!(norm(attack) > 0.0)) continue;  // already at the prey
      const auto cruise = cruise_vector(attack, rng);
      std::vector<double> delta;
      if (norm(cruise) > 0.0) {
        delta = step_vector(attack, cruise, pa, pc, rng).delta;
      } else {
        const double na = norm(attack);
        const double r1 = unit(rng);
        unit(rng);
        delta.resize(n);
        for (int k = 0; k < n; ++k) delta[k] = r1 * pa * attack[k] / na;
      }
      for (int k = 0; k < n; ++k) eagle.position[k] = std::clamp(eagle.position[k] + delta[k], 0.0, double(upper));

      auto genome = decode_position(eagle.position, upper);
      const double f = objective(genome);
      ++result.evaluations;
      if (f < eagle.memory_best.fitness) eagle.memory_best = {eagle.position, std::move(genome), f};
      if (eagle.memory_best.fitness < swarm.global_best.fitness) swarm.global_best = eagle.memory_best;
    }
    result.trace.push_back({t, swarm.global_best.fitness});
    if (observer) observer(swarm);
  }

  result.nodes = objective.node_ids(swarm.global_best.genome);
  result.fitness = swarm.global_best.fitness;
  return result;
}

SubSchedule geo_optimize(const Evaluator& evaluator, std::vector<int> tasks, std::vector<int> candidates,
                         const GeoParams& params, const FitnessWeights& weights) {
  const Objective objective(evaluator, std::move(tasks), std::move(candidates), weights);
  return geo_optimize(objective, params);
}

}  // namespace fogsched
