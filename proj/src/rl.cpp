#include "fogsched/rl.hpp"

#include <algorithm>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace fogsched {

void RlConfig::validate() const {
  if (episodes < 1) throw std::invalid_argument("episodes must be >= 1");
  if (!(learning_rate >= 0.0 && learning_rate <= 1.0)) throw std::invalid_argument("learning_rate must be in [0, 1]");
  if (!(exploration_rate >= 0.0 && exploration_rate <= 1.0))
    throw std::invalid_argument("exploration_rate must be in [0, 1]");
  if (!(exploration_decay >= 0.0 && exploration_decay <= 1.0))
    throw std::invalid_argument("exploration_decay must be in [0, 1]");
  if (!(reward_value > 0.0) || !(penalty_value > 0.0)) throw std::invalid_argument("reward and penalty must be > 0");
  if (!(probability_floor >= 0.0 && probability_floor < 1.0))
    throw std::invalid_argument("probability_floor must be in [0, 1)");
}

void apply_floor(std::vector<double>& p, double floor) {
  double deficit = 0.0, excess = 0.0;
  for (double v : p) {
    if (v < floor) deficit += floor - v;
    else excess += v - floor;
  }
  if (deficit > 0.0 && excess > 0.0) {
    const double keep = 1.0 - deficit / excess;
    for (double& v : p) v = v < floor ? floor : floor + (v - floor) * keep;
  }
  const double sum = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& v : p) v /= sum;
}

void reinforce(std::vector<double>& p, int chosen, double rate, double floor) {
  for (std::size_t k = 0; k < p.size(); ++k)
    p[k] = static_cast<int>(k) == chosen ? p[k] + rate * (1.0 - p[k]) : p[k] * (1.0 - rate);
  apply_floor(p, floor);
}

void penalize(std::vector<double>& p, int chosen, double rate, double floor) {
  if (p.size() < 2) return;
  const double share = rate / static_cast<double>(p.size() - 1);
  for (std::size_t k = 0; k < p.size(); ++k)
    p[k] = static_cast<int>(k) == chosen ? p[k] * (1.0 - rate) : share + p[k] * (1.0 - rate);
  apply_floor(p, floor);
}

namespace {

int sample_from(const std::vector<double>& p, Rng& rng) {
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < p.size(); ++k) {
    acc += p[k];
    if (u < acc) return static_cast<int>(k);
  }
  return static_cast<int>(p.size()) - 1;
}

}  // namespace

PolicyState rl_init(const Objective& objective, const RlConfig& config, Rng& rng) {
  config.validate();
  const int n = objective.dimension();
  const int m = objective.candidate_count();
  PolicyState s;
  s.probability_floor = std::min(config.probability_floor, 0.5 / m);
  s.preference.assign(n, std::vector<double>(m, 1.0 / m));
  s.assignment.resize(n);
  for (int k = 0; k < n; ++k) s.assignment[k] = sample_from(s.preference[k], rng);
  s.fitness = objective(s.assignment);
  s.best_seen = s.assignment;
  s.best_fitness = s.fitness;
  s.exploration_rate = config.exploration_rate;
  s.last_sampled_fitness = s.fitness;
  return s;
}

PolicyState rl_episode(PolicyState s, const Objective& objective, const RlConfig& config, Rng& rng) {
  const int n = objective.dimension();
  const int m = objective.candidate_count();
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<int> sample;
  if (unit(rng) < s.exploration_rate) {
    sample = s.assignment;
    if (n > 0) {
      const int k = std::uniform_int_distribution<int>(0, n - 1)(rng);
      sample[k] = std::uniform_int_distribution<int>(0, m - 1)(rng);
    }
  } else {
    sample.resize(n);
    for (int k = 0; k < n; ++k) sample[k] = sample_from(s.preference[k], rng);
  }

  const double f = objective(sample);
  s.last_sampled_fitness = f;
  s.last_rewarded = f < s.fitness;
  if (s.last_rewarded) {
    for (int k = 0; k < n; ++k) reinforce(s.preference[k], sample[k], config.learning_rate, s.probability_floor);
    s.assignment = sample;
    s.fitness = f;
  } else {
    const double rate = config.learning_rate * config.penalty_value / config.reward_value;
    for (int k = 0; k < n; ++k) penalize(s.preference[k], sample[k], rate, s.probability_floor);
  }
  if (f < s.best_fitness) {
    s.best_seen = std::move(sample);
    s.best_fitness = f;
  }
  s.exploration_rate *= config.exploration_decay;
  ++s.episode;
  return s;
}

SubSchedule rl_optimize(const Objective& objective, const RlConfig& config, std::vector<RlTracePoint>* detail) {
  Rng rng(config.seed);
  PolicyState state = rl_init(objective, config, rng);
  SubSchedule result;
  result.tasks = objective.tasks();
  result.evaluations = 1;
  for (int e = 0; e < config.episodes; ++e) {
    const double rate = state.exploration_rate;
    state = rl_episode(std::move(state), objective, config, rng);
    ++result.evaluations;
    result.trace.push_back({e, state.best_fitness});
    if (detail) detail->push_back({e, state.last_sampled_fitness, state.best_fitness, rate});
  }
  result.nodes = objective.node_ids(state.best_seen);
  result.fitness = state.best_fitness;
  return result;
}

SubSchedule rl_optimize(const Evaluator& evaluator, std::vector<int> tasks, std::vector<int> candidates,
                        const RlConfig& config, const FitnessWeights& weights) {
  const Objective objective(evaluator, std::move(tasks), std::move(candidates), weights);
  return rl_optimize(objective, config);
}

void write_rl_trace_csv(std::ostream& out, const std::vector<RlTracePoint>& trace) {
  out << "episode,sampled_fitness,best_fitness,exploration_rate\n" << std::setprecision(17);
  for (const auto& p : trace)
    out << p.episode << ',' << p.sampled_fitness << ',' << p.best_fitness << ',' << p.exploration_rate << '\n';
}

}  // namespace fogsched
