#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "fogsched/metrics.hpp"
#include "fogsched/model.hpp"
#include "fogsched/optimizer.hpp"

namespace fogsched {

// Golden eagle optimizer over continuous positions in [0, m'-1]^n, one
// coordinate per task, decoded by rounding to a candidate-node index.
struct GeoParams {
  int population_size = 30;
  int iterations = 200;
  // Attack and cruise propensities move linearly from *_start to *_end.
  double pa_start = 0.5;
  double pa_end = 2.0;
  double pc_start = 1.0;
  double pc_end = 0.5;
  std::uint64_t seed = 0;

  void validate() const;
  double attack_coefficient(int iteration) const;
  double cruise_coefficient(int iteration) const;
};

struct Location {
  std::vector<double> position;
  std::vector<int> genome;
  double fitness = 0.0;
};

struct EagleState {
  std::vector<double> position;
  Location memory_best;
};

struct SwarmState {
  std::vector<EagleState> eagles;
  Location global_best;
  int iteration = 0;
};

struct StepVector {
  std::vector<double> delta;
  double r1pa = 0.0;
  double r2pc = 0.0;
};

double norm(std::span<const double> v);
double dot(std::span<const double> a, std::span<const double> b);

// prey - eagle, componentwise.
std::vector<double> attack_vector(std::span<const double> eagle, std::span<const double> prey);

// Random vector orthogonal to `attack`: all coordinates but one random index
// are drawn from [-1, 1]; the fixed one solves attack . c = 0. The fixed
// index is redrawn while its attack component is zero. Returns the zero
// vector in one dimension, where no nonzero orthogonal vector exists.
std::vector<double> cruise_vector(std::span<const double> attack, Rng& rng);

// delta = r1*pa*A/|A| + r2*pc*C/|C| with scalar r1, r2 ~ U[0,1].
StepVector step_vector(std::span<const double> attack, std::span<const double> cruise, double pa, double pc, Rng& rng);
StepVector step_vector(std::span<const double> attack, std::span<const double> cruise, double pa, double pc, double r1,
                       double r2);

// Round half up to the nearest index in [0, upper].
int decode_coordinate(double x, int upper);
std::vector<int> decode_position(std::span<const double> position, int upper);

using SwarmObserver = std::function<void(const SwarmState&)>;

SubSchedule geo_optimize(const Objective& objective, const GeoParams& params, const SwarmObserver& observer = {});
SubSchedule geo_optimize(const Evaluator& evaluator, std::vector<int> tasks, std::vector<int> candidates,
                         const GeoParams& params, const FitnessWeights& weights);

}  // namespace fogsched
