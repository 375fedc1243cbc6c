#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fogsched/igeo.hpp"
#include "fogsched/metrics.hpp"
#include "fogsched/rigeo.hpp"
#include "fogsched/rl.hpp"

namespace fogsched {

enum class Algorithm { rigeo, igeo, geo, rl, random, greedy };

inline constexpr Algorithm kAllAlgorithms[] = {Algorithm::rigeo, Algorithm::igeo,   Algorithm::geo,
                                               Algorithm::rl,    Algorithm::random, Algorithm::greedy};

std::string_view algorithm_name(Algorithm algorithm);
// Case-insensitive; accepts "IGEO-only" and "RL-only" as aliases.
Algorithm parse_algorithm(std::string_view name);

// Shared knobs for every algorithm in a run. The evaluation budget is split
// so that all optimizers spend roughly the same number of fitness calls.
struct AlgorithmSettings {
  int evaluation_budget = 6000;
  int population_size = 30;
  GeoParams geo;  // coefficient schedule; size, iterations and seed are derived
  double mutation_rate = 0.1;
  RlConfig rl;  // learning parameters; episodes and seed are derived
  FitnessWeights weights;
  ThresholdPolicy threshold;

  GeoParams geo_params(int budget, std::uint64_t seed) const;
  IgeoParams igeo_params(int budget, std::uint64_t seed) const;
  RlConfig rl_config(int budget, std::uint64_t seed) const;
};

struct BaselineResult {
  Assignment assignment;
  double fitness = 0.0;
};

BaselineResult baseline_random(const Evaluator& evaluator, std::uint64_t seed, const FitnessWeights& weights);
// Deadline order; each task goes to the node with the earliest completion
// given the queues built so far (ties to the lower node id).
BaselineResult baseline_greedy(const Evaluator& evaluator, const FitnessWeights& weights);

struct RunOutcome {
  Algorithm algorithm = Algorithm::random;
  Assignment assignment;
  MetricsReport report;
  std::vector<TracePoint> trace;
  std::vector<RlTracePoint> rl_trace;
  std::optional<RigeoResult> rigeo;
  double wall_time_ms = 0.0;
};

RunOutcome run_algorithm(Algorithm algorithm, const Evaluator& evaluator, std::uint64_t seed,
                         const AlgorithmSettings& settings);

// Metrics, mapping and (for RIGEO) the routing summary of one run.
nlohmann::json run_report_json(const RunOutcome& outcome, std::uint64_t seed, std::uint64_t instance_hash);
// Convergence trace of a run; RL runs use the per-episode format.
void write_run_trace(std::ostream& out, const RunOutcome& outcome);

struct ExperimentPlan {
  std::vector<int> task_counts{200, 300, 400, 500, 600};
  int n_nodes = 20;
  int repetitions = 50;
  std::vector<Algorithm> algorithms{std::begin(kAllAlgorithms), std::end(kAllAlgorithms)};
  std::uint64_t base_seed = 1;
  std::filesystem::path output_dir;  // empty: nothing written
  int jobs = 0;                      // worker threads, 0 = hardware concurrency
  bool write_runs = false;           // per-run JSON report and trace under output_dir/runs
  ScenarioConfig scenario;           // n_tasks, n_nodes and rng_seed are set per trial
  AlgorithmSettings settings;

  void validate() const;
};

struct RunRecord {
  std::string algorithm;
  int task_count = 0;
  std::uint64_t seed = 0;
  double dv_total = 0.0;
  double energy_total = 0.0;
  double response_total = 0.0;
  double response_max = 0.0;
  double fitness = 0.0;
  double wall_time = 0.0;  // ms; kept out of records.csv so that file is reproducible
  std::uint64_t instance_hash = 0;
};

struct FailedRun {
  std::string algorithm;
  int task_count = 0;
  std::uint64_t seed = 0;
  std::string message;
};

struct ExperimentResult {
  std::vector<RunRecord> records;
  std::vector<FailedRun> failures;
};

// Trial seed = base_seed + repetition; every algorithm of a trial sees the
// same generated instance. Records are ordered by (task_count, seed,
// algorithm position in the plan). Writes records.csv, timings.csv,
// failures.csv and summary.csv when output_dir is set; with write_runs also
// runs/<ALG>_<tasks>_<seed>.json and runs/<ALG>_<tasks>_<seed>_trace.csv.
ExperimentResult run_experiment(const ExperimentPlan& plan);

struct SummaryRow {
  std::string algorithm;
  int task_count = 0;
  std::string metric;
  int count = 0;
  double mean = 0.0;
  double stddev = 0.0;  // sample (n - 1), 0 for a single record
  double min = 0.0;
  double max = 0.0;
};

inline constexpr std::string_view kSummaryMetrics[] = {"dv_total", "energy_total", "response_total", "response_max",
                                                       "fitness"};

std::vector<SummaryRow> aggregate(std::span<const RunRecord> records);

void write_records_csv(std::ostream& out, std::span<const RunRecord> records);
std::vector<RunRecord> read_records_csv(std::istream& in);
void write_timings_csv(std::ostream& out, std::span<const RunRecord> records);
void write_failures_csv(std::ostream& out, std::span<const FailedRun> failures);
void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows);

}  // namespace fogsched
