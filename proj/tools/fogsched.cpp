#if __has_include(<CLI/CLI.hpp>)
#include <CLI/CLI.hpp>
#else
#include <CLI11.hpp>
#endif

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fogsched/experiment.hpp"
#include "fogsched/scenario_io.hpp"

namespace fs = std::filesystem;
using namespace fogsched;

namespace {

FitnessWeights parse_weights(const std::string& text) {
  std::vector<double> w;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    w.push_back(std::stod(item, &used));
    if (used != item.size()) throw std::invalid_argument("bad weight \"" + item + "\"");
  }
  if (w.size() != 3) throw std::invalid_argument("--weights expects w_r,w_d,w_e");
  FitnessWeights weights{w[0], w[1], w[2], std::nullopt};
  weights.validate();
  return weights;
}

std::ofstream open_file(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
}

ScenarioConfig scenario_config(const std::string& config_file, std::uint64_t seed, int tasks, int nodes) {
  ScenarioConfig c;
  if (!config_file.empty()) {
    std::ifstream in(config_file);
    if (!in) throw std::runtime_error("cannot read " + config_file);
    c = config_from_json(nlohmann::json::parse(in));
  }
  c.rng_seed = seed;
  c.n_tasks = tasks;
  c.n_nodes = nodes;
  c.validate();
  return c;
}

struct Common {
  std::uint64_t seed = 1;
  int tasks = 200;
  int nodes = 20;
  std::string weights = "1,1,1";
  std::string out;
  std::string config;
  bool trace = false;
  int budget = 6000;
  int population = 30;
  double threshold = 0.0;  // 0: batch mean
};

AlgorithmSettings settings_from(const Common& c) {
  AlgorithmSettings s;
  s.evaluation_budget = c.budget;
  s.population_size = c.population;
  s.weights = parse_weights(c.weights);
  if (c.threshold > 0.0) s.threshold = ThresholdPolicy::fixed(c.threshold);
  return s;
}

int cmd_generate(const Common& c) {
  const Instance inst = generate_scenario(scenario_config(c.config, c.seed, c.tasks, c.nodes));
  if (c.out.empty()) {
    std::cout << scenario_to_json(inst).dump(2) << '\n';
    return 0;
  }
  ensure_dir(c.out);
  save_scenario(inst, fs::path(c.out) / "scenario.json");
  std::printf("wrote %s (%d tasks, %d nodes, hash %016llx)\n", (fs::path(c.out) / "scenario.json").c_str(),
              inst.task_count(), inst.node_count(), static_cast<unsigned long long>(instance_hash(inst)));
  return 0;
}

int cmd_run(const Common& c, const std::string& algorithm_text, const std::string& scenario_file) {
  const Algorithm algorithm = parse_algorithm(algorithm_text);
  const AlgorithmSettings settings = settings_from(c);
  Instance inst = scenario_file.empty() ? generate_scenario(scenario_config(c.config, c.seed, c.tasks, c.nodes))
                                        : load_scenario(scenario_file);
  const std::uint64_t hash = instance_hash(inst);
  const Evaluator evaluator(inst);
  const RunOutcome o = run_algorithm(algorithm, evaluator, c.seed, settings);
  const nlohmann::json report = run_report_json(o, c.seed, hash);
  const std::string name(algorithm_name(algorithm));

  if (c.out.empty()) {
    std::cout << report.dump(2) << '\n';
  } else {
    const fs::path dir(c.out);
    ensure_dir(dir);
    save_scenario(evaluator.instance(), dir / "scenario.json");
    open_file(dir / (name + "_report.json")) << report.dump(2) << '\n';
    RunRecord record{name,
                     evaluator.task_count(),
                     c.seed,
                     o.report.dv_total,
                     o.report.energy_total,
                     o.report.response_total,
                     o.report.response_max,
                     o.report.fitness,
                     o.wall_time_ms,
                     hash};
    auto records = open_file(dir / "records.csv");
    write_records_csv(records, std::span<const RunRecord>(&record, 1));
    if (c.trace) {
      auto trace = open_file(dir / (name + "_trace.csv"));
      write_run_trace(trace, o);
    }
  }
  std::fprintf(stderr, "%s: dv_total=%.6g energy_total=%.6g response_total=%.6g fitness=%.6g (%.1f ms)\n",
               name.c_str(), o.report.dv_total, o.report.energy_total, o.report.response_total, o.report.fitness,
               o.wall_time_ms);
  return 0;
}

int cmd_experiment(const Common& c, const std::vector<int>& task_counts, const std::vector<std::string>& algorithms,
                   int reps, int jobs) {
  if (c.out.empty()) throw std::invalid_argument("experiment needs --out DIR");
  ExperimentPlan plan;
  if (!task_counts.empty()) plan.task_counts = task_counts;
  plan.n_nodes = c.nodes;
  plan.repetitions = reps;
  plan.base_seed = c.seed;
  plan.jobs = jobs;
  plan.output_dir = c.out;
  plan.write_runs = c.trace;
  plan.settings = settings_from(c);
  if (!c.config.empty()) plan.scenario = scenario_config(c.config, c.seed, plan.task_counts.front(), c.nodes);
  if (!algorithms.empty()) {
    plan.algorithms.clear();
    for (const auto& a : algorithms) plan.algorithms.push_back(parse_algorithm(a));
  }
  plan.validate();

  const ExperimentResult result = run_experiment(plan);
  nlohmann::json names = nlohmann::json::array();
  for (Algorithm a : plan.algorithms) names.push_back(algorithm_name(a));
  open_file(fs::path(c.out) / "plan.json") << nlohmann::json{{"task_counts", plan.task_counts},
                                                             {"n_nodes", plan.n_nodes},
                                                             {"repetitions", plan.repetitions},
                                                             {"base_seed", plan.base_seed},
                                                             {"algorithms", names},
                                                             {"evaluation_budget", plan.settings.evaluation_budget},
                                                             {"population_size", plan.settings.population_size},
                                                             {"weights", c.weights},
                                                             {"scenario", config_to_json(plan.scenario)}}
                                                  .dump(2)
                                           << '\n';
  std::fprintf(stderr, "%zu records, %zu failures -> %s\n", result.records.size(), result.failures.size(),
               c.out.c_str());
  return result.failures.empty() ? 0 : 3;
}

int cmd_aggregate(const std::string& records_file, const std::string& out) {
  std::ifstream in(records_file);
  if (!in) throw std::runtime_error("cannot read " + records_file);
  const auto rows = aggregate(read_records_csv(in));
  if (out.empty()) {
    write_summary_csv(std::cout, rows);
    return 0;
  }
  ensure_dir(out);
  auto file = open_file(fs::path(out) / "summary.csv");
  write_summary_csv(file, rows);
  return 0;
}

void add_common(CLI::App* cmd, Common& c, bool scenario_flags, bool algorithm_flags) {
  cmd->add_option("--seed", c.seed, "Scenario and algorithm seed (base seed for experiment)")->capture_default_str();
  if (scenario_flags) {
    cmd->add_option("--tasks", c.tasks, "Number of tasks")->capture_default_str()->check(CLI::PositiveNumber);
    cmd->add_option("--config", c.config, "Scenario config JSON (ranges, powers)")->check(CLI::ExistingFile);
  }
  cmd->add_option("--nodes", c.nodes, "Number of fog nodes")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--out", c.out, "Output directory");
  if (algorithm_flags) {
    cmd->add_option("--weights", c.weights, "Fitness weights w_r,w_d,w_e")->capture_default_str();
    cmd->add_option("--budget", c.budget, "Fitness evaluations per run")->capture_default_str();
    cmd->add_option("--population", c.population, "Swarm size for GEO, IGEO and RIGEO")->capture_default_str();
    cmd->add_option("--deadline-threshold", c.threshold, "Fixed RIGEO deadline threshold in ms (default: batch mean)");
    cmd->add_flag("--trace", c.trace, "Write convergence traces");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fog task scheduling: scenario generation, RIGEO and baselines, experiments"};
  app.require_subcommand(1);

  Common gen, run, exp;
  std::string algorithm = "RIGEO", scenario_file, records_file, aggregate_out;
  std::vector<int> task_counts;
  std::vector<std::string> algorithms;
  int reps = 50, jobs = 0;

  auto* g = app.add_subcommand("generate", "Write a seeded scenario JSON");
  add_common(g, gen, true, false);

  auto* r = app.add_subcommand("run", "Run one algorithm on a scenario");
  add_common(r, run, true, true);
  r->add_option("--algorithm", algorithm, "RIGEO, IGEO, GEO, RL, RANDOM or GREEDY")->capture_default_str();
  r->add_option("--scenario", scenario_file, "Scenario JSON (otherwise generated from --seed/--tasks/--nodes)")
      ->check(CLI::ExistingFile);

  auto* e = app.add_subcommand("experiment", "Sweep task counts and seeds over several algorithms");
  add_common(e, exp, false, true);
  e->add_option("--tasks", task_counts, "Task counts, comma separated (default 200,300,400,500,600)")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  e->add_option("--algorithm", algorithms, "Algorithms, comma separated (default all)")->delimiter(',');
  e->add_option("--reps", reps, "Repetitions per task count")->capture_default_str()->check(CLI::PositiveNumber);
  e->add_option("--jobs", jobs, "Worker threads (0 = hardware concurrency)")->capture_default_str();
  e->add_option("--config", exp.config, "Scenario config JSON (ranges, powers)")->check(CLI::ExistingFile);

  auto* a = app.add_subcommand("aggregate", "Summarize a records.csv");
  a->add_option("records", records_file, "records.csv to summarize")->required();
  a->add_option("--out", aggregate_out, "Output directory for summary.csv (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*g) return cmd_generate(gen);
    if (*r) return cmd_run(run, algorithm, scenario_file);
    if (*e) return cmd_experiment(exp, task_counts, algorithms, reps, jobs);
    if (*a) return cmd_aggregate(records_file, aggregate_out);
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 2;
  }
  return 0;
}
