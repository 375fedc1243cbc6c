#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <string>
#include <vector>

#include "fogsched/experiment.hpp"
#include "fogsched/scenario_io.hpp"

namespace py = pybind11;
using namespace fogsched;

// Structured values cross the boundary as JSON text; the Python package
// turns them into dicts.
namespace {

FitnessWeights weights_from(const std::vector<double>& w) {
  if (w.size() != 3) throw std::invalid_argument("weights must be (w_r, w_d, w_e)");
  FitnessWeights weights{w[0], w[1], w[2], std::nullopt};
  weights.validate();
  return weights;
}

std::string generate(const std::string& config_json) {
  return scenario_to_json(generate_scenario(config_from_json(nlohmann::json::parse(config_json)))).dump();
}

std::string evaluate(const std::string& scenario_json, std::vector<int> mapping, const std::vector<double>& weights) {
  const Evaluator evaluator(scenario_from_json(nlohmann::json::parse(scenario_json)));
  const Assignment assignment = make_assignment(evaluator.instance(), std::move(mapping));
  const FitnessWeights w = resolve_weights(evaluator, weights_from(weights));
  return report_to_json(evaluator.report(assignment, w)).dump();
}

std::string run(const std::string& algorithm, const std::string& scenario_json, std::uint64_t seed,
                const std::vector<double>& weights, int budget, int population) {
  const Instance instance = scenario_from_json(nlohmann::json::parse(scenario_json));
  const std::uint64_t hash = instance_hash(instance);
  const Evaluator evaluator(instance);
  AlgorithmSettings settings;
  settings.evaluation_budget = budget;
  settings.population_size = population;
  settings.weights = weights_from(weights);
  RunOutcome outcome;
  {
    py::gil_scoped_release release;
    outcome = run_algorithm(parse_algorithm(algorithm), evaluator, seed, settings);
  }
  nlohmann::json doc = run_report_json(outcome, seed, hash);
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& p : outcome.trace) trace.push_back({p.iteration, p.best_fitness});
  doc["trace"] = trace;
  return doc.dump();
}

std::string classify(const std::string& scenario_json) {
  const Instance instance = scenario_from_json(nlohmann::json::parse(scenario_json));
  const TrafficClassification c = classify_nodes(instance.topology);
  return nlohmann::json{{"node_traffic", c.node_traffic},
                        {"average_traffic", c.average_traffic},
                        {"low_traffic_nodes", c.low_traffic_nodes},
                        {"high_traffic_nodes", c.high_traffic_nodes}}
      .dump();
}

std::string hash(const std::string& scenario_json) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(instance_hash(scenario_from_json(nlohmann::json::parse(scenario_json)))));
  return buf;
}

py::list experiment(const std::vector<int>& task_counts, int n_nodes, int repetitions,
                    const std::vector<std::string>& algorithms, std::uint64_t base_seed, int budget, int population,
                    const std::vector<double>& weights, const std::string& output_dir, int jobs) {
  ExperimentPlan plan;
  plan.task_counts = task_counts;
  plan.n_nodes = n_nodes;
  plan.repetitions = repetitions;
  plan.base_seed = base_seed;
  plan.jobs = jobs;
  plan.output_dir = output_dir;
  plan.settings.evaluation_budget = budget;
  plan.settings.population_size = population;
  plan.settings.weights = weights_from(weights);
  if (!algorithms.empty()) {
    plan.algorithms.clear();
    for (const auto& a : algorithms) plan.algorithms.push_back(parse_algorithm(a));
  }
  ExperimentResult result;
  {
    py::gil_scoped_release release;
    result = run_experiment(plan);
  }
  py::list rows;
  for (const auto& r : result.records) {
    py::dict row;
    row["algorithm"] = r.algorithm;
    row["task_count"] = r.task_count;
    row["seed"] = r.seed;
    row["dv_total"] = r.dv_total;
    row["energy_total"] = r.energy_total;
    row["response_total"] = r.response_total;
    row["response_max"] = r.response_max;
    row["fitness"] = r.fitness;
    row["wall_time_ms"] = r.wall_time;
    rows.append(row);
  }
  for (const auto& f : result.failures) {
    py::dict row;
    row["algorithm"] = f.algorithm;
    row["task_count"] = f.task_count;
    row["seed"] = f.seed;
    row["error"] = f.message;
    rows.append(row);
  }
  return rows;
}

std::vector<std::string> algorithm_names() {
  std::vector<std::string> names;
  for (Algorithm a : kAllAlgorithms) names.emplace_back(algorithm_name(a));
  return names;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Fog task scheduling core";
  m.def("generate", &generate, py::arg("config_json"));
  m.def("evaluate", &evaluate, py::arg("scenario_json"), py::arg("mapping"), py::arg("weights"));
  m.def("run", &run, py::arg("algorithm"), py::arg("scenario_json"), py::arg("seed"), py::arg("weights"),
        py::arg("budget"), py::arg("population"));
  m.def("classify", &classify, py::arg("scenario_json"));
  m.def("instance_hash", &hash, py::arg("scenario_json"));
  m.def("experiment", &experiment, py::arg("task_counts"), py::arg("n_nodes"), py::arg("repetitions"),
        py::arg("algorithms"), py::arg("base_seed"), py::arg("budget"), py::arg("population"), py::arg("weights"),
        py::arg("output_dir"), py::arg("jobs"));
  m.def("algorithm_names", &algorithm_names);
}
