#include "fogsched/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "fogsched/geo.hpp"
#include "fogsched/scenario_io.hpp"

namespace fogsched {

std::string_view algorithm_name(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::rigeo: return "RIGEO";
    case Algorithm::igeo: return "IGEO";
    case Algorithm::geo: return "GEO";
    case Algorithm::rl: return "RL";
    case Algorithm::random: return "RANDOM";
    case Algorithm::greedy: return "GREEDY";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return std::toupper(c); });
  if (upper.ends_with("-ONLY")) upper.resize(upper.size() - 5);
  for (Algorithm a : kAllAlgorithms)
    if (algorithm_name(a) == upper) return a;
  throw std::invalid_argument("unknown algorithm \"" + std::string(name) + "\"");
}

GeoParams AlgorithmSettings::geo_params(int budget, std::uint64_t seed) const {
  GeoParams p = geo;
  p.population_size = population_size;
  p.iterations = std::max(1, (budget - population_size) / std::max(1, population_size));
  p.seed = seed;
  return p;
}

IgeoParams AlgorithmSettings::igeo_params(int budget, std::uint64_t seed) const {
  return {geo_params(budget, seed), mutation_rate};
}

RlConfig AlgorithmSettings::rl_config(int budget, std::uint64_t seed) const {
  RlConfig c = rl;
  c.episodes = std::max(1, budget - 1);
  c.seed = seed;
  return c;
}

namespace {

std::vector<int> iota_vector(int n) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

}  // namespace

BaselineResult baseline_random(const Evaluator& evaluator, std::uint64_t seed, const FitnessWeights& weights) {
  Rng rng(seed);
  std::uniform_int_distribution<int> pick(0, evaluator.node_count() - 1);
  std::vector<int> mapping(evaluator.task_count());
  for (int& j : mapping) j = pick(rng);
  BaselineResult r;
  r.assignment = make_assignment(evaluator.instance(), std::move(mapping));
  r.fitness = evaluator.fitness(r.assignment, weights);
  return r;
}

BaselineResult baseline_greedy(const Evaluator& evaluator, const FitnessWeights& weights) {
  const int n = evaluator.task_count();
  const int m = evaluator.node_count();
  std::vector<int> order = iota_vector(n);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return evaluator.edf_rank(a) < evaluator.edf_rank(b); });
  std::vector<double> clock(m, 0.0);
  std::vector<int> mapping(n, 0);
  for (int i : order) {
    int best = 0;
    double best_completion = 0.0;
    for (int j = 0; j < m; ++j) {
      const double completion =
          evaluator.propagation(i, j) + evaluator.transmission(i, j) + evaluator.execution(i, j) + clock[j];
      if (j == 0 || completion < best_completion) {
        best = j;
        best_completion = completion;
      }
    }
    mapping[i] = best;
    clock[best] += evaluator.execution(i, best);
  }
  BaselineResult r;
  r.assignment = make_assignment(evaluator.instance(), std::move(mapping));
  r.fitness = evaluator.fitness(r.assignment, weights);
  return r;
}

RunOutcome run_algorithm(Algorithm algorithm, const Evaluator& evaluator, std::uint64_t seed,
                         const AlgorithmSettings& settings) {
  const auto start = std::chrono::steady_clock::now();
  const Instance& inst = evaluator.instance();
  const FitnessWeights weights = resolve_weights(evaluator, settings.weights);
  const int budget = settings.evaluation_budget;
  RunOutcome out;
  out.algorithm = algorithm;

  auto from_sub = [&](const SubSchedule& s) {
    std::vector<int> mapping(inst.task_count());
    for (std::size_t k = 0; k < s.tasks.size(); ++k) mapping[s.tasks[k]] = s.nodes[k];
    out.assignment = make_assignment(inst, std::move(mapping));
    out.trace = s.trace;
  };

  switch (algorithm) {
    case Algorithm::rigeo: {
      RigeoConfig config;
      config.weights = settings.weights;
      config.threshold = settings.threshold;
      // Budget split in proportion to the two task classes.
      int low_budget = budget, high_budget = budget;
      if (!inst.tasks.empty()) {
        const DeadlinePartition p = partition_tasks(inst.tasks, settings.threshold);
        const double share = static_cast<double>(p.low_deadline_tasks.size()) / static_cast<double>(inst.tasks.size());
        low_budget = std::max(2 * settings.population_size, static_cast<int>(std::lround(budget * share)));
        high_budget = std::max(2, budget - static_cast<int>(std::lround(budget * share)));
      }
      config.igeo = settings.igeo_params(low_budget, seed);
      config.rl = settings.rl_config(high_budget, seed);
      RigeoResult r = rigeo_schedule(evaluator, config);
      out.assignment = r.assignment;
      if (r.igeo) out.trace = r.igeo->trace;
      out.rigeo = std::move(r);
      break;
    }
    case Algorithm::igeo: {
      const Objective objective(evaluator, iota_vector(inst.task_count()), iota_vector(inst.node_count()), weights);
      from_sub(igeo_optimize(objective, settings.igeo_params(budget, seed)));
      break;
    }
    case Algorithm::geo: {
      const Objective objective(evaluator, iota_vector(inst.task_count()), iota_vector(inst.node_count()), weights);
      from_sub(geo_optimize(objective, settings.geo_params(budget, seed)));
      break;
    }
    case Algorithm::rl: {
      const Objective objective(evaluator, iota_vector(inst.task_count()), iota_vector(inst.node_count()), weights);
      from_sub(rl_optimize(objective, settings.rl_config(budget, seed), &out.rl_trace));
      break;
    }
    case Algorithm::random: out.assignment = baseline_random(evaluator, seed, weights).assignment; break;
    case Algorithm::greedy: out.assignment = baseline_greedy(evaluator, weights).assignment; break;
  }
  out.report = evaluator.report(out.assignment, weights);
  out.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return out;
}

nlohmann::json run_report_json(const RunOutcome& outcome, std::uint64_t seed, std::uint64_t instance_hash) {
  std::ostringstream hash;
  hash << std::hex << std::setw(16) << std::setfill('0') << instance_hash;
  nlohmann::json j = {{"algorithm", algorithm_name(outcome.algorithm)},
                      {"seed", seed},
                      {"instance_hash", hash.str()},
                      {"wall_time_ms", outcome.wall_time_ms},
                      {"mapping", outcome.assignment.mapping},
                      {"metrics", report_to_json(outcome.report)}};
  if (outcome.rigeo) j["routing"] = routing_summary(*outcome.rigeo);
  return j;
}

void write_run_trace(std::ostream& out, const RunOutcome& outcome) {
  if (outcome.algorithm == Algorithm::rl) write_rl_trace_csv(out, outcome.rl_trace);
  else write_trace_csv(out, std::string(algorithm_name(outcome.algorithm)), outcome.trace);
}

void ExperimentPlan::validate() const {
  if (task_counts.empty()) throw std::invalid_argument("plan: task_counts is empty");
  for (int n : task_counts)
    if (n <= 0) throw std::invalid_argument("plan: task counts must be > 0");
  if (n_nodes <= 0) throw std::invalid_argument("plan: n_nodes must be > 0");
  if (repetitions < 1) throw std::invalid_argument("plan: repetitions must be >= 1");
  if (algorithms.empty()) throw std::invalid_argument("plan: algorithms is empty");
  if (jobs < 0) throw std::invalid_argument("plan: jobs must be >= 0");
  if (settings.evaluation_budget < 1) throw std::invalid_argument("plan: evaluation_budget must be >= 1");
  settings.weights.validate();
  ScenarioConfig probe = scenario;
  probe.n_tasks = task_counts.front();
  probe.n_nodes = n_nodes;
  probe.validate();
}

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentPlan& plan) {
  plan.validate();
  if (!plan.output_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(plan.output_dir, ec);
    if (plan.write_runs) std::filesystem::create_directories(plan.output_dir / "runs", ec);
    open_output(plan.output_dir / "records.csv");  // fail before running anything
  }

  struct Trial {
    int task_count;
    std::uint64_t seed;
  };
  std::vector<Trial> trials;
  for (int count : plan.task_counts)
    for (int rep = 0; rep < plan.repetitions; ++rep) trials.push_back({count, plan.base_seed + static_cast<std::uint64_t>(rep)});

  struct Row {
    std::size_t trial;
    std::size_t algorithm;
    std::optional<RunRecord> record;
    std::optional<FailedRun> failure;
  };
  std::vector<Row> rows;
  std::mutex sink;

  auto run_trial = [&](std::size_t t) {
    const Trial& trial = trials[t];
    ScenarioConfig config = plan.scenario;
    config.n_tasks = trial.task_count;
    config.n_nodes = plan.n_nodes;
    config.rng_seed = trial.seed;
    std::vector<Row> local;
    std::optional<Evaluator> evaluator;
    std::uint64_t hash = 0;
    std::string setup_error;
    try {
      Instance inst = generate_scenario(config);
      hash = instance_hash(inst);
      evaluator.emplace(std::move(inst));
    } catch (const std::exception& e) {
      setup_error = std::string("scenario: ") + e.what();
    }
    for (std::size_t a = 0; a < plan.algorithms.size(); ++a) {
      const std::string name(algorithm_name(plan.algorithms[a]));
      Row row{t, a, std::nullopt, std::nullopt};
      try {
        if (!evaluator) throw std::runtime_error(setup_error);
        const RunOutcome o = run_algorithm(plan.algorithms[a], *evaluator, trial.seed, plan.settings);
        if (plan.write_runs && !plan.output_dir.empty()) {
          const std::string stem = name + "_" + std::to_string(trial.task_count) + "_" + std::to_string(trial.seed);
          open_output(plan.output_dir / "runs" / (stem + ".json")) << run_report_json(o, trial.seed, hash).dump(2)
                                                                     << '\n';
          auto trace = open_output(plan.output_dir / "runs" / (stem + "_trace.csv"));
          write_run_trace(trace, o);
        }
        row.record = RunRecord{name,
                               trial.task_count,
                               trial.seed,
                               o.report.dv_total,
                               o.report.energy_total,
                               o.report.response_total,
                               o.report.response_max,
                               o.report.fitness,
                               o.wall_time_ms,
                               hash};
      } catch (const std::exception& e) {
        row.failure = FailedRun{name, trial.task_count, trial.seed, e.what()};
      }
      local.push_back(std::move(row));
    }
    std::lock_guard lock(sink);
    for (auto& r : local) rows.push_back(std::move(r));
  };

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers =
      std::min<std::size_t>(trials.size(), plan.jobs > 0 ? static_cast<std::size_t>(plan.jobs) : hw);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next++; t < trials.size(); t = next++) run_trial(t);
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  std::sort(rows.begin(), rows.end(), [&](const Row& x, const Row& y) {
    const Trial& a = trials[x.trial];
    const Trial& b = trials[y.trial];
    if (a.task_count != b.task_count) return a.task_count < b.task_count;
    if (a.seed != b.seed) return a.seed < b.seed;
    return x.algorithm < y.algorithm;
  });

  ExperimentResult result;
  for (auto& r : rows) {
    if (r.record) result.records.push_back(std::move(*r.record));
    if (r.failure) result.failures.push_back(std::move(*r.failure));
  }

  if (!plan.output_dir.empty()) {
    auto records = open_output(plan.output_dir / "records.csv");
    write_records_csv(records, result.records);
    auto timings = open_output(plan.output_dir / "timings.csv");
    write_timings_csv(timings, result.records);
    auto failures = open_output(plan.output_dir / "failures.csv");
    write_failures_csv(failures, result.failures);
    if (!result.records.empty()) {
      auto summary = open_output(plan.output_dir / "summary.csv");
      write_summary_csv(summary, aggregate(result.records));
    }
  }
  return result;
}

namespace {

double metric_of(const RunRecord& r, std::string_view metric) {
  if (metric == "dv_total") return r.dv_total;
  if (metric == "energy_total") return r.energy_total;
  if (metric == "response_total") return r.response_total;
  if (metric == "response_max") return r.response_max;
  if (metric == "fitness") return r.fitness;
  throw std::invalid_argument("unknown metric " + std::string(metric));
}

}  // namespace

std::vector<SummaryRow> aggregate(std::span<const RunRecord> records) {
  if (records.empty()) throw std::invalid_argument("aggregate: no records");
  std::map<std::pair<std::string, int>, std::vector<const RunRecord*>> groups;
  for (const RunRecord& r : records) groups[{r.algorithm, r.task_count}].push_back(&r);

  std::vector<SummaryRow> rows;
  for (const auto& [key, group] : groups) {
    for (std::string_view metric : kSummaryMetrics) {
      std::vector<double> values;
      values.reserve(group.size());
      for (const RunRecord* r : group) values.push_back(metric_of(*r, metric));
      // Sorting first makes the sums independent of input order.
      std::sort(values.begin(), values.end());
      const double n = static_cast<double>(values.size());
      const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
      double ss = 0.0;
      for (double v : values) ss += (v - mean) * (v - mean);
      SummaryRow row;
      row.algorithm = key.first;
      row.task_count = key.second;
      row.metric = std::string(metric);
      row.count = static_cast<int>(values.size());
      row.mean = mean;
      row.stddev = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
      row.min = values.front();
      row.max = values.back();
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void write_records_csv(std::ostream& out, std::span<const RunRecord> records) {
  out << "algorithm,task_count,seed,dv_total,energy_total,response_total,response_max,fitness,instance_hash\n"
      << std::setprecision(17);
  for (const RunRecord& r : records) {
    out << r.algorithm << ',' << r.task_count << ',' << r.seed << ',' << r.dv_total << ',' << r.energy_total << ','
        << r.response_total << ',' << r.response_max << ',' << r.fitness << ',' << std::hex << std::setw(16)
        << std::setfill('0') << r.instance_hash << std::dec << std::setfill(' ') << '\n';
  }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    const char c = line[k];
    if (quoted) {
      if (c == '"' && k + 1 < line.size() && line[k + 1] == '"') {
        cell += '"';
        ++k;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(std::move(cell));
      cell.clear();
    } else if (c != '\r') {
      cell += c;
    }
  }
  cells.push_back(std::move(cell));
  return cells;
}

std::string quote_csv(const std::string& s) {
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

}  // namespace

std::vector<RunRecord> read_records_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("records: empty input");
  const auto header = split_csv_line(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t k = 0; k < header.size(); ++k) col[header[k]] = k;
  for (const char* required :
       {"algorithm", "task_count", "seed", "dv_total", "energy_total", "response_total", "response_max", "fitness"})
    if (!col.contains(required)) throw std::invalid_argument(std::string("records: missing column ") + required);

  std::vector<RunRecord> records;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size()) throw std::invalid_argument("records: ragged row: " + line);
    RunRecord r;
    r.algorithm = cells[col["algorithm"]];
    r.task_count = std::stoi(cells[col["task_count"]]);
    r.seed = std::stoull(cells[col["seed"]]);
    r.dv_total = std::stod(cells[col["dv_total"]]);
    r.energy_total = std::stod(cells[col["energy_total"]]);
    r.response_total = std::stod(cells[col["response_total"]]);
    r.response_max = std::stod(cells[col["response_max"]]);
    r.fitness = std::stod(cells[col["fitness"]]);
    if (col.contains("wall_time")) r.wall_time = std::stod(cells[col["wall_time"]]);
    if (col.contains("instance_hash")) r.instance_hash = std::stoull(cells[col["instance_hash"]], nullptr, 16);
    records.push_back(std::move(r));
  }
  return records;
}

void write_timings_csv(std::ostream& out, std::span<const RunRecord> records) {
  out << "algorithm,task_count,seed,wall_time\n" << std::setprecision(17);
  for (const RunRecord& r : records)
    out << r.algorithm << ',' << r.task_count << ',' << r.seed << ',' << r.wall_time << '\n';
}

void write_failures_csv(std::ostream& out, std::span<const FailedRun> failures) {
  out << "algorithm,task_count,seed,message\n";
  for (const FailedRun& f : failures)
    out << f.algorithm << ',' << f.task_count << ',' << f.seed << ',' << quote_csv(f.message) << '\n';
}

void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows) {
  out << "algorithm,task_count,metric,count,mean,std,min,max\n" << std::setprecision(17);
  for (const SummaryRow& r : rows)
    out << r.algorithm << ',' << r.task_count << ',' << r.metric << ',' << r.count << ',' << r.mean << ',' << r.stddev
        << ',' << r.min << ',' << r.max << '\n';
}

}  // namespace fogsched
