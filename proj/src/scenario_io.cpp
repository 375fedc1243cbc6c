#include "fogsched/scenario_io.hpp"

#include <fstream>
#include <stdexcept>

namespace fogsched {

using nlohmann::json;

namespace {

json range_json(const Range& r) { return json::array({r.min, r.max}); }

Range range_from(const json& j) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("range must be a [min, max] array");
  return {j[0].get<double>(), j[1].get<double>()};
}

template <typename T>
void read_opt(const json& doc, const char* key, T& out) {
  if (auto it = doc.find(key); it != doc.end()) out = it->get<T>();
}

void read_opt_range(const json& doc, const char* key, Range& out) {
  if (auto it = doc.find(key); it != doc.end()) out = range_from(*it);
}

}  // namespace

json config_to_json(const ScenarioConfig& c) {
  return json{
      {"n_tasks", c.n_tasks},
      {"n_nodes", c.n_nodes},
      {"n_devices", c.n_devices},
      {"mips_range", range_json(c.mips_range)},
      {"active_power_range", range_json(c.active_power_range)},
      {"idle_ratio_range", range_json(c.idle_ratio_range)},
      {"deadline_range", range_json(c.deadline_range)},
      {"task_length_range", range_json(c.task_length_range)},
      {"data_size_range", range_json(c.data_size_range)},
      {"traffic_range", range_json(c.traffic_range)},
      {"bandwidth_range", range_json(c.bandwidth_range)},
      {"propagation_range", range_json(c.propagation_range)},
      {"arrival_range", range_json(c.arrival_range)},
      {"alpha", c.alpha},
      {"beta", c.beta},
      {"rng_seed", c.rng_seed},
  };
}

ScenarioConfig config_from_json(const json& doc) {
  ScenarioConfig c;
  read_opt(doc, "n_tasks", c.n_tasks);
  read_opt(doc, "n_nodes", c.n_nodes);
  read_opt(doc, "n_devices", c.n_devices);
  read_opt_range(doc, "mips_range", c.mips_range);
  read_opt_range(doc, "active_power_range", c.active_power_range);
  read_opt_range(doc, "idle_ratio_range", c.idle_ratio_range);
  read_opt_range(doc, "deadline_range", c.deadline_range);
  read_opt_range(doc, "task_length_range", c.task_length_range);
  read_opt_range(doc, "data_size_range", c.data_size_range);
  read_opt_range(doc, "traffic_range", c.traffic_range);
  read_opt_range(doc, "bandwidth_range", c.bandwidth_range);
  read_opt_range(doc, "propagation_range", c.propagation_range);
  read_opt_range(doc, "arrival_range", c.arrival_range);
  read_opt(doc, "alpha", c.alpha);
  read_opt(doc, "beta", c.beta);
  read_opt(doc, "rng_seed", c.rng_seed);
  return c;
}

json scenario_to_json(const Instance& instance) {
  json doc;
  doc["config"] = instance.config ? config_to_json(*instance.config) : json(nullptr);

  json nodes = json::array();
  for (const FogNode& n : instance.topology.nodes) {
    nodes.push_back({{"id", n.id},
                     {"mips", n.mips},
                     {"active_power", n.active_power},
                     {"idle_power", n.idle_power},
                     {"alpha", n.alpha},
                     {"beta", n.beta}});
  }
  doc["nodes"] = std::move(nodes);

  json links = json::array();
  for (const Link& l : instance.topology.links) {
    links.push_back({{"endpoints", {l.endpoints[0], l.endpoints[1]}},
                     {"bandwidth", l.bandwidth},
                     {"propagation_delay", l.propagation_delay},
                     {"traffic_load", l.traffic_load},
                     {"uplink", l.uplink}});
  }
  doc["links"] = std::move(links);

  json tasks = json::array();
  for (const Task& t : instance.tasks) {
    tasks.push_back({{"id", t.id},
                     {"length", t.length},
                     {"data_size", t.data_size},
                     {"deadline", t.deadline},
                     {"arrival_time", t.arrival_time},
                     {"source_device", t.source_device}});
  }
  doc["tasks"] = std::move(tasks);

  json gateways = json::array();
  for (std::size_t d = 0; d < instance.topology.device_gateways.size(); ++d)
    gateways.push_back({{"device", d}, {"node", instance.topology.device_gateways[d]}});
  doc["gateways"] = std::move(gateways);
  return doc;
}

Instance scenario_from_json(const json& doc) {
  for (const char* key : {"nodes", "links", "tasks", "gateways"})
    if (!doc.contains(key) || !doc[key].is_array())
      throw std::invalid_argument(std::string("scenario: missing array \"") + key + "\"");

  Instance inst;
  if (auto it = doc.find("config"); it != doc.end() && !it->is_null()) inst.config = config_from_json(*it);

  for (const json& j : doc["nodes"]) {
    FogNode n;
    n.id = j.at("id").get<int>();
    n.mips = j.at("mips").get<double>();
    n.active_power = j.at("active_power").get<double>();
    n.idle_power = j.at("idle_power").get<double>();
    read_opt(j, "alpha", n.alpha);
    read_opt(j, "beta", n.beta);
    inst.topology.nodes.push_back(n);
  }
  for (const json& j : doc["links"]) {
    Link l;
    const json& ends = j.at("endpoints");
    if (!ends.is_array() || ends.size() != 2) throw std::invalid_argument("link endpoints must be a pair");
    l.endpoints = {ends[0].get<int>(), ends[1].get<int>()};
    l.bandwidth = j.at("bandwidth").get<double>();
    l.propagation_delay = j.at("propagation_delay").get<double>();
    read_opt(j, "traffic_load", l.traffic_load);
    read_opt(j, "uplink", l.uplink);
    inst.topology.links.push_back(l);
  }
  for (const json& j : doc["tasks"]) {
    Task t;
    t.id = j.at("id").get<int>();
    t.length = j.at("length").get<double>();
    t.data_size = j.at("data_size").get<double>();
    t.deadline = j.at("deadline").get<double>();
    read_opt(j, "arrival_time", t.arrival_time);
    t.source_device = j.at("source_device").get<int>();
    inst.tasks.push_back(t);
  }
  const json& gws = doc["gateways"];
  inst.topology.device_gateways.assign(gws.size(), -1);
  for (const json& j : gws) {
    const auto d = j.at("device").get<std::size_t>();
    if (d >= gws.size()) throw std::invalid_argument("gateway device index out of range");
    inst.topology.device_gateways[d] = j.at("node").get<int>();
  }
  return inst;
}

void save_scenario(const Instance& instance, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << scenario_to_json(instance).dump(2) << '\n';
}

Instance load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return scenario_from_json(json::parse(in));
}

std::uint64_t instance_hash(const Instance& instance) {
  const std::string bytes = scenario_to_json(instance).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace fogsched
