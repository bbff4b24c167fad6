#include "asmp/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace asmp {

using nlohmann::json;

Scenario Scenario::dynamic_preset() {
  Scenario sc;
  sc.name = "dynamic";
  sc.node_count = 1;
  sc.node.grid = TargetGrid{1.0, 0.2, std::nullopt};
  sc.node.initial_rate_hz = 0.2;
  sc.node.fixed_rate_hz = 0.2;
  sc.node.limits.max_period = kInfinitePeriod;
  sc.node.casa.tolerance = 0.3;
  sc.duration_s = 4950.0;  // 82.5 min
  sc.signal.kind = SignalKind::DynamicTransition;
  sc.signal.dynamic = DynamicTransitionParams{16.0, 43.0, 300.0, 600.0, 0.06, 0.10, 0.01};
  // Deep-shade harvest: keeps the recovery balance meaningful (a strong
  // harvester would make the minimum extension factor collapse to 1).
  sc.harvest.max_power_mw = 500.0;
  sc.harvest.mean_day_power_mw = 0.006;
  sc.harvest.quality_std = 0.0;
  sc.node.ewma_initial_mw = 0.006;
  return sc;
}

Scenario Scenario::open_access_preset(const std::string& trace_path) {
  Scenario sc;
  sc.name = "open-access";
  sc.node_count = 1;
  sc.node.grid = TargetGrid{0.2, 0.4, std::nullopt};
  sc.node.initial_rate_hz = 4.76e-3;
  sc.node.fixed_rate_hz = 4.76e-3;
  sc.node.limits.max_period = 600.0;  // 10 min
  sc.node.casa.tolerance = 0.3;
  sc.duration_s = 86340.0;  // one day of minute data
  sc.signal.kind = SignalKind::CsvTrace;
  sc.signal.csv_path = trace_path;
  sc.harvest.mean_day_power_mw = 30.0;
  sc.harvest.quality_std = 0.02;
  return sc;
}

std::vector<std::string> Scenario::validate() const {
  std::vector<std::string> problems;
  if (node_count < 1) problems.push_back("nodes: count must be >= 1");
  if (!(duration_s > 0.0)) problems.push_back("duration: must be positive");
  if (!node.grid.valid())
    problems.push_back("protocol: grid needs spacing > 0 and sensitivity in (0, 0.5]");
  if (!node.casa.valid()) problems.push_back("protocol: trend tolerance must be in (0, 1)");
  if (!(node.initial_rate_hz > 0.0)) problems.push_back("protocol: initial rate must be positive");
  if (!(node.fixed_rate_hz > 0.0)) problems.push_back("baseline: fixed rate must be positive");
  if (node.limits.max_period <= 0.0) problems.push_back("protocol: max period must be positive");
  if (node.limits.floor_period < 0.0) problems.push_back("protocol: floor period must be >= 0");
  if (energy.initial_mj <= 0.0) problems.push_back("energy: initial charge must be positive");
  if (energy.capacity_mj < energy.initial_mj)
    problems.push_back("energy: capacity below initial charge");
  if (harvest.max_power_mw <= 0.0) problems.push_back("harvest: max power must be positive");
  if (harvest.mean_day_power_mw < 0.0 || harvest.mean_day_power_mw > harvest.max_power_mw)
    problems.push_back("harvest: mean day power outside [0, max]");
  if (harvest.slot_s <= 0.0) problems.push_back("harvest: slot length must be positive");
  if (signal.kind == SignalKind::CsvTrace && signal.csv_path.empty())
    problems.push_back("signal: csv trace requires a path");
  if (signal.kind == SignalKind::DynamicTransition &&
      !(signal.dynamic.min_value < signal.dynamic.max_value))
    problems.push_back("signal: bounds must satisfy min < max");
  for (int n : roleless_nodes)
    if (n < 0 || n >= node_count)
      problems.push_back("nodes: roleless id " + std::to_string(n) + " out of range");
  for (const auto& [from, via] : topology.relay_via) {
    if (from < 0 || from >= node_count || via < 0 || via >= node_count || from == via) {
      problems.push_back("topology: bad relay entry " + std::to_string(from) + " -> " +
                         std::to_string(via));
      continue;
    }
    // the forwarding chain must terminate, not loop
    int cur = from;
    int hops = 0;
    while (topology.relay_via.count(cur) > 0 && hops <= node_count) {
      cur = topology.relay_via.at(cur);
      ++hops;
    }
    if (hops > node_count)
      problems.push_back("topology: relay chain from " + std::to_string(from) +
                         " never reaches the sync");
  }
  if (topology.epoch_s <= 0.0) problems.push_back("topology: epoch must be positive");
  if (topology.delivery_delay_s < 0.0) problems.push_back("topology: delay must be >= 0");
  return problems;
}

namespace {

json limits_to_json(const PeriodLimits& lim) {
  json j;
  j["max_period_s"] = std::isfinite(lim.max_period) ? json(lim.max_period) : json("inf");
  j["floor_period_s"] = lim.floor_period;
  j["event_velocity"] = lim.event_velocity;
  j["alarm_period_s"] = lim.alarm_period;
  return j;
}

void limits_from_json(const json& j, PeriodLimits& lim) {
  if (j.contains("max_period_s")) {
    const auto& v = j["max_period_s"];
    lim.max_period = v.is_string() ? kInfinitePeriod : v.get<double>();
  }
  if (j.contains("floor_period_s")) lim.floor_period = j["floor_period_s"].get<double>();
  if (j.contains("event_velocity")) lim.event_velocity = j["event_velocity"].get<double>();
  if (j.contains("alarm_period_s")) lim.alarm_period = j["alarm_period_s"].get<double>();
}

}  // namespace

std::string Scenario::to_json_text() const {
  json j;
  j["name"] = name;
  j["duration_s"] = duration_s;
  j["seed"] = seed;
  j["verify_server_recompute"] = verify_server_recompute;
  j["start_stagger_s"] = start_stagger_s;

  json nodes;
  nodes["count"] = node_count;
  nodes["roleless"] = roleless_nodes;
  j["nodes"] = nodes;

  json protocol;
  protocol["spacing"] = node.grid.spacing;
  protocol["sensitivity"] = node.grid.sensitivity;
  if (node.grid.event_threshold) protocol["event_threshold"] = *node.grid.event_threshold;
  protocol["initial_rate_hz"] = node.initial_rate_hz;
  protocol["limits"] = limits_to_json(node.limits);
  protocol["casa_tolerance"] = node.casa.tolerance;
  protocol["ewma_weight"] = 0.001;
  protocol["load"] = node.load;
  protocol["emergency_level_mj"] = node.emergency_level_mj;
  protocol["max_outage_s"] = node.max_outage_s;
  protocol["decline_fraction"] = node.decline_fraction;
  protocol["decline_window"] = node.decline_window;
  protocol["hysteresis"] = node.hysteresis;
  protocol["rasa_max_factor"] = node.rasa_max_factor;
  protocol["algorithm"] = to_string(node.algorithm);
  if (node.ewma_initial_mw) protocol["ewma_initial_mw"] = *node.ewma_initial_mw;
  j["protocol"] = protocol;

  json profile;
  profile["sleep_mw"] = node.profile.sleep_mw;
  profile["wake_mw"] = node.profile.wake_mw;
  profile["sense_mw"] = node.profile.sense_mw;
  profile["rx_mw"] = node.profile.rx_mw;
  profile["tx_mw"] = node.profile.tx_mw;
  profile["proc_coeff_a"] = node.profile.proc_coeff_a;
  profile["proc_coeff_b"] = node.profile.proc_coeff_b;
  profile["sense_s"] = node.profile.sense_s;
  profile["proc_s"] = node.profile.proc_s;
  profile["rx_s"] = node.profile.rx_s;
  profile["tx_s"] = node.profile.tx_s;
  j["profile"] = profile;

  json energy_j;
  energy_j["initial_mj"] = energy.initial_mj;
  energy_j["capacity_mj"] = energy.capacity_mj;
  j["energy"] = energy_j;

  json harvest_j;
  harvest_j["max_power_mw"] = harvest.max_power_mw;
  harvest_j["mean_day_power_mw"] = harvest.mean_day_power_mw;
  harvest_j["quality_std"] = harvest.quality_std;
  harvest_j["day_s"] = harvest.day_s;
  harvest_j["night_s"] = harvest.night_s;
  harvest_j["slot_s"] = harvest.slot_s;
  j["harvest"] = harvest_j;

  json signal_j;
  signal_j["kind"] = signal.kind == SignalKind::CsvTrace ? "csv" : "dynamic";
  signal_j["path"] = signal.csv_path;
  signal_j["min"] = signal.dynamic.min_value;
  signal_j["max"] = signal.dynamic.max_value;
  signal_j["segment_min_s"] = signal.dynamic.segment_min_s;
  signal_j["segment_max_s"] = signal.dynamic.segment_max_s;
  signal_j["slope_min"] = signal.dynamic.slope_min;
  signal_j["slope_max"] = signal.dynamic.slope_max;
  signal_j["noise_std"] = signal.dynamic.noise_std;
  signal_j["per_node_variation"] = signal.per_node_variation;
  j["signal"] = signal_j;

  json topo;
  topo["epoch_s"] = topology.epoch_s;
  topo["delivery_delay_s"] = topology.delivery_delay_s;
  json relays = json::object();
  for (const auto& [from, via] : topology.relay_via) relays[std::to_string(from)] = via;
  topo["relays"] = relays;
  j["topology"] = topo;

  json baseline;
  baseline["fixed_rate_hz"] = node.fixed_rate_hz;
  j["baseline"] = baseline;

  return j.dump(2);
}

Scenario Scenario::from_json_text(const std::string& text) {
  json j = json::parse(text);
  Scenario sc;
  if (j.contains("preset")) {
    const std::string p = j["preset"].get<std::string>();
    if (p == "dynamic") sc = dynamic_preset();
    else if (p == "open-access") sc = open_access_preset();
    else throw std::runtime_error("config: unknown preset '" + p + "'");
  }
  if (j.contains("name")) sc.name = j["name"].get<std::string>();
  if (j.contains("duration_s")) sc.duration_s = j["duration_s"].get<double>();
  if (j.contains("seed")) sc.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("verify_server_recompute"))
    sc.verify_server_recompute = j["verify_server_recompute"].get<bool>();
  if (j.contains("start_stagger_s")) sc.start_stagger_s = j["start_stagger_s"].get<double>();

  if (j.contains("nodes")) {
    const auto& n = j["nodes"];
    if (n.contains("count")) sc.node_count = n["count"].get<int>();
    if (n.contains("roleless")) sc.roleless_nodes = n["roleless"].get<std::vector<int>>();
  }
  if (j.contains("protocol")) {
    const auto& p = j["protocol"];
    if (p.contains("spacing")) sc.node.grid.spacing = p["spacing"].get<double>();
    if (p.contains("sensitivity")) sc.node.grid.sensitivity = p["sensitivity"].get<double>();
    if (p.contains("event_threshold"))
      sc.node.grid.event_threshold = p["event_threshold"].get<double>();
    if (p.contains("initial_rate_hz")) sc.node.initial_rate_hz = p["initial_rate_hz"].get<double>();
    if (p.contains("limits")) limits_from_json(p["limits"], sc.node.limits);
    if (p.contains("casa_tolerance")) sc.node.casa.tolerance = p["casa_tolerance"].get<double>();
    if (p.contains("load")) sc.node.load = p["load"].get<double>();
    if (p.contains("emergency_level_mj"))
      sc.node.emergency_level_mj = p["emergency_level_mj"].get<double>();
    if (p.contains("max_outage_s")) sc.node.max_outage_s = p["max_outage_s"].get<double>();
    if (p.contains("decline_fraction"))
      sc.node.decline_fraction = p["decline_fraction"].get<double>();
    if (p.contains("decline_window")) sc.node.decline_window = p["decline_window"].get<int>();
    if (p.contains("hysteresis")) sc.node.hysteresis = p["hysteresis"].get<double>();
    if (p.contains("rasa_max_factor"))
      sc.node.rasa_max_factor = p["rasa_max_factor"].get<long long>();
    if (p.contains("ewma_initial_mw"))
      sc.node.ewma_initial_mw = p["ewma_initial_mw"].get<double>();
    if (p.contains("algorithm")) {
      const auto v = algorithm_from_string(p["algorithm"].get<std::string>());
      if (!v) throw std::runtime_error("config: unknown algorithm");
      sc.node.algorithm = *v;
    }
  }
  if (j.contains("profile")) {
    const auto& p = j["profile"];
    if (p.contains("preset")) {
      const std::string name = p["preset"].get<std::string>();
      if (name != "table4-default")
        throw std::runtime_error("config: unknown profile preset '" + name + "'");
      sc.node.profile = PowerProfile::table4_default();
    }
    auto get = [&](const char* key, double& field) {
      if (p.contains(key)) field = p[key].get<double>();
    };
    get("sleep_mw", sc.node.profile.sleep_mw);
    get("wake_mw", sc.node.profile.wake_mw);
    get("sense_mw", sc.node.profile.sense_mw);
    get("rx_mw", sc.node.profile.rx_mw);
    get("tx_mw", sc.node.profile.tx_mw);
    get("proc_coeff_a", sc.node.profile.proc_coeff_a);
    get("proc_coeff_b", sc.node.profile.proc_coeff_b);
    get("sense_s", sc.node.profile.sense_s);
    get("proc_s", sc.node.profile.proc_s);
    get("rx_s", sc.node.profile.rx_s);
    get("tx_s", sc.node.profile.tx_s);
  }
  if (j.contains("energy")) {
    const auto& e = j["energy"];
    if (e.contains("initial_mj")) sc.energy.initial_mj = e["initial_mj"].get<double>();
    if (e.contains("capacity_mj")) sc.energy.capacity_mj = e["capacity_mj"].get<double>();
  }
  if (j.contains("harvest")) {
    const auto& h = j["harvest"];
    if (h.contains("max_power_mw")) sc.harvest.max_power_mw = h["max_power_mw"].get<double>();
    if (h.contains("mean_day_power_mw"))
      sc.harvest.mean_day_power_mw = h["mean_day_power_mw"].get<double>();
    if (h.contains("quality_std")) sc.harvest.quality_std = h["quality_std"].get<double>();
    if (h.contains("day_s")) sc.harvest.day_s = h["day_s"].get<double>();
    if (h.contains("night_s")) sc.harvest.night_s = h["night_s"].get<double>();
    if (h.contains("slot_s")) sc.harvest.slot_s = h["slot_s"].get<double>();
    if (h.contains("trace")) sc.harvest.trace = load_harvest_trace(h["trace"].get<std::string>());
  }
  if (j.contains("signal")) {
    const auto& s = j["signal"];
    if (s.contains("kind"))
      sc.signal.kind = s["kind"].get<std::string>() == "csv" ? SignalKind::CsvTrace
                                                             : SignalKind::DynamicTransition;
    if (s.contains("path")) sc.signal.csv_path = s["path"].get<std::string>();
    if (s.contains("min")) sc.signal.dynamic.min_value = s["min"].get<double>();
    if (s.contains("max")) sc.signal.dynamic.max_value = s["max"].get<double>();
    if (s.contains("segment_min_s"))
      sc.signal.dynamic.segment_min_s = s["segment_min_s"].get<double>();
    if (s.contains("segment_max_s"))
      sc.signal.dynamic.segment_max_s = s["segment_max_s"].get<double>();
    if (s.contains("slope_min")) sc.signal.dynamic.slope_min = s["slope_min"].get<double>();
    if (s.contains("slope_max")) sc.signal.dynamic.slope_max = s["slope_max"].get<double>();
    if (s.contains("noise_std")) sc.signal.dynamic.noise_std = s["noise_std"].get<double>();
    if (s.contains("per_node_variation"))
      sc.signal.per_node_variation = s["per_node_variation"].get<bool>();
  }
  if (j.contains("topology")) {
    const auto& t = j["topology"];
    if (t.contains("epoch_s")) sc.topology.epoch_s = t["epoch_s"].get<double>();
    if (t.contains("delivery_delay_s"))
      sc.topology.delivery_delay_s = t["delivery_delay_s"].get<double>();
    if (t.contains("relays"))
      for (const auto& [from, via] : t["relays"].items())
        sc.topology.relay_via[std::stoi(from)] = via.get<int>();
  }
  if (j.contains("baseline") && j["baseline"].contains("fixed_rate_hz"))
    sc.node.fixed_rate_hz = j["baseline"]["fixed_rate_hz"].get<double>();
  return sc;
}

Scenario Scenario::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

std::uint64_t Scenario::config_hash() const {
  // FNV-1a over the canonical dump.
  const std::string text = to_json_text();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace asmp
