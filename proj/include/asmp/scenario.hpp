#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "asmp/harvest_model.hpp"
#include "asmp/node.hpp"
#include "asmp/signal_source.hpp"

namespace asmp {

enum class SignalKind { DynamicTransition, CsvTrace };

struct SignalSpec {
  SignalKind kind = SignalKind::DynamicTransition;
  DynamicTransitionParams dynamic;
  std::string csv_path;
  bool per_node_variation = true;  // distinct waveform per node (seed-mixed)
};

struct TopologySpec {
  double epoch_s = 600.0;          // collection-duty rotation period
  double delivery_delay_s = 0.0;   // per hop
  std::map<int, int> relay_via;    // node -> relay it forwards through
};

struct EnergySpec {
  double initial_mj = 1.332e8;
  double capacity_mj = 1.332e8;
};

// A complete run description. One cluster; the sync duty rotates round-robin.
struct Scenario {
  std::string name = "custom";
  int node_count = 1;
  NodeConfig node;  // template applied to every node
  EnergySpec energy;
  HarvestConfig harvest;
  SignalSpec signal;
  TopologySpec topology;
  double duration_s = 4950.0;
  std::uint64_t seed = 1;
  double start_stagger_s = 0.0;        // max random offset of the first wake
  std::vector<int> roleless_nodes;     // parked in class C for the whole run
  bool verify_server_recompute = true;

  // All problems at once; empty means runnable.
  std::vector<std::string> validate() const;

  static Scenario dynamic_preset();
  static Scenario open_access_preset(const std::string& trace_path = "");

  static Scenario from_json_file(const std::string& path);
  static Scenario from_json_text(const std::string& text);
  std::string to_json_text() const;
  std::uint64_t config_hash() const;
};

}  // namespace asmp
