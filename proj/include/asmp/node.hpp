#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <string>

#include "asmp/casa.hpp"
#include "asmp/energy_model.hpp"
#include "asmp/mvp_asa.hpp"
#include "asmp/rasa.hpp"
#include "asmp/signal_plane.hpp"

namespace asmp {

// Protocol class of a node: plain adaptive sampling (A), with trend skipping
// (B1), with energy recovery (B2), parked without a duty (C), or exhausted.
enum class NodeClass { A, B1, B2, C, Dead };

const char* to_string(NodeClass c);

enum class ClassInfoKind { Plain, CasaSkip, RasaFactor };

// Which sampling logic a run exercises; Asmp switches classes by energy.
enum class AlgorithmVariant { Fixed, Asa, AsaCasa, AsaRasa, Asmp };

const char* to_string(AlgorithmVariant v);
std::optional<AlgorithmVariant> algorithm_from_string(const std::string& name);

struct NodeConfig {
  TargetGrid grid;
  CasaConfig casa;
  PowerProfile profile;
  PeriodLimits limits;
  double initial_rate_hz = 0.2;
  double load = 1.0;              // processing load during a wake
  double emergency_level_mj = 0;  // <= 0: derived from max_outage_s
  double max_outage_s = 43200.0;  // longest zero-harvest stretch to survive
  double decline_fraction = 0.8;  // B1 entry: remaining below this fraction of capacity...
  int decline_window = 10;        // ...and falling across this many wakes
  double hysteresis = 1.1;        // B2 exits only above hysteresis * L
  AlgorithmVariant algorithm = AlgorithmVariant::Asmp;
  double fixed_rate_hz = 0.2;     // baseline rate
  long long rasa_max_factor = 10; // extension cap when the balance is unsatisfiable
  double harvest_max_mw = 500.0;  // converts reported quality to power
  std::optional<double> ewma_initial_mw;  // unset: first observation seeds the mean
  bool has_role = true;

  double emergency_level() const;
};

// One node-to-server transmission. Carries the sample plus everything the
// server needs to mirror the node's estimate and schedule fills.
struct NodePacket {
  int node = 0;
  Sample sample;
  double nearest_target = 0.0;
  SamplingCondition condition = SamplingCondition::Stable;
  ClassInfoKind info = ClassInfoKind::Plain;
  long long rasa_factor = 0;            // N, set when info == RasaFactor
  double velocity_next = 0.0;           // predicted velocity (advanced on a skip)
  double velocity_post = 0.0;           // mean of current and predicted velocity
  double asa_period = 0.0;              // this wake's base period estimate
  std::optional<double> correction_delay;  // fill delay for an error sample
  double predict_delay = 0.0;           // fill delay for a skip
  double next_expected_delay = 0.0;     // when the next transmission is due
  double remaining_mj = 0.0;
  double harvest_quality = 0.0;
  bool alarm = false;
  NodeClass node_class = NodeClass::A;
  bool bootstrap = false;

  std::string class_info_string() const;
};

// Class selection. Losing the duty wins, then exhaustion, then the emergency
// level (with hysteresis against flapping out of B2), then the decline
// trigger towards B1.
NodeClass classify(double remaining_mj, double emergency_mj, bool decline_trigger,
                   bool has_role, NodeClass previous, double hysteresis);

// One sensor node: filter state, energy account, class machine.
class Node {
 public:
  Node(int id, NodeConfig cfg, EnergyLedger ledger);

  struct StepResult {
    std::optional<NodePacket> packet;
    std::optional<double> next_wake;  // absent: no further wakes
  };

  // One wake: charge the elapsed sleep and this wake's operations, accrue the
  // held harvest, update the harvest average, reclassify, run the sampling
  // logic of the class, emit the packet and the next wake time.
  StepResult step(double wake_time, double signal_value, double harvest_quality);

  // Account the tail of the scenario: sleep and harvest from the last wake
  // (or scenario start for a parked node) up to end_time.
  void finalize(double end_time);

  // Forwarding duties, charged per passed packet.
  void charge_relay_forward();
  void charge_sync_forward();

  int id() const { return id_; }
  const NodeConfig& config() const { return cfg_; }
  const EnergyLedger& ledger() const { return ledger_; }
  const OperationTally& tally() const { return tally_; }
  const AsaState& filter() const { return asa_; }
  const EwmaTracker& harvest_average() const { return ewma_; }
  NodeClass node_class() const { return class_; }
  std::uint64_t samples_emitted() const { return sample_index_; }
  NodeRole role() const { return role_; }
  void set_role(NodeRole role) { role_ = role; }
  bool alive() const { return ledger_.alive; }

 private:
  bool decline_trigger() const;
  NodeClass resolve_class(bool trigger) const;

  int id_;
  NodeConfig cfg_;
  EnergyLedger ledger_;
  OperationTally tally_;
  AsaState asa_;
  EwmaTracker ewma_;
  NodeClass class_ = NodeClass::A;
  NodeRole role_ = NodeRole::Edge;
  double last_wake_ = 0.0;
  double last_active_s_ = 0.0;
  double held_quality_ = 0.0;
  bool started_ = false;
  bool ewma_seeded_ = false;
  std::uint64_t sample_index_ = 0;
  std::deque<double> remaining_history_;
};

}  // namespace asmp
