#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "asmp/scenario.hpp"
#include "asmp/server_plane.hpp"

namespace asmp {

enum class EventKind : int { Wake = 0, PacketDelivery = 1, RoleRotation = 2 };

// Flattened per-wake log row.
struct TraceRecord {
  double time_s = 0.0;
  int node = 0;
  NodeClass node_class = NodeClass::A;
  NodeRole role = NodeRole::Edge;
  SamplingCondition condition = SamplingCondition::Stable;
  std::string class_info;
  double value = 0.0;
  double target = 0.0;
  double period_next_s = 0.0;
  double remaining_mj = 0.0;
  double consumed_mj = 0.0;
  double harvested_mj = 0.0;
  double quality = 0.0;
  bool alarm = false;
  bool bootstrap = false;
};

struct NodeSummary {
  EnergyLedger ledger;
  OperationTally tally;
  NodeClass final_class = NodeClass::A;
  std::uint64_t samples = 0;
  std::uint64_t skips = 0;                 // trend-skip announcements
  std::uint64_t extension_packets = 0;     // recovery announcements (factor >= 2)
  std::uint64_t announced_fills = 0;       // sum of factor - 1
};

struct RunResult {
  CollectedPlane plane{0.0};
  std::map<int, NodeSummary> nodes;
  std::vector<TraceRecord> trace;
  QosMetrics metrics;
  std::vector<double> server_arrivals;
  double interarrival_cv = 0.0;  // dispersion of packet arrivals at the server
  std::uint64_t decisions = 0;

  void write_trace_csv(std::ostream& out) const;
};

// Round-robin duty rotation over the cluster members; dead members are
// skipped. Returns the member index holding the sync duty for this epoch,
// or -1 when nobody is left.
int rotate_roles(const std::vector<bool>& alive_members, std::uint64_t epoch);

// Execute a scenario. Throws std::invalid_argument listing every validation
// problem; the result is reproducible bit-for-bit for a given scenario.
RunResult run(const Scenario& scenario);

}  // namespace asmp
