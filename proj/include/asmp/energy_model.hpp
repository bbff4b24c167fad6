#pragma once

#include <array>
#include <cstdint>

namespace asmp {

// Per-operation power draws and durations of one node design. Units are
// milliwatts and seconds throughout; energies come out in millijoules.
struct PowerProfile {
  double sleep_mw = 3e-4;  // everything idle
  double wake_mw = 3.5;    // controller active, drawn across the wake envelope
  double sense_mw = 7.5;   // sensor read surcharge
  double rx_mw = 9.2;      // radio receive surcharge
  double tx_mw = 11.6;     // radio transmit surcharge
  double proc_coeff_a = 0.5;  // processing power = a * load + b
  double proc_coeff_b = 2.7;
  double sense_s = 1.4e-3;
  double proc_s = 10e-3;
  double rx_s = 2.5e-3;
  double tx_s = 2.5e-3;
  int cluster_size = 1;            // nodes feeding one collection point
  double op_mode_multiplier = 1.0; // 1 sampling-only, 2 relaying, C collecting

  double processing_power(double load) const { return proc_coeff_a * load + proc_coeff_b; }
  // Wake envelope of a plain sampling cycle: sense, process, transmit.
  double wake_s() const { return sense_s + proc_s + tx_s; }

  static PowerProfile table4_default() { return PowerProfile{}; }
};

enum class Operation : int { Sleep = 0, Wake, Processing, Sensing, Receive, Transmit };
inline constexpr int kOperationCount = 6;

const char* to_string(Operation op);

// Count and accumulated duration of every operation a node has performed.
struct OperationTally {
  std::array<std::uint64_t, kOperationCount> count{};
  std::array<double, kOperationCount> seconds{};

  // Total modeled time: sleep plus wake envelopes (concurrent surcharges such
  // as sensing overlap the wake and do not add to it).
  double total_time_s() const {
    return seconds[static_cast<int>(Operation::Sleep)] +
           seconds[static_cast<int>(Operation::Wake)];
  }
};

// Energy account of one node. `remaining_mj` is always the exact identity
// initial - consumed + harvested; the capacity bound is enforced by refusing
// harvest that would not fit, and the zero floor by truncating the draw that
// would cross it (the node dies there).
struct EnergyLedger {
  double initial_mj = 1.332e8;   // 5000 mAh at 7.4 V
  double capacity_mj = 1.332e8;
  double consumed_mj = 0.0;
  double harvested_mj = 0.0;
  double remaining_mj = 1.332e8;
  std::array<double, kOperationCount> consumed_by_op{};
  bool alive = true;

  static EnergyLedger with_charge(double initial_mj, double capacity_mj);
};

// Record one operation: bump the tally, charge power * duration to the
// matching category and to the consumed total, refresh the remaining energy.
void accumulate(OperationTally& tally, EnergyLedger& ledger, Operation op,
                double duration_s, double power_mw);

// Credit harvested energy, dropping whatever the battery cannot absorb.
// Returns the amount actually stored.
double harvest_into(EnergyLedger& ledger, double energy_mj);

// Energy of one complete sampling cycle: wake envelope, sensing, processing,
// transmission and the trailing sleep.
double sampling_energy(const PowerProfile& profile, double load, double sleep_s);

enum class Mode {
  Sleep,            // no duty at all
  Edge,             // sample and transmit
  RelayForwardOnly, // pass one packet along: receive + transmit
  RelaySampling,    // own sample plus a receive in the same wake
  SyncSampling,     // collection point, own sample included
  SyncForwardOnly,  // collection point, pass-through wake
};

double mode_energy(Mode mode, const PowerProfile& profile, double load, double sleep_s);

enum class NodeRole { Edge, Relay, Sync };

const char* to_string(NodeRole role);

// Remaining lifetime at the current rate: remaining / (m * rate * per-sample
// energy) with m = 1 for edge, 2 for relay, cluster size for sync duty.
double sustainable_time(double remaining_mj, double rate_hz, double per_sample_mj,
                        NodeRole role, int cluster_size);

// Minimum emergency energy level: surviving the longest harvest outage at the
// given rate and duty multiplier.
double energy_threshold(double max_outage_s, double op_mode_multiplier, double rate_hz,
                        double per_sample_mj);

}  // namespace asmp
