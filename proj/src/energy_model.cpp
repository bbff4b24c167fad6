#include "asmp/energy_model.hpp"

#include <stdexcept>

namespace asmp {

const char* to_string(Operation op) {
  switch (op) {
    case Operation::Sleep:      return "sleep";
    case Operation::Wake:       return "wake";
    case Operation::Processing: return "processing";
    case Operation::Sensing:    return "sensing";
    case Operation::Receive:    return "receive";
    case Operation::Transmit:   return "transmit";
  }
  return "?";
}

const char* to_string(NodeRole role) {
  switch (role) {
    case NodeRole::Edge:  return "edge";
    case NodeRole::Relay: return "relay";
    case NodeRole::Sync:  return "sync";
  }
  return "?";
}

EnergyLedger EnergyLedger::with_charge(double initial_mj, double capacity_mj) {
  EnergyLedger led;
  led.initial_mj = initial_mj;
  led.capacity_mj = capacity_mj;
  led.remaining_mj = initial_mj;
  return led;
}

void accumulate(OperationTally& tally, EnergyLedger& ledger, Operation op,
                double duration_s, double power_mw) {
  if (duration_s < 0.0) throw std::invalid_argument("accumulate: negative duration");
  const int idx = static_cast<int>(op);
  tally.count[idx] += 1;
  tally.seconds[idx] += duration_s;
  if (!ledger.alive) return;

  double energy = power_mw * duration_s;
  if (energy >= ledger.remaining_mj) {
    energy = ledger.remaining_mj;  // drain to the floor, then die
    ledger.alive = false;
  }
  ledger.consumed_by_op[idx] += energy;
  ledger.consumed_mj += energy;
  ledger.remaining_mj = ledger.initial_mj - ledger.consumed_mj + ledger.harvested_mj;
}

double harvest_into(EnergyLedger& ledger, double energy_mj) {
  if (energy_mj < 0.0) throw std::invalid_argument("harvest_into: negative energy");
  if (!ledger.alive) return 0.0;
  double room = ledger.capacity_mj - ledger.remaining_mj;
  if (room < 0.0) room = 0.0;
  const double absorbed = energy_mj < room ? energy_mj : room;
  ledger.harvested_mj += absorbed;
  ledger.remaining_mj = ledger.initial_mj - ledger.consumed_mj + ledger.harvested_mj;
  return absorbed;
}

double sampling_energy(const PowerProfile& p, double load, double sleep_s) {
  return p.wake_mw * p.wake_s() + p.sense_mw * p.sense_s +
         p.processing_power(load) * p.proc_s + p.tx_mw * p.tx_s +
         p.sleep_mw * sleep_s;
}

double mode_energy(Mode mode, const PowerProfile& p, double load, double sleep_s) {
  const double e_sleep = p.sleep_mw * sleep_s;
  switch (mode) {
    case Mode::Sleep:
      return e_sleep;
    case Mode::Edge:
      return sampling_energy(p, load, sleep_s);
    case Mode::RelaySampling:
    case Mode::SyncSampling: {
      const double wake = p.sense_s + p.rx_s + p.proc_s + p.tx_s;
      return p.wake_mw * wake + p.sense_mw * p.sense_s + p.rx_mw * p.rx_s +
             p.processing_power(load) * p.proc_s + p.tx_mw * p.tx_s + e_sleep;
    }
    case Mode::RelayForwardOnly:
      return p.rx_mw * p.rx_s + p.tx_mw * p.tx_s + e_sleep;
    case Mode::SyncForwardOnly: {
      const double wake = p.rx_s + p.proc_s + p.tx_s;
      return p.wake_mw * wake + p.rx_mw * p.rx_s +
             p.processing_power(load) * p.proc_s + p.tx_mw * p.tx_s + e_sleep;
    }
  }
  return 0.0;
}

double sustainable_time(double remaining_mj, double rate_hz, double per_sample_mj,
                        NodeRole role, int cluster_size) {
  if (!(rate_hz > 0.0) || !(per_sample_mj > 0.0))
    throw std::invalid_argument("sustainable_time: rate and per-sample energy must be positive");
  double multiplier = 1.0;
  if (role == NodeRole::Relay) multiplier = 2.0;
  if (role == NodeRole::Sync) multiplier = static_cast<double>(cluster_size);
  return remaining_mj / (multiplier * rate_hz * per_sample_mj);
}

double energy_threshold(double max_outage_s, double op_mode_multiplier, double rate_hz,
                        double per_sample_mj) {
  return max_outage_s * op_mode_multiplier * rate_hz * per_sample_mj;
}

}  // namespace asmp
