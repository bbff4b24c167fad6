#include "asmp/node.hpp"

#include <cmath>
#include <stdexcept>

namespace asmp {

const char* to_string(NodeClass c) {
  switch (c) {
    case NodeClass::A:    return "A";
    case NodeClass::B1:   return "B1";
    case NodeClass::B2:   return "B2";
    case NodeClass::C:    return "C";
    case NodeClass::Dead: return "dead";
  }
  return "?";
}

const char* to_string(AlgorithmVariant v) {
  switch (v) {
    case AlgorithmVariant::Fixed:   return "fixed";
    case AlgorithmVariant::Asa:     return "asa";
    case AlgorithmVariant::AsaCasa: return "asa-casa";
    case AlgorithmVariant::AsaRasa: return "asa-rasa";
    case AlgorithmVariant::Asmp:    return "asmp";
  }
  return "?";
}

std::optional<AlgorithmVariant> algorithm_from_string(const std::string& name) {
  if (name == "fixed") return AlgorithmVariant::Fixed;
  if (name == "asa") return AlgorithmVariant::Asa;
  if (name == "asa-casa") return AlgorithmVariant::AsaCasa;
  if (name == "asa-rasa") return AlgorithmVariant::AsaRasa;
  if (name == "asmp") return AlgorithmVariant::Asmp;
  return std::nullopt;
}

double NodeConfig::emergency_level() const {
  if (emergency_level_mj > 0.0) return emergency_level_mj;
  const double nominal_sleep =
      initial_rate_hz > 0.0 ? 1.0 / initial_rate_hz - profile.wake_s() : 0.0;
  const double per_sample =
      sampling_energy(profile, load, nominal_sleep > 0.0 ? nominal_sleep : 0.0);
  return energy_threshold(max_outage_s, profile.op_mode_multiplier, initial_rate_hz,
                          per_sample);
}

std::string NodePacket::class_info_string() const {
  switch (info) {
    case ClassInfoKind::Plain:      return "A";
    case ClassInfoKind::CasaSkip:   return "1";
    case ClassInfoKind::RasaFactor: return std::to_string(rasa_factor);
  }
  return "?";
}

NodeClass classify(double remaining_mj, double emergency_mj, bool decline_trigger,
                   bool has_role, NodeClass previous, double hysteresis) {
  if (previous == NodeClass::Dead || remaining_mj <= 0.0) return NodeClass::Dead;
  if (!has_role) return NodeClass::C;
  if (remaining_mj < emergency_mj) return NodeClass::B2;
  if (previous == NodeClass::B2 && remaining_mj < hysteresis * emergency_mj)
    return NodeClass::B2;
  if (decline_trigger) return NodeClass::B1;
  return NodeClass::A;
}

Node::Node(int id, NodeConfig cfg, EnergyLedger ledger)
    : id_(id),
      cfg_(std::move(cfg)),
      ledger_(ledger),
      asa_(AsaState::with_initial_rate(
          cfg_.algorithm == AlgorithmVariant::Fixed ? cfg_.fixed_rate_hz
                                                    : cfg_.initial_rate_hz)) {
  if (!cfg_.grid.valid()) throw std::invalid_argument("Node: invalid target grid");
  if (!cfg_.casa.valid()) throw std::invalid_argument("Node: invalid trend tolerance");
  ewma_.weight = 0.001;
  if (!cfg_.has_role) class_ = NodeClass::C;
}

bool Node::decline_trigger() const {
  if (static_cast<int>(remaining_history_.size()) <= cfg_.decline_window) return false;
  const double now = remaining_history_.back();
  const double then = remaining_history_.front();
  return now < cfg_.decline_fraction * ledger_.capacity_mj && now < then;
}

NodeClass Node::resolve_class(bool trigger) const {
  switch (cfg_.algorithm) {
    case AlgorithmVariant::Fixed:
    case AlgorithmVariant::Asa:
      return ledger_.alive ? NodeClass::A : NodeClass::Dead;
    case AlgorithmVariant::AsaCasa:
      return ledger_.alive ? NodeClass::B1 : NodeClass::Dead;
    case AlgorithmVariant::AsaRasa:
      return ledger_.alive ? NodeClass::B2 : NodeClass::Dead;
    case AlgorithmVariant::Asmp:
      return classify(ledger_.remaining_mj, cfg_.emergency_level(), trigger,
                      cfg_.has_role, class_, cfg_.hysteresis);
  }
  return NodeClass::Dead;
}

Node::StepResult Node::step(double wake_time, double signal_value,
                            double harvest_quality) {
  if (!ledger_.alive || class_ == NodeClass::C) return {};
  if (started_ && wake_time <= last_wake_)
    throw std::logic_error("Node::step: wake times must increase");

  // Close out the previous interval: harvest held since the last wake, then
  // the sleep portion of the elapsed period.
  if (started_) {
    const double gap = wake_time - last_wake_;
    harvest_into(ledger_, held_quality_ * cfg_.harvest_max_mw * gap);
    double sleep_s = gap - last_active_s_;
    if (sleep_s < 0.0) sleep_s = 0.0;
    accumulate(tally_, ledger_, Operation::Sleep, sleep_s, cfg_.profile.sleep_mw);
  }

  // This wake's own sampling cycle.
  const PowerProfile& p = cfg_.profile;
  accumulate(tally_, ledger_, Operation::Wake, p.wake_s(), p.wake_mw);
  accumulate(tally_, ledger_, Operation::Sensing, p.sense_s, p.sense_mw);
  accumulate(tally_, ledger_, Operation::Processing, p.proc_s, p.processing_power(cfg_.load));
  accumulate(tally_, ledger_, Operation::Transmit, p.tx_s, p.tx_mw);
  last_active_s_ = p.wake_s();
  started_ = true;
  last_wake_ = wake_time;
  held_quality_ = harvest_quality;

  const double inst_power = harvest_quality * cfg_.harvest_max_mw;
  if (!ewma_seeded_) {
    ewma_.mean_mw = cfg_.ewma_initial_mw ? *cfg_.ewma_initial_mw : inst_power;
    ewma_seeded_ = true;
  } else {
    ewma_ = ewma_update(ewma_, inst_power);
  }

  remaining_history_.push_back(ledger_.remaining_mj);
  while (static_cast<int>(remaining_history_.size()) > cfg_.decline_window + 1)
    remaining_history_.pop_front();

  if (!ledger_.alive) {
    class_ = NodeClass::Dead;
    return {};
  }
  class_ = resolve_class(decline_trigger());

  Sample sample{sample_index_++, wake_time, signal_value};
  NodePacket pkt;
  pkt.node = id_;
  pkt.sample = sample;
  pkt.remaining_mj = ledger_.remaining_mj;
  pkt.harvest_quality = harvest_quality;
  pkt.node_class = class_;

  double period;
  if (cfg_.algorithm == AlgorithmVariant::Fixed) {
    period = 1.0 / cfg_.fixed_rate_hz;
    pkt.nearest_target = quantize(signal_value, cfg_.grid).nearest;
    pkt.asa_period = period;
    pkt.next_expected_delay = period;
  } else {
    const bool was_bootstrap = !asa_.bootstrapped();
    const RateDecision decision = asa_step(asa_, sample, cfg_.grid, cfg_.limits);
    pkt.bootstrap = was_bootstrap;
    pkt.condition = decision.condition;
    pkt.asa_period = decision.period;
    pkt.correction_delay = decision.correction_delay;
    pkt.velocity_post = asa_.velocity.post();
    pkt.nearest_target = quantize(signal_value, cfg_.grid).nearest;
    period = decision.period;

    if (!decision.event_imminent && !was_bootstrap) {
      if (class_ == NodeClass::B1) {
        const CasaDecision skip =
            casa_step(asa_, decision, cfg_.casa, cfg_.grid, cfg_.limits, signal_value);
        if (skip.skip) {
          apply_casa_skip(asa_, skip);
          period = skip.period;
          pkt.info = ClassInfoKind::CasaSkip;
          pkt.predict_delay = skip.predict_delay;
        }
      } else if (class_ == NodeClass::B2) {
        const RasaDecision ext =
            rasa_step(decision, asa_, ewma_, cfg_.profile, cfg_.load, cfg_.grid,
                      cfg_.limits, signal_value, cfg_.rasa_max_factor);
        if (ext.factor >= 2) {
          apply_rasa_extension(asa_, ext);
          period = ext.period;
          pkt.info = ClassInfoKind::RasaFactor;
          pkt.rasa_factor = ext.factor;
        }
        if (ext.event_imminent) pkt.alarm = true;
      }
    }
    if (decision.event_imminent) pkt.alarm = true;
    pkt.velocity_next = asa_.velocity.next;
  }

  // Alarm pin: once the signal crosses the event threshold the node reports
  // at its minimum period regardless of the estimate.
  if (cfg_.grid.event_threshold && signal_value >= *cfg_.grid.event_threshold) {
    pkt.alarm = true;
    period = cfg_.limits.floor_period > 0.0 ? cfg_.limits.floor_period
                                            : cfg_.limits.alarm_period;
    asa_.rate = 1.0 / period;
  }

  pkt.next_expected_delay = period;

  StepResult out;
  out.packet = pkt;
  if (std::isfinite(period)) out.next_wake = wake_time + period;
  return out;
}

void Node::finalize(double end_time) {
  if (!ledger_.alive) return;
  const double from = started_ ? last_wake_ : 0.0;
  if (end_time <= from) return;
  const double gap = end_time - from;
  if (started_) harvest_into(ledger_, held_quality_ * cfg_.harvest_max_mw * gap);
  double sleep_s = gap - (started_ ? last_active_s_ : 0.0);
  if (sleep_s < 0.0) sleep_s = 0.0;
  accumulate(tally_, ledger_, Operation::Sleep, sleep_s, cfg_.profile.sleep_mw);
  last_active_s_ = 0.0;
  last_wake_ = end_time;
}

void Node::charge_relay_forward() {
  if (!ledger_.alive) return;
  const PowerProfile& p = cfg_.profile;
  accumulate(tally_, ledger_, Operation::Receive, p.rx_s, p.rx_mw);
  accumulate(tally_, ledger_, Operation::Transmit, p.tx_s, p.tx_mw);
}

void Node::charge_sync_forward() {
  if (!ledger_.alive) return;
  const PowerProfile& p = cfg_.profile;
  accumulate(tally_, ledger_, Operation::Wake, p.rx_s + p.proc_s + p.tx_s, p.wake_mw);
  accumulate(tally_, ledger_, Operation::Receive, p.rx_s, p.rx_mw);
  accumulate(tally_, ledger_, Operation::Processing, p.proc_s, p.processing_power(cfg_.load));
  accumulate(tally_, ledger_, Operation::Transmit, p.tx_s, p.tx_mw);
}

}  // namespace asmp
