#include "asmp/rasa.hpp"

#include <cmath>
#include <stdexcept>

namespace asmp {

EwmaTracker ewma_update(EwmaTracker tracker, double power_mw) {
  if (power_mw < 0.0) throw std::invalid_argument("ewma_update: negative power");
  tracker.mean_mw = tracker.weight * power_mw + (1.0 - tracker.weight) * tracker.mean_mw;
  return tracker;
}

std::optional<long long> min_rasa_factor(const PowerProfile& p, double load,
                                         double mean_harvest_mw, double base_period_s) {
  if (!(base_period_s > 0.0))
    throw std::invalid_argument("min_rasa_factor: base period must be positive");
  const double wake_cost = (p.wake_mw - p.sleep_mw) * p.wake_s() +
                           p.sense_mw * p.sense_s +
                           p.processing_power(load) * p.proc_s +
                           p.tx_mw * p.tx_s;
  const double net_harvest = (mean_harvest_mw - p.sleep_mw) * base_period_s;
  if (net_harvest <= 0.0) return std::nullopt;
  // Strict bound: the factor must exceed wake_cost / net_harvest.
  long long n = static_cast<long long>(std::floor(wake_cost / net_harvest)) + 1;
  if (n < 1) n = 1;
  return n;
}

RasaDecision rasa_step(const RateDecision& base, const AsaState& state,
                       const EwmaTracker& tracker, const PowerProfile& profile,
                       double load, const TargetGrid& grid, const PeriodLimits& limits,
                       double value_now, long long max_factor) {
  RasaDecision out;
  out.base_period = base.period;

  const EffectiveCap cap = effective_max_period(value_now, grid, limits);
  if (cap.event_imminent || base.event_imminent) {
    out.event_imminent = true;
    out.period = base.period;
    out.corrected_target = state.target_prev;
    return out;
  }

  long long n;
  const auto minimum = min_rasa_factor(profile, load, tracker.mean_mw, base.period);
  if (minimum) {
    n = *minimum;
  } else {
    out.unsatisfiable = true;
    n = std::isfinite(cap.max_period)
            ? static_cast<long long>(std::floor(cap.max_period / base.period))
            : max_factor;
    if (n < 1) n = 1;
  }

  const bool margin_active = limits.event_velocity > 0.0 && grid.event_threshold.has_value();
  const auto breaches_margin = [&](long long k) {
    return margin_active &&
           value_now + static_cast<double>(k) * limits.event_velocity * base.period >=
               *grid.event_threshold;
  };
  while (n > 1 && (static_cast<double>(n) * base.period > cap.max_period ||
                   breaches_margin(n))) {
    --n;
  }
  if (n == 1 && breaches_margin(1)) out.event_imminent = true;

  out.factor = n;
  out.period = static_cast<double>(n) * base.period;
  out.prediction_count = n - 1;
  out.corrected_target = round_to_grid(
      state.target_prev +
          state.velocity.next * (static_cast<double>(n - 1) * base.period),
      grid);
  return out;
}

void apply_rasa_extension(AsaState& state, const RasaDecision& decision) {
  if (decision.factor <= 1) return;
  state.target_prev = decision.corrected_target;
  state.rate = 1.0 / decision.period;
}

}  // namespace asmp
