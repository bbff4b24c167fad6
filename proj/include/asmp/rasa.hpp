#pragma once

#include <optional>

#include "asmp/energy_model.hpp"
#include "asmp/mvp_asa.hpp"
#include "asmp/signal_plane.hpp"

namespace asmp {

// Exponentially weighted moving average of the harvested power.
struct EwmaTracker {
  double weight = 0.001;  // contribution of the newest observation
  double mean_mw = 0.0;

  bool valid() const { return weight > 0.0 && weight <= 1.0 && mean_mw >= 0.0; }
};

// mean <- weight * power + (1 - weight) * mean. Rejects negative power.
EwmaTracker ewma_update(EwmaTracker tracker, double power_mw);

// Smallest integer factor N >= 1 such that stretching the sampling period to
// N * base keeps consumption strictly below the average harvest. Empty when
// the average harvest cannot even cover sleep.
std::optional<long long> min_rasa_factor(const PowerProfile& profile, double load,
                                         double mean_harvest_mw, double base_period_s);

struct RasaDecision {
  long long factor = 1;           // period multiplier N
  double period = 0.0;            // N * base, within the cap
  long long prediction_count = 0; // server fills: N - 1
  double base_period = 0.0;
  double corrected_target = 0.0;  // fed-back target when extending
  bool event_imminent = false;    // not even N = 1 fits the event margin
  bool unsatisfiable = false;     // harvest can never cover consumption
};

// Pick the recovery factor: start from the energy-balance minimum, then
// shrink it while the stretched period would overrun the cap or the
// projected signal (value + N * event_velocity * base) would cross the event
// threshold. An unsatisfiable balance falls back to the largest factor the
// cap admits (`max_factor` when the cap is infinite).
RasaDecision rasa_step(const RateDecision& base, const AsaState& state,
                       const EwmaTracker& tracker, const PowerProfile& profile,
                       double load, const TargetGrid& grid, const PeriodLimits& limits,
                       double value_now, long long max_factor);

// Advance the node's memory for a taken extension (factor >= 2): target and
// operative rate. A factor of 1 is a no-op.
void apply_rasa_extension(AsaState& state, const RasaDecision& decision);

}  // namespace asmp
