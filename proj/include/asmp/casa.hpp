#pragma once

#include "asmp/mvp_asa.hpp"
#include "asmp/signal_plane.hpp"

namespace asmp {

struct CasaConfig {
  double tolerance = 0.3;  // allowable relative velocity error, in (0, 1)

  bool valid() const { return tolerance > 0.0 && tolerance < 1.0; }
};

// Outcome of the linear-trend check. When `skip` is set the node sleeps
// through one sampling point and the server fills it after `predict_delay`.
struct CasaDecision {
  bool skip = false;
  double period = 0.0;             // node sleep: two summed periods when skipping
  double predict_delay = 0.0;      // server fill offset (the base period)
  double threshold = 0.0;          // linearity bound M
  double velocity_advanced = 0.0;  // predicted velocity two steps ahead
  double corrected_target = 0.0;   // fed-back target when skipping
};

// Linearity bound: |tolerance * v_now / 2|.
double casa_threshold(double v_now, double tolerance);

// True iff 0 < |v_now - v_prev| < threshold. The "!= 0" guard keeps a flat or
// perfectly settled signal from skipping on stale velocity memory.
bool casa_eligible(double v_now, double v_prev, double threshold);

// Evaluate the skip against the state as left by the step that produced
// `base`. A skip whose summed period would be truncated by the cap is
// cancelled; a truncated sleep would desynchronize the server's fill delay.
CasaDecision casa_step(const AsaState& state, const RateDecision& base,
                       const CasaConfig& cfg, const TargetGrid& grid,
                       const PeriodLimits& limits, double value_now);

// Advance the node's memory for a taken skip: target, predicted velocity and
// the operative rate (reciprocal of the doubled sleep).
void apply_casa_skip(AsaState& state, const CasaDecision& decision);

}  // namespace asmp
