#include "asmp/casa.hpp"

#include <cmath>

namespace asmp {

double casa_threshold(double v_now, double tolerance) {
  return std::fabs(tolerance * v_now / 2.0);
}

bool casa_eligible(double v_now, double v_prev, double threshold) {
  const double dv = std::fabs(v_now - v_prev);
  return dv > 0.0 && dv < threshold;
}

CasaDecision casa_step(const AsaState& state, const RateDecision& base,
                       const CasaConfig& cfg, const TargetGrid& grid,
                       const PeriodLimits& limits, double value_now) {
  CasaDecision out;
  out.period = base.period;
  out.predict_delay = base.period;
  out.threshold = casa_threshold(state.velocity.now, cfg.tolerance);
  if (base.event_imminent) return out;
  if (!casa_eligible(state.velocity.now, state.velocity.prev, out.threshold)) return out;

  const double v_two_ahead = state.velocity.next + (state.velocity.now - state.velocity.prev);
  if (v_two_ahead == 0.0 || !std::isfinite(v_two_ahead)) return out;

  const double second_period = grid.spacing / std::fabs(v_two_ahead);
  const double total = base.period + second_period;
  const EffectiveCap cap = effective_max_period(value_now, grid, limits);
  if (cap.event_imminent) return out;
  if (clamp_to_max(total, cap.max_period, limits.floor_period) != total) return out;

  out.skip = true;
  out.period = total;
  out.velocity_advanced = v_two_ahead;
  out.corrected_target =
      round_to_grid(state.target_prev + v_two_ahead * base.period, grid);
  return out;
}

void apply_casa_skip(AsaState& state, const CasaDecision& decision) {
  if (!decision.skip) return;
  state.target_prev = decision.corrected_target;
  state.velocity.next = decision.velocity_advanced;
  state.rate = 1.0 / decision.period;
}

}  // namespace asmp
