#include "asmp/mvp_asa.hpp"

#include <cmath>
#include <stdexcept>

namespace asmp {

AsaState AsaState::with_initial_rate(double rate_hz) {
  if (!(rate_hz > 0.0) || !std::isfinite(rate_hz))
    throw std::invalid_argument("AsaState: initial rate must be positive and finite");
  AsaState s;
  s.rate = rate_hz;
  s.rate_prev = rate_hz;
  return s;
}

double mean_velocity(double value_now, double value_prev, double rate_hz) {
  if (!(rate_hz > 0.0))
    throw std::invalid_argument("mean_velocity: rate must be positive");
  return std::fabs(value_now - value_prev) * rate_hz;
}

double predict_velocity(double v_now, double v_prev) {
  return v_now + (v_now - v_prev);
}

std::pair<double, double> pre_post_velocities(double v_prev, double v_now, double v_next) {
  return {(v_prev + v_now) / 2.0, (v_now + v_next) / 2.0};
}

CorrectionPeriods correction_periods(Trend trend, double remainder_now, double remainder_prev,
                                     double spacing, double v_now, double v_prev) {
  CorrectionPeriods out;
  const double post_denom = std::fabs(3.0 * v_now - v_prev);
  const double pre_denom = std::fabs(v_now + v_prev);
  if (trend == Trend::Increasing) {
    if (post_denom > 0.0) out.post = 2.0 * (spacing - remainder_now) / post_denom;
    if (pre_denom > 0.0) out.pre = 2.0 * remainder_prev / pre_denom;
  } else {
    if (post_denom > 0.0) out.post = remainder_now / post_denom;
    if (pre_denom > 0.0) out.pre = 2.0 * (spacing - remainder_prev) / pre_denom;
  }
  return out;
}

EffectiveCap effective_max_period(double value_now, const TargetGrid& grid,
                                  const PeriodLimits& limits) {
  EffectiveCap cap;
  cap.max_period = limits.max_period;
  if (limits.event_velocity > 0.0 && grid.event_threshold) {
    const double margin = *grid.event_threshold - value_now;
    if (margin <= 0.0) {
      cap.event_imminent = true;
      return cap;
    }
    const double derived = margin / limits.event_velocity;
    if (derived < cap.max_period) cap.max_period = derived;
  }
  return cap;
}

PeriodClamp clamp_period(double period, double margin, double event_velocity,
                         double floor_period, double alarm_period) {
  PeriodClamp out;
  if (event_velocity > 0.0 && margin <= 0.0) {
    out.event_imminent = true;
    out.period = floor_period > 0.0 ? floor_period : alarm_period;
    return out;
  }
  double max_period = kInfinitePeriod;
  if (event_velocity > 0.0) max_period = margin / event_velocity;
  out.period = clamp_to_max(period, max_period, floor_period);
  return out;
}

double clamp_to_max(double period, double max_period, double floor_period) {
  if (period < floor_period) period = floor_period;
  if (period > max_period) period = max_period;
  return period;
}

namespace {

// Wrap a branch rate into a clamped decision. The unclamped period is the
// exact reciprocal of the branch rate; when the clamp engages, the bound is
// assigned exactly and the rate becomes its reciprocal instead.
RateDecision finish_decision(double rate_raw, SamplingCondition condition,
                             const EffectiveCap& cap, const PeriodLimits& limits) {
  RateDecision d;
  d.condition = condition;
  if (cap.event_imminent) {
    d.event_imminent = true;
    d.period = limits.floor_period > 0.0 ? limits.floor_period : limits.alarm_period;
    d.rate = 1.0 / d.period;
    return d;
  }
  const double period_raw = rate_raw > 0.0 ? 1.0 / rate_raw : cap.max_period;
  const double period = clamp_to_max(period_raw, cap.max_period, limits.floor_period);
  d.period = period;
  d.rate = (period == period_raw && rate_raw > 0.0) ? rate_raw : 1.0 / period;
  return d;
}

RateDecision bootstrap_decision(const AsaState& state, double value_now,
                                const TargetGrid& grid, const PeriodLimits& limits) {
  return finish_decision(state.rate, SamplingCondition::Stable,
                         effective_max_period(value_now, grid, limits), limits);
}

}  // namespace

RateDecision next_rate(const AsaState& state, const Sample& sample, const Quantization& q,
                       SamplingCondition condition, const TargetGrid& grid,
                       const PeriodLimits& limits) {
  const EffectiveCap cap = effective_max_period(sample.value, grid, limits);
  if (cap.event_imminent) return finish_decision(0.0, condition, cap, limits);

  double rate_raw = 0.0;
  RateDecision extras;
  switch (condition) {
    case SamplingCondition::TooLong: {
      extras.missed_targets =
          std::llround(std::fabs(q.nearest - state.target_prev) / grid.spacing);
      rate_raw = static_cast<double>(extras.missed_targets) * state.rate;
      break;
    }
    case SamplingCondition::Stable: {
      rate_raw = std::fabs(state.velocity.next) / grid.spacing;
      break;
    }
    case SamplingCondition::Error: {
      // A repeated value has no defined trend; treat it as increasing.
      const Trend trend =
          sample.value >= state.value_prev ? Trend::Increasing : Trend::Decreasing;
      const double spread = trend == Trend::Increasing ? 2.0 * grid.spacing - q.remainder
                                                       : grid.spacing + q.remainder;
      rate_raw = std::fabs(state.velocity.next) / spread;
      const CorrectionPeriods corr = correction_periods(
          trend, q.remainder, state.remainder_prev, grid.spacing,
          state.velocity.now, state.velocity.prev);
      const double delay = corr.post ? *corr.post : cap.max_period;
      if (std::isfinite(delay)) {
        extras.correction_delay = delay;
        extras.corrected_target =
            round_to_grid(q.nearest + state.velocity.next * delay, grid);
      }
      break;
    }
  }

  RateDecision d = finish_decision(rate_raw, condition, cap, limits);
  d.missed_targets = extras.missed_targets;
  d.corrected_target = extras.corrected_target;
  d.correction_delay = extras.correction_delay;
  return d;
}

RateDecision asa_step(AsaState& state, const Sample& sample, const TargetGrid& grid,
                      const PeriodLimits& limits) {
  const Quantization q = quantize(sample.value, grid);

  if (state.samples_seen == 0) {
    state.value_prev = sample.value;
    state.target_prev = q.nearest;
    state.remainder_prev = q.remainder;
    state.samples_seen = 1;
    return bootstrap_decision(state, sample.value, grid, limits);
  }

  if (state.samples_seen == 1) {
    // First measurable velocity; it becomes the previous one next step.
    state.velocity.now = mean_velocity(sample.value, state.value_prev, state.rate);
    state.value_prev2 = state.value_prev;
    state.value_prev = sample.value;
    state.target_prev = q.nearest;
    state.remainder_prev = q.remainder;
    state.samples_seen = 2;
    return bootstrap_decision(state, sample.value, grid, limits);
  }

  const double v_prev = state.velocity.now;
  const double v_now = mean_velocity(sample.value, state.value_prev, state.rate);
  const double v_next = predict_velocity(v_now, v_prev);
  state.velocity = VelocityState{v_prev, v_now, v_next, v_now - v_prev};

  Quantization prev_q;
  prev_q.nearest = state.target_prev;
  prev_q.remainder = state.remainder_prev;
  const SamplingCondition condition = classify_distance(q, prev_q, sample.value, grid);

  const RateDecision decision = next_rate(state, sample, q, condition, grid, limits);

  // Feedback shift: this sample, its target (corrected one when the error
  // branch re-aimed), its remainder and rate become the previous entries.
  state.value_prev2 = state.value_prev;
  state.value_prev = sample.value;
  state.target_prev = decision.corrected_target ? *decision.corrected_target : q.nearest;
  state.remainder_prev = q.remainder;
  state.rate_prev = state.rate;
  state.rate = decision.rate;
  state.samples_seen += 1;
  return decision;
}

}  // namespace asmp
