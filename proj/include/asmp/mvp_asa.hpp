#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <utility>

#include "asmp/signal_plane.hpp"

namespace asmp {

inline constexpr double kInfinitePeriod = std::numeric_limits<double>::infinity();

// Mean-velocity filter memory. `next` always equals now + (now - prev); the
// measured velocities are non-negative by construction, the predicted one may
// go negative (its magnitude is what period estimation consumes).
struct VelocityState {
  double prev = 0.0;   // velocity of the previous step
  double now = 0.0;    // velocity of the current step
  double next = 0.0;   // predicted velocity one step ahead
  double delta = 0.0;  // now - prev

  double pre() const { return (prev + now) / 2.0; }
  double post() const { return (now + next) / 2.0; }
};

// Per-node filter state driving period estimation. The first three samples
// run at the configured initial rate; prediction needs two velocities, which
// need three samples.
struct AsaState {
  double value_prev = 0.0;      // last sampled value
  double value_prev2 = 0.0;     // sampled value before that
  double target_prev = 0.0;     // last fed-back target (corrections included)
  double remainder_prev = 0.0;  // last grid remainder
  double rate = 0.0;            // operative sampling rate, Hz
  double rate_prev = 0.0;       // rate one step earlier
  VelocityState velocity;
  std::uint64_t samples_seen = 0;

  static AsaState with_initial_rate(double rate_hz);
  bool bootstrapped() const { return samples_seen >= 3; }
};

enum class Trend { Increasing, Decreasing };

// Server-side fill delays around an erroneous sample. Either entry is absent
// when its denominator is zero; the caller substitutes the period cap.
struct CorrectionPeriods {
  std::optional<double> post;  // delay until the missed target materializes
  std::optional<double> pre;   // diagnostic only, nothing consumes it
};

// Bounds every emitted period must respect.
struct PeriodLimits {
  double max_period = kInfinitePeriod;  // fixed cap, may be infinite
  double floor_period = 0.0;            // optional lower bound, 0 disables
  double event_velocity = 0.0;          // expected signal slope once an event starts;
                                        // > 0 enables the margin-derived cap
  double alarm_period = 5.0;            // period pinned once the event margin is gone
};

// Period cap effective at the current signal value.
struct EffectiveCap {
  double max_period = kInfinitePeriod;
  bool event_imminent = false;  // margin to the event threshold is exhausted
};

EffectiveCap effective_max_period(double value_now, const TargetGrid& grid,
                                  const PeriodLimits& limits);

struct PeriodClamp {
  double period = 0.0;
  bool event_imminent = false;
};

struct RateDecision {
  double rate = 0.0;    // next sampling rate, Hz
  double period = 0.0;  // next sampling period, s; exact reciprocal pair with rate
  SamplingCondition condition = SamplingCondition::Stable;
  long long missed_targets = 0;             // q_over, 0 unless TooLong
  std::optional<double> corrected_target;   // replaces the fed-back target (Error)
  std::optional<double> correction_delay;   // server fill delay (Error)
  bool event_imminent = false;
};

// |now - prev| * rate. Throws on a non-positive rate.
double mean_velocity(double value_now, double value_prev, double rate_hz);

// Linear velocity extrapolation: now + (now - prev).
double predict_velocity(double v_now, double v_prev);

// Mean velocities bracketing the latest target: ((prev+now)/2, (now+next)/2).
std::pair<double, double> pre_post_velocities(double v_prev, double v_now, double v_next);

CorrectionPeriods correction_periods(Trend trend, double remainder_now, double remainder_prev,
                                     double spacing, double v_now, double v_prev);

// Clamp with a margin-derived cap: max period = margin / event_velocity.
// A non-positive margin forces the alarm period and flags the event.
PeriodClamp clamp_period(double period, double margin, double event_velocity,
                         double floor_period, double alarm_period);

// Plain clamp into [floor_period, max_period]; bound values are assigned
// exactly so no emitted period can exceed the cap by rounding.
double clamp_to_max(double period, double max_period, double floor_period);

// Next-rate selection across the three sampling conditions, clamped. Reads
// the state's freshly updated velocities; does not mutate it.
RateDecision next_rate(const AsaState& state, const Sample& sample, const Quantization& q,
                       SamplingCondition condition, const TargetGrid& grid,
                       const PeriodLimits& limits);

// One full filter step: quantize, classify, update velocities, pick the next
// rate, then shift the feedback memory. Bootstrap steps return the current
// (initial) rate. Mutates `state`, returns the decision.
RateDecision asa_step(AsaState& state, const Sample& sample, const TargetGrid& grid,
                      const PeriodLimits& limits);

}  // namespace asmp
