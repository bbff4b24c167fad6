// Test-only reference transcriptions of the three sampling processes,
// written straight-line from their update rules. They share no code with the
// library; the differential suites require bit-for-bit agreement.
#pragma once

#include <cmath>
#include <cstdint>
#include <optional>

namespace oracle {

struct GridParams {
  double spacing = 1.0;
  double sensitivity = 0.2;
  bool has_event_threshold = false;
  double event_threshold = 0.0;
};

struct LimitParams {
  double max_period = std::numeric_limits<double>::infinity();
  double floor_period = 0.0;
  double event_velocity = 0.0;
  double alarm_period = 5.0;
};

struct State {
  double value_prev = 0.0;
  double value_prev2 = 0.0;
  double target_prev = 0.0;
  double remainder_prev = 0.0;
  double rate = 0.0;
  double rate_prev = 0.0;
  double v_prev = 0.0;   // velocity one step back
  double v_now = 0.0;    // velocity of the latest step
  double v_next = 0.0;   // predicted velocity
  double v_delta = 0.0;
  std::uint64_t seen = 0;
};

struct Step1Out {
  int condition = 0;  // 0 stable, 1 too_long, 2 error
  double rate = 0.0;
  double period = 0.0;
  long long missed = 0;
  bool has_correction = false;
  double correction_delay = 0.0;
  double corrected_target = 0.0;
  bool event_imminent = false;
};

inline double grid_round(double x, double spacing) {
  return spacing * static_cast<double>(std::llround(x / spacing));
}

struct CapOut {
  double max_period;
  bool imminent;
};

inline CapOut cap_at(double value, const GridParams& g, const LimitParams& lim) {
  CapOut c{lim.max_period, false};
  if (lim.event_velocity > 0.0 && g.has_event_threshold) {
    const double margin = g.event_threshold - value;
    if (margin <= 0.0) {
      c.imminent = true;
      return c;
    }
    const double derived = margin / lim.event_velocity;
    if (derived < c.max_period) c.max_period = derived;
  }
  return c;
}

// One pass of the adaptive-sampling node process. Resolution choices match
// the shipped behavior: the first two samples return the current rate; a
// repeated value counts as the increasing trend; the rate limit acts as a
// period cap with bound values assigned exactly; an undefined correction
// denominator substitutes the cap for the fill delay.
inline Step1Out alg1_step(State& s, double d_n, const GridParams& g,
                          const LimitParams& lim) {
  Step1Out out;
  const CapOut cap = cap_at(d_n, g, lim);

  const double q = d_n / g.spacing;
  const double b_n = g.spacing * static_cast<double>(std::llround(q));
  const long long cell = static_cast<long long>(std::floor(q + 1e-9));
  const double b_s = g.spacing * static_cast<double>(cell);
  double r_n = d_n - b_s;
  if (r_n < 0.0) r_n = 0.0;

  const auto finish = [&](double rate_raw) {
    if (cap.imminent) {
      out.event_imminent = true;
      out.period = lim.floor_period > 0.0 ? lim.floor_period : lim.alarm_period;
      out.rate = 1.0 / out.period;
      return;
    }
    const double period_raw = rate_raw > 0.0 ? 1.0 / rate_raw : cap.max_period;
    double period = period_raw;
    if (period < lim.floor_period) period = lim.floor_period;
    if (period > cap.max_period) period = cap.max_period;
    out.period = period;
    out.rate = (period == period_raw && rate_raw > 0.0) ? rate_raw : 1.0 / period;
  };

  if (s.seen == 0) {
    finish(s.rate);
    s.value_prev = d_n;
    s.target_prev = b_n;
    s.remainder_prev = r_n;
    s.seen = 1;
    return out;
  }
  if (s.seen == 1) {
    finish(s.rate);
    s.v_now = std::fabs(d_n - s.value_prev) * s.rate;
    s.value_prev2 = s.value_prev;
    s.value_prev = d_n;
    s.target_prev = b_n;
    s.remainder_prev = r_n;
    s.seen = 2;
    return out;
  }

  const double v_prev = s.v_now;
  const double v_now = std::fabs(d_n - s.value_prev) * s.rate;
  const double v_next = v_now + (v_now - v_prev);

  const long long skipped =
      std::llround(std::fabs(b_n - s.target_prev) / g.spacing);
  double rate_raw = 0.0;
  double fed_back_target = b_n;
  if (skipped > 1) {
    out.condition = 1;
  } else if (std::fabs(d_n - b_n) < g.sensitivity * g.spacing) {
    out.condition = 0;
  } else {
    out.condition = 2;
  }
  // With the margin exhausted the alarm path decides; the branch work is
  // skipped and the plain target feeds back.
  if (!cap.imminent) {
    if (out.condition == 1) {
      out.missed = skipped;
      rate_raw = static_cast<double>(skipped) * s.rate;
    } else if (out.condition == 0) {
      rate_raw = std::fabs(v_next) / g.spacing;
    } else {
      const bool increasing = d_n >= s.value_prev;
      rate_raw = increasing ? std::fabs(v_next) / (2.0 * g.spacing - r_n)
                            : std::fabs(v_next) / (g.spacing + r_n);
      const double denom = std::fabs(3.0 * v_now - v_prev);
      const double delay =
          denom > 0.0
              ? (increasing ? 2.0 * (g.spacing - r_n) / denom : r_n / denom)
              : cap.max_period;
      if (std::isfinite(delay)) {
        out.has_correction = true;
        out.correction_delay = delay;
        out.corrected_target = grid_round(b_n + v_next * delay, g.spacing);
        fed_back_target = out.corrected_target;
      }
    }
  }
  finish(rate_raw);

  s.value_prev2 = s.value_prev;
  s.value_prev = d_n;
  s.target_prev = fed_back_target;
  s.remainder_prev = r_n;
  s.rate_prev = s.rate;
  s.rate = out.rate;
  s.v_prev = v_prev;
  s.v_now = v_now;
  s.v_next = v_next;
  s.v_delta = v_now - v_prev;
  s.seen += 1;
  return out;
}

struct Step2Out {
  bool skip = false;
  double period = 0.0;
  double predict_delay = 0.0;
  double threshold = 0.0;
  double v_two_ahead = 0.0;
  double corrected_target = 0.0;
};

// One pass of the trend-skip process against the state alg1_step left
// behind. `base_*` is the latest alg1 output.
inline Step2Out alg2_step(const State& s, double base_period, bool base_imminent,
                          double epsilon, const GridParams& g,
                          const LimitParams& lim, double d_n) {
  Step2Out out;
  out.period = base_period;
  out.predict_delay = base_period;
  out.threshold = std::fabs(epsilon * s.v_now / 2.0);
  if (base_imminent) return out;
  const double dv = std::fabs(s.v_now - s.v_prev);
  if (!(dv > 0.0 && dv < out.threshold)) return out;
  const double v2 = s.v_next + (s.v_now - s.v_prev);
  if (v2 == 0.0 || !std::isfinite(v2)) return out;
  const double second = g.spacing / std::fabs(v2);
  const double total = base_period + second;
  const CapOut cap = cap_at(d_n, g, lim);
  if (cap.imminent) return out;
  double clamped = total;
  if (clamped < lim.floor_period) clamped = lim.floor_period;
  if (clamped > cap.max_period) clamped = cap.max_period;
  if (clamped != total) return out;
  out.skip = true;
  out.period = total;
  out.v_two_ahead = v2;
  out.corrected_target = grid_round(s.target_prev + v2 * base_period, g.spacing);
  return out;
}

inline void alg2_apply(State& s, const Step2Out& d) {
  if (!d.skip) return;
  s.target_prev = d.corrected_target;
  s.v_next = d.v_two_ahead;
  s.rate = 1.0 / d.period;
}

struct ProfileParams {
  double sleep_mw, wake_mw, sense_mw, tx_mw;
  double coeff_a, coeff_b;
  double sense_s, proc_s, tx_s;
};

struct Step3Out {
  long long factor = 1;
  double period = 0.0;
  long long fills = 0;
  double corrected_target = 0.0;
  bool event_imminent = false;
  bool unsatisfiable = false;
};

// One pass of the recovery process: grow the factor while one stretched
// period still consumes more than it harvests, then shrink it back under the
// period cap and the event margin.
inline Step3Out alg3_step(const State& s, double base_period, bool base_imminent,
                          double mean_harvest_mw, const ProfileParams& p,
                          double load, const GridParams& g, const LimitParams& lim,
                          double d_n, long long max_factor) {
  Step3Out out;
  const CapOut cap = cap_at(d_n, g, lim);
  if (cap.imminent || base_imminent) {
    out.event_imminent = true;
    out.period = base_period;
    out.corrected_target = s.target_prev;
    return out;
  }

  const double t_w = p.sense_s + p.proc_s + p.tx_s;
  long long n = -1;
  const long long search_cap = 1000000;
  for (long long k = 1; k <= search_cap; ++k) {
    const double t_sl = static_cast<double>(k) * base_period - t_w;
    const double consumed = p.sleep_mw * t_sl + p.wake_mw * t_w +
                            p.sense_mw * p.sense_s +
                            (p.coeff_a * load + p.coeff_b) * p.proc_s +
                            p.tx_mw * p.tx_s;
    const double harvested = mean_harvest_mw * static_cast<double>(k) * base_period;
    if (harvested > consumed) {
      n = k;
      break;
    }
    // no growth in the balance means no k can ever satisfy it
    if (mean_harvest_mw <= p.sleep_mw) break;
  }
  if (n < 0) {
    out.unsatisfiable = true;
    n = std::isfinite(cap.max_period)
            ? static_cast<long long>(std::floor(cap.max_period / base_period))
            : max_factor;
    if (n < 1) n = 1;
  }

  const bool margin_active = lim.event_velocity > 0.0 && g.has_event_threshold;
  const auto breach = [&](long long k) {
    return margin_active &&
           d_n + static_cast<double>(k) * lim.event_velocity * base_period >=
               g.event_threshold;
  };
  while (n > 1 && (static_cast<double>(n) * base_period > cap.max_period || breach(n)))
    --n;
  if (n == 1 && breach(1)) out.event_imminent = true;

  out.factor = n;
  out.period = static_cast<double>(n) * base_period;
  out.fills = n - 1;
  out.corrected_target = grid_round(
      s.target_prev + s.v_next * (static_cast<double>(n - 1) * base_period),
      g.spacing);
  return out;
}

inline void alg3_apply(State& s, const Step3Out& d) {
  if (d.factor <= 1) return;
  s.target_prev = d.corrected_target;
  s.rate = 1.0 / d.period;
}

}  // namespace oracle
