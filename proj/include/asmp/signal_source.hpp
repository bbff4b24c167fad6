#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace asmp {

struct DynamicTransitionParams {
  double min_value = 16.0;
  double max_value = 43.0;
  double segment_min_s = 120.0;  // duration bounds of one linear stretch
  double segment_max_s = 300.0;
  double slope_min = 0.04;       // |slope| bounds, signal units per second
  double slope_max = 0.09;
  double noise_std = 0.0;        // additive sensor noise, applied per sample
};

// The monitored signal of one node: either a generated piecewise-linear
// waveform, a measured trace with linear interpolation, or an analytic line.
// Sensor noise rides on top of the clean value, keyed per (node, sample).
class SignalSource {
 public:
  // Random anchors joined by linear segments, confined to the value bounds.
  // Deterministic per seed.
  static SignalSource dynamic_transition(const DynamicTransitionParams& params,
                                         std::uint64_t seed, double duration_s);

  // Two-column CSV (time, value) with a header; throws with every problem
  // itemized. Values between rows interpolate linearly.
  static SignalSource csv_trace(const std::string& path);

  static SignalSource linear_ramp(double start, double slope_per_s);
  static SignalSource constant(double value);

  double value_at(double t) const;

  // Clean value plus the keyed noise draw for this node's n-th sample.
  double sample(double t, std::uint64_t node_id, std::uint64_t sample_index) const;

  // Span of a trace-backed source; infinite for analytic kinds.
  double duration_s() const { return duration_s_; }
  double min_value() const;
  double max_value() const;

  double noise_std = 0.0;
  std::uint64_t noise_seed = 0;

 private:
  enum class Kind { Points, Ramp, Constant };
  Kind kind_ = Kind::Constant;
  std::vector<double> times_, values_;  // Points: strictly increasing times
  double ramp_start_ = 0.0, ramp_slope_ = 0.0, constant_ = 0.0;
  double duration_s_ = 0.0;
};

// Builder aliases matching the scenario surface.
SignalSource generate_dynamic_transition(const DynamicTransitionParams& params,
                                         std::uint64_t seed, double duration_s);
SignalSource load_csv_trace(const std::string& path);

}  // namespace asmp
