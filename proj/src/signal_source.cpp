#include "asmp/signal_source.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "asmp/rng.hpp"

namespace asmp {

namespace {
constexpr std::uint64_t kNoiseStream = 0x4e4f495345ULL;
}

SignalSource SignalSource::dynamic_transition(const DynamicTransitionParams& params,
                                              std::uint64_t seed, double duration_s) {
  if (!(params.min_value < params.max_value))
    throw std::invalid_argument("dynamic transition: bounds must satisfy min < max");
  if (!(params.segment_min_s > 0.0 && params.segment_max_s >= params.segment_min_s))
    throw std::invalid_argument("dynamic transition: bad segment durations");
  if (!(params.slope_min > 0.0 && params.slope_max >= params.slope_min))
    throw std::invalid_argument("dynamic transition: bad slope bounds");

  SignalSource src;
  src.kind_ = Kind::Points;
  src.noise_std = params.noise_std;
  src.noise_seed = seed;
  src.duration_s_ = duration_s;

  Splitmix64 gen(rng::mix64(seed ^ 0x5349474e414cULL));
  double t = 0.0;
  double value = gen.uniform_in(params.min_value, params.max_value);
  src.times_.push_back(t);
  src.values_.push_back(value);
  int direction = gen.uniform() < 0.5 ? -1 : 1;
  while (t < duration_s) {
    const double duration = gen.uniform_in(params.segment_min_s, params.segment_max_s);
    const double slope = gen.uniform_in(params.slope_min, params.slope_max);
    if (gen.uniform() < 0.5) direction = -direction;
    if (value >= params.max_value) direction = -1;
    if (value <= params.min_value) direction = 1;
    double next = value + static_cast<double>(direction) * slope * duration;
    double used = duration;
    // A segment hitting a bound is cut there and the walk turns around.
    if (next > params.max_value || next < params.min_value) {
      const double bound = next > params.max_value ? params.max_value : params.min_value;
      used = std::fabs(bound - value) / slope;
      next = bound;
      direction = -direction;
    }
    if (used <= 0.0) continue;  // started exactly on the bound
    t += used;
    value = next;
    src.times_.push_back(t);
    src.values_.push_back(value);
  }
  return src;
}

SignalSource SignalSource::csv_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("signal trace: cannot open " + path);

  SignalSource src;
  src.kind_ = Kind::Points;
  std::vector<std::string> problems;
  std::string line;
  std::getline(in, line);  // header
  std::size_t line_no = 1;
  double last_t = -std::numeric_limits<double>::infinity();
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string t_str, v_str;
    if (!std::getline(ss, t_str, ',') || !std::getline(ss, v_str)) {
      problems.push_back("line " + std::to_string(line_no) + ": expected time,value");
      continue;
    }
    try {
      const double t = std::stod(t_str);
      const double v = std::stod(v_str);
      if (t <= last_t) {
        problems.push_back("line " + std::to_string(line_no) + ": non-monotone time");
        continue;
      }
      src.times_.push_back(t);
      src.values_.push_back(v);
      last_t = t;
    } catch (const std::exception&) {
      problems.push_back("line " + std::to_string(line_no) + ": unparsable row");
    }
  }
  if (src.times_.size() < 2)
    problems.push_back("need at least 2 data rows, got " + std::to_string(src.times_.size()));
  if (!problems.empty()) {
    std::string msg = "signal trace " + path + ":";
    for (const auto& p : problems) msg += "\n  " + p;
    throw std::runtime_error(msg);
  }
  src.duration_s_ = src.times_.back() - src.times_.front();
  return src;
}

SignalSource SignalSource::linear_ramp(double start, double slope_per_s) {
  SignalSource src;
  src.kind_ = Kind::Ramp;
  src.ramp_start_ = start;
  src.ramp_slope_ = slope_per_s;
  src.duration_s_ = std::numeric_limits<double>::infinity();
  return src;
}

SignalSource SignalSource::constant(double value) {
  SignalSource src;
  src.kind_ = Kind::Constant;
  src.constant_ = value;
  src.duration_s_ = std::numeric_limits<double>::infinity();
  return src;
}

double SignalSource::value_at(double t) const {
  switch (kind_) {
    case Kind::Constant: return constant_;
    case Kind::Ramp:     return ramp_start_ + ramp_slope_ * t;
    case Kind::Points:   break;
  }
  if (t <= times_.front()) return values_.front();
  if (t >= times_.back()) return values_.back();
  const auto upper = std::upper_bound(times_.begin(), times_.end(), t);
  const std::size_t hi = static_cast<std::size_t>(upper - times_.begin());
  const std::size_t lo = hi - 1;
  const double span = times_[hi] - times_[lo];
  const double frac = (t - times_[lo]) / span;
  return values_[lo] + frac * (values_[hi] - values_[lo]);
}

double SignalSource::sample(double t, std::uint64_t node_id,
                            std::uint64_t sample_index) const {
  double v = value_at(t);
  if (noise_std > 0.0) {
    v += noise_std * rng::normal(noise_seed, rng::mix64(kNoiseStream ^ node_id),
                                 sample_index);
  }
  return v;
}

double SignalSource::min_value() const {
  if (kind_ != Kind::Points) return value_at(0.0);
  return *std::min_element(values_.begin(), values_.end());
}

double SignalSource::max_value() const {
  if (kind_ != Kind::Points) return value_at(0.0);
  return *std::max_element(values_.begin(), values_.end());
}

SignalSource generate_dynamic_transition(const DynamicTransitionParams& params,
                                         std::uint64_t seed, double duration_s) {
  return SignalSource::dynamic_transition(params, seed, duration_s);
}

SignalSource load_csv_trace(const std::string& path) {
  return SignalSource::csv_trace(path);
}

}  // namespace asmp
