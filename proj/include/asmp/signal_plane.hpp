#pragma once

#include <cstdint>
#include <optional>

namespace asmp {

// One sensed data point of a node.
struct Sample {
  std::uint64_t index = 0;  // step counter, +1 per accepted sample
  double time = 0.0;        // seconds since scenario start
  double value = 0.0;       // signal units
};

// The resolution contract of the collection service: only values on a grid
// of spacing `spacing` are worth reporting. `sensitivity` scales how far a
// sample may sit from its nearest grid value before it counts as an error.
struct TargetGrid {
  double spacing = 1.0;       // gap between adjacent target values, > 0
  double sensitivity = 0.2;   // in (0, 0.5]
  std::optional<double> event_threshold;  // alarm level, if configured

  bool valid() const { return spacing > 0.0 && sensitivity > 0.0 && sensitivity <= 0.5; }
};

// Position of a sampled value relative to the target grid.
struct Quantization {
  double nearest = 0.0;    // closest grid value, ties rounded away from zero
  double lower = 0.0;      // grid value at or below the input
  double remainder = 0.0;  // input - lower, kept in [0, spacing)
};

enum class SamplingCondition { Stable, TooLong, Error };

const char* to_string(SamplingCondition c);

// Throws std::invalid_argument for non-finite values or an invalid grid.
Quantization quantize(double value, const TargetGrid& grid);

// Nearest grid value, same rounding mode as quantize.
double round_to_grid(double value, const TargetGrid& grid);

// TooLong when the sample skipped at least one grid value relative to the
// previous one; Stable when |value - nearest| < sensitivity * spacing;
// Error otherwise. TooLong takes precedence over the other two.
SamplingCondition classify_distance(const Quantization& now, const Quantization& prev,
                                    double value, const TargetGrid& grid);

}  // namespace asmp
