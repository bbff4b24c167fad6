#include "asmp/signal_plane.hpp"

#include <cmath>
#include <stdexcept>

namespace asmp {

namespace {
// Relative slack when deciding which grid cell a value falls in. Grid values
// k * spacing are generally not exact doubles, so a value sitting on a grid
// point may land an ulp below it; without the slack its floor cell would be
// off by one and the remainder would come out as ~spacing instead of 0.
constexpr double kGridSlack = 1e-9;
}  // namespace

const char* to_string(SamplingCondition c) {
  switch (c) {
    case SamplingCondition::Stable:  return "stable";
    case SamplingCondition::TooLong: return "too_long";
    case SamplingCondition::Error:   return "error";
  }
  return "?";
}

Quantization quantize(double value, const TargetGrid& grid) {
  if (!grid.valid()) throw std::invalid_argument("quantize: invalid target grid");
  if (!std::isfinite(value)) throw std::invalid_argument("quantize: non-finite value");

  const double q = value / grid.spacing;
  Quantization out;
  out.nearest = grid.spacing * static_cast<double>(std::llround(q));
  const long long cell = static_cast<long long>(std::floor(q + kGridSlack));
  out.lower = grid.spacing * static_cast<double>(cell);
  out.remainder = value - out.lower;
  if (out.remainder < 0.0) out.remainder = 0.0;
  return out;
}

double round_to_grid(double value, const TargetGrid& grid) {
  if (!std::isfinite(value)) throw std::invalid_argument("round_to_grid: non-finite value");
  return grid.spacing * static_cast<double>(std::llround(value / grid.spacing));
}

SamplingCondition classify_distance(const Quantization& now, const Quantization& prev,
                                    double value, const TargetGrid& grid) {
  // Grid targets are integer multiples of the spacing, so the skipped-target
  // count is integral up to rounding noise; compare on the rounded count.
  const long long skipped =
      std::llround(std::fabs(now.nearest - prev.nearest) / grid.spacing);
  if (skipped > 1) return SamplingCondition::TooLong;
  if (std::fabs(value - now.nearest) < grid.sensitivity * grid.spacing)
    return SamplingCondition::Stable;
  return SamplingCondition::Error;
}

}  // namespace asmp
