#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace asmp {

// Stochastic solar model: zero at night, a truncated-normal quality draw per
// time slot during the day. Draws are keyed on (seed, node, slot), so a value
// depends only on where and when it is asked for, never on call order.
struct HarvestConfig {
  double max_power_mw = 500.0;
  double mean_day_power_mw = 30.0;
  double quality_std = 0.02;   // standard deviation of the quality draw
  double day_s = 43200.0;      // day first, then night, repeating
  double night_s = 43200.0;
  double slot_s = 60.0;        // quality held constant within a slot
  std::uint64_t seed = 0;
  std::optional<double> ewma_initial_mw;  // unset: seeded by the first observation
  // Optional measured trace (time, quality), zero-order hold; overrides the
  // stochastic model when non-empty.
  std::vector<std::pair<double, double>> trace;

  double cycle_s() const { return day_s + night_s; }
};

// power / max power, in [0, 1]. Rejects power outside [0, max].
double harvest_quality(double power_mw, double max_power_mw);

// Total energy over (quality, period) slots: sum of q * max_power * period.
double harvested_energy(std::span<const std::pair<double, double>> quality_period,
                        double max_power_mw);

// Quality at time t for a node; deterministic given (config seed, node, slot).
double solar_quality_at(double t, const HarvestConfig& cfg, std::uint64_t node_id);

// Parse a harvest trace CSV with a header and (time_s, quality) rows.
// Collects every problem before throwing.
std::vector<std::pair<double, double>> load_harvest_trace(const std::string& path);

}  // namespace asmp
