#include "asmp/harvest_model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "asmp/rng.hpp"

namespace asmp {

namespace {
constexpr std::uint64_t kSolarStream = 0x534f4c4152ULL;  // draw stream tag
}

double harvest_quality(double power_mw, double max_power_mw) {
  if (!(max_power_mw > 0.0))
    throw std::invalid_argument("harvest_quality: max power must be positive");
  if (power_mw < 0.0 || power_mw > max_power_mw)
    throw std::invalid_argument("harvest_quality: power outside [0, max]");
  return power_mw / max_power_mw;
}

double harvested_energy(std::span<const std::pair<double, double>> quality_period,
                        double max_power_mw) {
  double total = 0.0;
  for (const auto& [quality, period] : quality_period) {
    if (!(period > 0.0)) throw std::invalid_argument("harvested_energy: period must be positive");
    total += quality * max_power_mw * period;
  }
  return total;
}

double solar_quality_at(double t, const HarvestConfig& cfg, std::uint64_t node_id) {
  if (t < 0.0) throw std::invalid_argument("solar_quality_at: negative time");

  if (!cfg.trace.empty()) {
    // Zero-order hold over the measured trace.
    double held = cfg.trace.front().second;
    for (const auto& [ts, q] : cfg.trace) {
      if (ts > t) break;
      held = q;
    }
    return held;
  }

  const double phase = std::fmod(t, cfg.cycle_s());
  if (phase >= cfg.day_s) return 0.0;  // night

  const double mean_q = cfg.mean_day_power_mw / cfg.max_power_mw;
  if (cfg.quality_std <= 0.0) return mean_q;

  const std::uint64_t slot = static_cast<std::uint64_t>(std::floor(t / cfg.slot_s));
  const std::uint64_t stream = rng::mix64(kSolarStream ^ node_id);
  // Truncated normal on [0, 1]: redraw a bounded number of times, then clamp.
  for (int attempt = 0; attempt < 64; ++attempt) {
    const double q = mean_q + cfg.quality_std *
                                  rng::normal(cfg.seed, stream, slot * 64 + attempt);
    if (q >= 0.0 && q <= 1.0) return q;
  }
  const double q = mean_q;
  return q < 0.0 ? 0.0 : (q > 1.0 ? 1.0 : q);
}

std::vector<std::pair<double, double>> load_harvest_trace(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::string> problems;
  std::vector<std::pair<double, double>> rows;
  if (!in) throw std::runtime_error("harvest trace: cannot open " + path);

  std::string line;
  std::getline(in, line);  // header
  std::size_t line_no = 1;
  double last_t = -1.0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string t_str, q_str;
    if (!std::getline(ss, t_str, ',') || !std::getline(ss, q_str)) {
      problems.push_back("line " + std::to_string(line_no) + ": expected time,quality");
      continue;
    }
    try {
      const double t = std::stod(t_str);
      const double q = std::stod(q_str);
      if (t <= last_t)
        problems.push_back("line " + std::to_string(line_no) + ": non-monotone time");
      else if (q < 0.0 || q > 1.0)
        problems.push_back("line " + std::to_string(line_no) + ": quality outside [0, 1]");
      else {
        rows.emplace_back(t, q);
        last_t = t;
      }
    } catch (const std::exception&) {
      problems.push_back("line " + std::to_string(line_no) + ": unparsable row");
    }
  }
  if (rows.empty()) problems.push_back("no usable rows");
  if (!problems.empty()) {
    std::string msg = "harvest trace " + path + ":";
    for (const auto& p : problems) msg += "\n  " + p;
    throw std::runtime_error(msg);
  }
  return rows;
}

}  // namespace asmp
