#pragma once

#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "asmp/sim.hpp"

namespace asmp {

// Summary of one algorithm variant over the shared signal realization.
struct VariantSummary {
  AlgorithmVariant algorithm = AlgorithmVariant::Fixed;
  double consumed_mwh = 0.0;
  std::uint64_t sample_count = 0;
  std::uint64_t predicted_count = 0;
  double mse = 0.0;
  double max_gap_s = 0.0;
  std::map<int, double> final_remaining_mj;
  double energy_reduction_vs_fixed = 0.0;  // 1 - variant/fixed
  double sample_reduction_vs_fixed = 0.0;
};

struct RunReport {
  std::vector<VariantSummary> rows;

  void write_csv(std::ostream& out) const;
  void write_table(std::ostream& out) const;
};

// Execute every requested variant on the identical signal realization
// (same seed) and derive reductions against the fixed baseline when present.
RunReport compare_algorithms(const Scenario& base,
                             const std::vector<AlgorithmVariant>& variants);

VariantSummary summarize(const Scenario& scenario, const RunResult& result);

// Artifact writers used by the command-line front end.
void write_metrics_csv(std::ostream& out, const Scenario& sc, const RunResult& result);
void write_manifest_json(std::ostream& out, const Scenario& sc,
                         const std::vector<std::string>& artifacts,
                         const std::map<std::string, std::string>& overrides);

}  // namespace asmp
