#include "asmp/report.hpp"

#include <cstdio>

#include <json.hpp>

namespace asmp {

VariantSummary summarize(const Scenario& scenario, const RunResult& result) {
  VariantSummary s;
  s.algorithm = scenario.node.algorithm;
  s.consumed_mwh = result.metrics.consumed_mwh_total;
  s.sample_count = result.metrics.sample_count;
  s.predicted_count = result.metrics.predicted_count;
  s.mse = result.metrics.mse_sampled;
  s.max_gap_s = result.metrics.plane_max_gap_s;
  for (const auto& [id, summary] : result.nodes)
    s.final_remaining_mj[id] = summary.ledger.remaining_mj;
  return s;
}

RunReport compare_algorithms(const Scenario& base,
                             const std::vector<AlgorithmVariant>& variants) {
  RunReport report;
  for (AlgorithmVariant v : variants) {
    Scenario sc = base;
    sc.node.algorithm = v;
    const RunResult result = run(sc);
    report.rows.push_back(summarize(sc, result));
  }
  const VariantSummary* fixed = nullptr;
  for (const auto& row : report.rows)
    if (row.algorithm == AlgorithmVariant::Fixed) fixed = &row;
  if (fixed) {
    for (auto& row : report.rows) {
      if (fixed->consumed_mwh > 0.0)
        row.energy_reduction_vs_fixed = 1.0 - row.consumed_mwh / fixed->consumed_mwh;
      if (fixed->sample_count > 0)
        row.sample_reduction_vs_fixed =
            1.0 - static_cast<double>(row.sample_count) /
                      static_cast<double>(fixed->sample_count);
    }
  }
  return report;
}

void RunReport::write_csv(std::ostream& out) const {
  out << "algorithm,consumed_mwh,sample_count,predicted_count,mse,max_gap_s,"
         "energy_reduction_vs_fixed,sample_reduction_vs_fixed,final_remaining_mj\n";
  char buf[256];
  for (const auto& row : rows) {
    double remaining_total = 0.0;
    for (const auto& [id, mj] : row.final_remaining_mj) remaining_total += mj;
    std::snprintf(buf, sizeof buf, "%s,%.10g,%llu,%llu,%.10g,%.10g,%.6f,%.6f,%.10g\n",
                  to_string(row.algorithm), row.consumed_mwh,
                  static_cast<unsigned long long>(row.sample_count),
                  static_cast<unsigned long long>(row.predicted_count), row.mse,
                  row.max_gap_s, row.energy_reduction_vs_fixed,
                  row.sample_reduction_vs_fixed, remaining_total);
    out << buf;
  }
}

void RunReport::write_table(std::ostream& out) const {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-10s %14s %9s %10s %10s %10s %8s %8s\n", "algorithm",
                "energy[mWh]", "samples", "predicted", "mse", "max_gap_s", "dE%",
                "dN%");
  out << buf;
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof buf, "%-10s %14.4f %9llu %10llu %10.5f %10.2f %8.1f %8.1f\n",
                  to_string(row.algorithm), row.consumed_mwh,
                  static_cast<unsigned long long>(row.sample_count),
                  static_cast<unsigned long long>(row.predicted_count), row.mse,
                  row.max_gap_s, 100.0 * row.energy_reduction_vs_fixed,
                  100.0 * row.sample_reduction_vs_fixed);
    out << buf;
  }
}

void write_metrics_csv(std::ostream& out, const Scenario& sc, const RunResult& result) {
  out << "metric,value\n";
  char buf[160];
  std::snprintf(buf, sizeof buf, "algorithm,%s\n", to_string(sc.node.algorithm));
  out << buf;
  std::snprintf(buf, sizeof buf, "sample_count,%llu\n",
                static_cast<unsigned long long>(result.metrics.sample_count));
  out << buf;
  std::snprintf(buf, sizeof buf, "predicted_count,%llu\n",
                static_cast<unsigned long long>(result.metrics.predicted_count));
  out << buf;
  std::snprintf(buf, sizeof buf, "mse_sampled,%.10g\n", result.metrics.mse_sampled);
  out << buf;
  std::snprintf(buf, sizeof buf, "consumed_mwh_total,%.10g\n",
                result.metrics.consumed_mwh_total);
  out << buf;
  std::snprintf(buf, sizeof buf, "plane_max_gap_s,%.10g\n", result.metrics.plane_max_gap_s);
  out << buf;
  std::snprintf(buf, sizeof buf, "interarrival_cv,%.10g\n", result.interarrival_cv);
  out << buf;
  for (const auto& [id, summary] : result.nodes) {
    std::snprintf(buf, sizeof buf, "node_%d_consumed_mwh,%.10g\n", id,
                  summary.ledger.consumed_mj / 3.6);
    out << buf;
    std::snprintf(buf, sizeof buf, "node_%d_remaining_mj,%.10g\n", id,
                  summary.ledger.remaining_mj);
    out << buf;
    std::snprintf(buf, sizeof buf, "node_%d_final_class,%s\n", id,
                  to_string(summary.final_class));
    out << buf;
  }
}

void write_manifest_json(std::ostream& out, const Scenario& sc,
                         const std::vector<std::string>& artifacts,
                         const std::map<std::string, std::string>& overrides) {
  nlohmann::json j;
  j["scenario"] = sc.name;
  j["seed"] = sc.seed;
  j["config_hash"] = sc.config_hash();
  j["duration_s"] = sc.duration_s;
  j["algorithm"] = to_string(sc.node.algorithm);
  j["artifacts"] = artifacts;
  j["overrides"] = overrides;
  out << j.dump(2) << "\n";
}

}  // namespace asmp
