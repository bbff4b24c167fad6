#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <vector>

#include "asmp/node.hpp"

namespace asmp {

enum class PointKind { Sampled, Predicted };
enum class PredictionOrigin { None, Correction, TrendSkip, Recovery };

const char* to_string(PointKind k);
const char* to_string(PredictionOrigin o);

// One entry of the collected data plane. Predicted points carry the origin of
// the fill; sampled points carry none.
struct PlanePoint {
  int node = 0;
  double time = 0.0;
  double value = 0.0;
  PointKind kind = PointKind::Sampled;
  PredictionOrigin origin = PredictionOrigin::None;
};

struct QosMetrics {
  std::uint64_t sample_count = 0;
  std::uint64_t predicted_count = 0;
  double mse_sampled = 0.0;            // mean squared sample-to-target distance
  std::map<int, double> consumed_mwh;  // per node
  double consumed_mwh_total = 0.0;
  double plane_max_gap_s = 0.0;        // widest hole in the combined plane
  bool empty_warning = false;
};

struct LedgerSnapshot {
  double consumed_mj = 0.0;
  double remaining_mj = 0.0;
  bool alive = true;
};

// Server side of the dual prediction scheme: ingest timestamp-ordered packets
// per node, append the sampled points, place the fills the class information
// announces, and retire forecasts that a real sample supersedes.
class CollectedPlane {
 public:
  explicit CollectedPlane(double duration_s, bool verify_recompute = false);

  // Register a node so the recomputation mirror can track its estimates.
  void register_node(int id, const NodeConfig& cfg);

  // Throws std::logic_error on out-of-order arrival or, in verification
  // mode, when a carried estimate disagrees with the mirrored one.
  void ingest(const NodePacket& pkt);

  // Drop forecasts at or after a fresh sample's time; older pending ones
  // materialize (the past is immutable). Called by ingest, exposed for tests.
  void cancel_stale_predictions(int node, double new_sample_time);

  // Materialize whatever is still pending within the run duration.
  void finalize();

  const std::vector<PlanePoint>& points() const { return points_; }
  double duration_s() const { return duration_s_; }

  std::uint64_t scheduled(PredictionOrigin o) const;
  std::uint64_t cancelled(PredictionOrigin o) const;
  std::uint64_t materialized(PredictionOrigin o) const;
  std::uint64_t announced_recovery_fills() const { return announced_recovery_; }

  void write_csv(std::ostream& out) const;

 private:
  struct Pending {
    double time = 0.0;
    double value = 0.0;
    PredictionOrigin origin = PredictionOrigin::None;
  };
  struct Mirror {
    AsaState state;
    NodeConfig cfg;
    bool active = false;
  };

  void materialize_until(int node, double time_exclusive);
  void verify_against_mirror(const NodePacket& pkt);

  double duration_s_;
  bool verify_;
  bool finalized_ = false;
  std::vector<PlanePoint> points_;
  std::map<int, std::vector<Pending>> pending_;   // time-ordered per node
  std::map<int, double> last_sample_time_;
  std::map<int, Mirror> mirrors_;
  std::map<PredictionOrigin, std::uint64_t> scheduled_, cancelled_, materialized_;
  std::uint64_t announced_recovery_ = 0;
};

// Counts, per-node energy (converted to the reporting unit, consumed_mj/3.6),
// sampled-point error against the grid and the widest plane hole. Gap scan
// covers scenario start to end for nodes that stayed alive.
QosMetrics compute_metrics(const CollectedPlane& plane,
                           const std::map<int, LedgerSnapshot>& ledgers,
                           const TargetGrid& grid);

}  // namespace asmp
