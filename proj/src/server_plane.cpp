#include "asmp/server_plane.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace asmp {

const char* to_string(PointKind k) {
  return k == PointKind::Sampled ? "sampled" : "predicted";
}

const char* to_string(PredictionOrigin o) {
  switch (o) {
    case PredictionOrigin::None:       return "none";
    case PredictionOrigin::Correction: return "correction";
    case PredictionOrigin::TrendSkip:  return "trend_skip";
    case PredictionOrigin::Recovery:   return "recovery";
  }
  return "?";
}

CollectedPlane::CollectedPlane(double duration_s, bool verify_recompute)
    : duration_s_(duration_s), verify_(verify_recompute) {}

void CollectedPlane::register_node(int id, const NodeConfig& cfg) {
  Mirror m;
  m.cfg = cfg;
  m.state = AsaState::with_initial_rate(cfg.initial_rate_hz);
  m.active = cfg.algorithm != AlgorithmVariant::Fixed;
  mirrors_[id] = std::move(m);
}

void CollectedPlane::materialize_until(int node, double time_exclusive) {
  auto it = pending_.find(node);
  if (it == pending_.end()) return;
  auto& queue = it->second;
  std::size_t taken = 0;
  for (; taken < queue.size() && queue[taken].time < time_exclusive; ++taken) {
    const Pending& p = queue[taken];
    points_.push_back({node, p.time, p.value, PointKind::Predicted, p.origin});
    materialized_[p.origin] += 1;
  }
  queue.erase(queue.begin(), queue.begin() + static_cast<long>(taken));
}

void CollectedPlane::cancel_stale_predictions(int node, double new_sample_time) {
  auto it = pending_.find(node);
  if (it == pending_.end()) return;
  auto& queue = it->second;
  auto first_stale = std::find_if(queue.begin(), queue.end(), [&](const Pending& p) {
    return p.time >= new_sample_time;
  });
  for (auto q = first_stale; q != queue.end(); ++q) cancelled_[q->origin] += 1;
  queue.erase(first_stale, queue.end());
}

void CollectedPlane::verify_against_mirror(const NodePacket& pkt) {
  auto it = mirrors_.find(pkt.node);
  if (it == mirrors_.end() || !it->second.active) return;
  Mirror& m = it->second;

  const RateDecision decision = asa_step(m.state, pkt.sample, m.cfg.grid, m.cfg.limits);
  const auto mismatch = [&](const char* what) {
    throw std::logic_error(std::string("plane mirror mismatch on node ") +
                           std::to_string(pkt.node) + ": " + what);
  };
  if (decision.condition != pkt.condition) mismatch("condition");
  if (decision.period != pkt.asa_period) mismatch("base period");
  if (decision.correction_delay.has_value() != pkt.correction_delay.has_value() ||
      (decision.correction_delay && *decision.correction_delay != *pkt.correction_delay))
    mismatch("correction delay");
  if (m.state.velocity.post() != pkt.velocity_post) mismatch("post velocity");

  if (pkt.info == ClassInfoKind::CasaSkip) {
    const CasaDecision skip = casa_step(m.state, decision, m.cfg.casa, m.cfg.grid,
                                        m.cfg.limits, pkt.sample.value);
    if (!skip.skip) mismatch("skip eligibility");
    if (skip.period != pkt.next_expected_delay) mismatch("skip period");
    if (skip.predict_delay != pkt.predict_delay) mismatch("skip fill delay");
    apply_casa_skip(m.state, skip);
  } else if (pkt.info == ClassInfoKind::RasaFactor) {
    // The extension factor depends on the node's energy account and cannot be
    // recomputed here; mirror the carried factor's feedback instead.
    RasaDecision ext;
    ext.factor = pkt.rasa_factor;
    ext.base_period = decision.period;
    ext.period = static_cast<double>(pkt.rasa_factor) * decision.period;
    ext.corrected_target = round_to_grid(
        m.state.target_prev + m.state.velocity.next *
                                  (static_cast<double>(pkt.rasa_factor - 1) * decision.period),
        m.cfg.grid);
    if (ext.period != pkt.next_expected_delay) mismatch("extension period");
    apply_rasa_extension(m.state, ext);
  }
  if (m.state.velocity.next != pkt.velocity_next) mismatch("predicted velocity");

  // Alarm pin overrides the estimate on the node; mirror the same rule.
  if (m.cfg.grid.event_threshold && pkt.sample.value >= *m.cfg.grid.event_threshold) {
    const double pinned = m.cfg.limits.floor_period > 0.0 ? m.cfg.limits.floor_period
                                                          : m.cfg.limits.alarm_period;
    m.state.rate = 1.0 / pinned;
  }
}

void CollectedPlane::ingest(const NodePacket& pkt) {
  if (finalized_) throw std::logic_error("plane: ingest after finalize");
  const double t = pkt.sample.time;
  auto last = last_sample_time_.find(pkt.node);
  if (last != last_sample_time_.end() && t <= last->second)
    throw std::logic_error("plane: out-of-order packet for node " +
                           std::to_string(pkt.node));
  last_sample_time_[pkt.node] = t;

  materialize_until(pkt.node, t);
  cancel_stale_predictions(pkt.node, t);

  if (verify_) verify_against_mirror(pkt);

  points_.push_back({pkt.node, t, pkt.sample.value, PointKind::Sampled,
                     PredictionOrigin::None});

  auto& queue = pending_[pkt.node];
  const auto schedule = [&](double at, double value, PredictionOrigin origin) {
    scheduled_[origin] += 1;
    if (at > duration_s_) {
      cancelled_[origin] += 1;  // never materializes inside the run
      return;
    }
    queue.push_back({at, value, origin});
  };

  // Error condition: one corrective fill after the carried delay.
  if (pkt.condition == SamplingCondition::Error && pkt.correction_delay) {
    schedule(t + *pkt.correction_delay,
             pkt.sample.value + pkt.velocity_post * *pkt.correction_delay,
             PredictionOrigin::Correction);
  }
  // Skip announcement: one fill at the base period.
  if (pkt.info == ClassInfoKind::CasaSkip) {
    schedule(t + pkt.predict_delay,
             pkt.sample.value + pkt.velocity_next * pkt.predict_delay,
             PredictionOrigin::TrendSkip);
  }
  // Recovery announcement: factor - 1 fills, one per base period.
  if (pkt.info == ClassInfoKind::RasaFactor) {
    announced_recovery_ += static_cast<std::uint64_t>(pkt.rasa_factor - 1);
    for (long long k = 1; k < pkt.rasa_factor; ++k) {
      const double offset = static_cast<double>(k) * pkt.asa_period;
      schedule(t + offset, pkt.sample.value + pkt.velocity_next * offset,
               PredictionOrigin::Recovery);
    }
  }
  std::sort(queue.begin(), queue.end(),
            [](const Pending& a, const Pending& b) { return a.time < b.time; });
}

void CollectedPlane::finalize() {
  if (finalized_) return;
  for (auto& [node, queue] : pending_) {
    (void)queue;
    materialize_until(node, duration_s_ + 1e-9);
  }
  for (auto& [node, queue] : pending_) {
    for (const Pending& p : queue) cancelled_[p.origin] += 1;
    queue.clear();
  }
  std::stable_sort(points_.begin(), points_.end(), [](const PlanePoint& a, const PlanePoint& b) {
    if (a.time != b.time) return a.time < b.time;
    return a.node < b.node;
  });
  finalized_ = true;
}

std::uint64_t CollectedPlane::scheduled(PredictionOrigin o) const {
  auto it = scheduled_.find(o);
  return it == scheduled_.end() ? 0 : it->second;
}

std::uint64_t CollectedPlane::cancelled(PredictionOrigin o) const {
  auto it = cancelled_.find(o);
  return it == cancelled_.end() ? 0 : it->second;
}

std::uint64_t CollectedPlane::materialized(PredictionOrigin o) const {
  auto it = materialized_.find(o);
  return it == materialized_.end() ? 0 : it->second;
}

void CollectedPlane::write_csv(std::ostream& out) const {
  out << "node,time_s,value,kind,origin\n";
  char buf[128];
  for (const PlanePoint& p : points_) {
    std::snprintf(buf, sizeof buf, "%d,%.10g,%.10g,%s,%s\n", p.node, p.time, p.value,
                  to_string(p.kind), to_string(p.origin));
    out << buf;
  }
}

QosMetrics compute_metrics(const CollectedPlane& plane,
                           const std::map<int, LedgerSnapshot>& ledgers,
                           const TargetGrid& grid) {
  QosMetrics m;
  const auto& points = plane.points();
  if (points.empty()) m.empty_warning = true;

  double sq_sum = 0.0;
  std::map<int, std::vector<double>> times_per_node;
  for (const PlanePoint& p : points) {
    times_per_node[p.node].push_back(p.time);
    if (p.kind == PointKind::Sampled) {
      m.sample_count += 1;
      const double err = p.value - quantize(p.value, grid).nearest;
      sq_sum += err * err;
    } else {
      m.predicted_count += 1;
    }
  }
  m.mse_sampled = m.sample_count > 0 ? sq_sum / static_cast<double>(m.sample_count) : 0.0;

  for (const auto& [node, led] : ledgers) {
    const double mwh = led.consumed_mj / 3.6;
    m.consumed_mwh[node] = mwh;
    m.consumed_mwh_total += mwh;
  }

  // Widest hole per surviving node, scenario edges included. Times are
  // already sorted by finalize().
  const double duration = plane.duration_s();
  for (const auto& [node, ts] : times_per_node) {
    auto led = ledgers.find(node);
    if (led != ledgers.end() && !led->second.alive) continue;
    double prev = 0.0;
    for (double t : ts) {
      if (t - prev > m.plane_max_gap_s) m.plane_max_gap_s = t - prev;
      prev = t;
    }
    if (duration - prev > m.plane_max_gap_s) m.plane_max_gap_s = duration - prev;
  }
  return m;
}

}  // namespace asmp
