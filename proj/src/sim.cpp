#include "asmp/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <queue>
#include <stdexcept>

#include "asmp/rng.hpp"

namespace asmp {

namespace {

constexpr std::uint64_t kStaggerStream = 0x535441474745ULL;
constexpr std::uint64_t kSignalStream = 0x5349474e414cULL;

struct Event {
  double time = 0.0;
  int node = 0;
  EventKind kind = EventKind::Wake;
  std::uint64_t seq = 0;   // FIFO tie-break, assigned at push
  int hop_target = -1;     // delivery: forwarding node, -1 = server ingest
  NodePacket packet;       // delivery payload
  std::uint64_t epoch = 0; // rotation payload
};

struct EventAfter {
  bool operator()(const Event& a, const Event& b) const {
    if (a.time != b.time) return a.time > b.time;
    if (a.node != b.node) return a.node > b.node;
    if (a.kind != b.kind) return static_cast<int>(a.kind) > static_cast<int>(b.kind);
    return a.seq > b.seq;
  }
};

// Dispersion of distinct traffic instants: simultaneous arrivals count as
// one instant, so a fleet on one shared schedule scores zero.
double coefficient_of_variation(const std::vector<double>& sorted_times) {
  std::vector<double> unique = sorted_times;
  unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
  if (unique.size() < 3) return 0.0;
  std::vector<double> gaps;
  gaps.reserve(unique.size() - 1);
  for (std::size_t i = 1; i < unique.size(); ++i)
    gaps.push_back(unique[i] - unique[i - 1]);
  double mean = 0.0;
  for (double g : gaps) mean += g;
  mean /= static_cast<double>(gaps.size());
  if (mean <= 0.0) return 0.0;
  double var = 0.0;
  for (double g : gaps) var += (g - mean) * (g - mean);
  var /= static_cast<double>(gaps.size());
  return std::sqrt(var) / mean;
}

}  // namespace

int rotate_roles(const std::vector<bool>& alive_members, std::uint64_t epoch) {
  const std::size_t count = alive_members.size();
  if (count == 0) return -1;
  const std::size_t start = static_cast<std::size_t>(epoch % count);
  for (std::size_t probe = 0; probe < count; ++probe) {
    const std::size_t idx = (start + probe) % count;
    if (alive_members[idx]) return static_cast<int>(idx);
  }
  return -1;  // cluster inactive
}

void RunResult::write_trace_csv(std::ostream& out) const {
  out << "time_s,node,class,role,condition,class_info,value,target,period_next_s,"
         "remaining_mj,consumed_mj,harvested_mj,quality,alarm,bootstrap\n";
  char buf[512];
  for (const TraceRecord& r : trace) {
    std::snprintf(buf, sizeof buf,
                  "%.10g,%d,%s,%s,%s,%s,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%d,%d\n",
                  r.time_s, r.node, to_string(r.node_class), to_string(r.role),
                  to_string(r.condition), r.class_info.c_str(), r.value, r.target,
                  r.period_next_s, r.remaining_mj, r.consumed_mj, r.harvested_mj,
                  r.quality, r.alarm ? 1 : 0, r.bootstrap ? 1 : 0);
    out << buf;
  }
}

RunResult run(const Scenario& sc) {
  {
    const auto problems = sc.validate();
    if (!problems.empty()) {
      std::string msg = "scenario invalid:";
      for (const auto& p : problems) msg += "\n  " + p;
      throw std::invalid_argument(msg);
    }
  }

  // Per-node signal sources. With per-node variation every node gets its own
  // waveform; the seed mix keeps a node's waveform identical across variants.
  std::vector<SignalSource> sources;
  sources.reserve(static_cast<std::size_t>(sc.node_count));
  for (int i = 0; i < sc.node_count; ++i) {
    if (sc.signal.kind == SignalKind::CsvTrace) {
      sources.push_back(load_csv_trace(sc.signal.csv_path));
    } else {
      const std::uint64_t node_seed =
          sc.signal.per_node_variation
              ? rng::key(sc.seed, kSignalStream, static_cast<std::uint64_t>(i))
              : rng::key(sc.seed, kSignalStream, 0);
      sources.push_back(
          generate_dynamic_transition(sc.signal.dynamic, node_seed, sc.duration_s));
    }
    sources.back().noise_seed = sc.seed;
  }

  HarvestConfig harvest = sc.harvest;
  harvest.seed = sc.seed;

  std::vector<Node> nodes;
  nodes.reserve(static_cast<std::size_t>(sc.node_count));
  std::vector<bool> has_role(static_cast<std::size_t>(sc.node_count), true);
  for (int id : sc.roleless_nodes) has_role[static_cast<std::size_t>(id)] = false;

  NodeConfig node_cfg = sc.node;
  node_cfg.profile.cluster_size = sc.node_count;
  node_cfg.harvest_max_mw = sc.harvest.max_power_mw;
  if (!node_cfg.ewma_initial_mw && sc.harvest.ewma_initial_mw)
    node_cfg.ewma_initial_mw = sc.harvest.ewma_initial_mw;

  CollectedPlane plane(sc.duration_s, sc.verify_server_recompute);
  for (int i = 0; i < sc.node_count; ++i) {
    NodeConfig cfg = node_cfg;
    cfg.has_role = has_role[static_cast<std::size_t>(i)];
    nodes.emplace_back(i, cfg, EnergyLedger::with_charge(sc.energy.initial_mj,
                                                         sc.energy.capacity_mj));
    plane.register_node(i, cfg);
  }

  std::priority_queue<Event, std::vector<Event>, EventAfter> queue;
  std::uint64_t seq = 0;
  const auto push = [&](Event ev) {
    ev.seq = seq++;
    queue.push(std::move(ev));
  };

  // First wakes, optionally staggered.
  for (int i = 0; i < sc.node_count; ++i) {
    if (!has_role[static_cast<std::size_t>(i)]) continue;
    double offset = 0.0;
    if (sc.start_stagger_s > 0.0)
      offset = sc.start_stagger_s *
               rng::uniform(sc.seed, kStaggerStream, static_cast<std::uint64_t>(i));
    Event ev;
    ev.time = offset;
    ev.node = i;
    ev.kind = EventKind::Wake;
    push(ev);
  }
  // Duty rotations, one per epoch.
  for (std::uint64_t epoch = 0; epoch * sc.topology.epoch_s < sc.duration_s; ++epoch) {
    Event ev;
    ev.time = static_cast<double>(epoch) * sc.topology.epoch_s;
    ev.node = -1;
    ev.kind = EventKind::RoleRotation;
    ev.epoch = epoch;
    push(ev);
  }

  RunResult result;
  result.plane = std::move(plane);
  for (int i = 0; i < sc.node_count; ++i) result.nodes[i];

  int sync_node = -1;
  const auto apply_rotation = [&](std::uint64_t epoch) {
    std::vector<bool> alive_members(static_cast<std::size_t>(sc.node_count));
    for (int i = 0; i < sc.node_count; ++i)
      alive_members[static_cast<std::size_t>(i)] =
          nodes[static_cast<std::size_t>(i)].alive() &&
          has_role[static_cast<std::size_t>(i)];
    sync_node = rotate_roles(alive_members, epoch);
    for (int i = 0; i < sc.node_count; ++i) {
      auto& n = nodes[static_cast<std::size_t>(i)];
      if (i == sync_node) n.set_role(NodeRole::Sync);
      else if (std::any_of(sc.topology.relay_via.begin(), sc.topology.relay_via.end(),
                           [&](const auto& kv) { return kv.second == i; }))
        n.set_role(NodeRole::Relay);
      else n.set_role(NodeRole::Edge);
    }
  };

  const auto schedule_delivery = [&](const NodePacket& pkt, double now) {
    // Path: origin, through its relay chain, to the sync, then the server.
    std::vector<int> hops;
    int cur = pkt.node;
    int guard = 0;
    while (cur != sync_node && sync_node >= 0 && guard++ <= sc.node_count) {
      auto via = sc.topology.relay_via.find(cur);
      const int next = via != sc.topology.relay_via.end() ? via->second : sync_node;
      hops.push_back(next);
      cur = next;
    }
    double t = now;
    for (int hop : hops) {
      t += sc.topology.delivery_delay_s;
      Event ev;
      ev.time = t;
      ev.node = pkt.node;
      ev.kind = EventKind::PacketDelivery;
      ev.hop_target = hop;
      ev.packet = pkt;
      push(ev);
    }
    t += sc.topology.delivery_delay_s;
    Event ev;
    ev.time = t;
    ev.node = pkt.node;
    ev.kind = EventKind::PacketDelivery;
    ev.hop_target = -1;
    ev.packet = pkt;
    push(ev);
  };

  while (!queue.empty()) {
    Event ev = queue.top();
    queue.pop();
    if (ev.time > sc.duration_s) continue;

    switch (ev.kind) {
      case EventKind::RoleRotation:
        apply_rotation(ev.epoch);
        break;

      case EventKind::Wake: {
        Node& node = nodes[static_cast<std::size_t>(ev.node)];
        if (!node.alive()) break;
        const SignalSource& src = sources[static_cast<std::size_t>(ev.node)];
        const double value = src.sample(ev.time, static_cast<std::uint64_t>(ev.node),
                                        node.samples_emitted());
        const double quality =
            solar_quality_at(ev.time, harvest, static_cast<std::uint64_t>(ev.node));
        const auto out = node.step(ev.time, value, quality);
        if (!out.packet) break;

        const NodePacket& pkt = *out.packet;
        NodeSummary& summary = result.nodes[ev.node];
        summary.samples += 1;
        if (pkt.info == ClassInfoKind::CasaSkip) summary.skips += 1;
        if (pkt.info == ClassInfoKind::RasaFactor) {
          summary.extension_packets += 1;
          summary.announced_fills += static_cast<std::uint64_t>(pkt.rasa_factor - 1);
        }
        result.decisions += 1;

        TraceRecord rec;
        rec.time_s = ev.time;
        rec.node = ev.node;
        rec.node_class = pkt.node_class;
        rec.role = node.role();
        rec.condition = pkt.condition;
        rec.class_info = pkt.class_info_string();
        rec.value = pkt.sample.value;
        rec.target = pkt.nearest_target;
        rec.period_next_s = pkt.next_expected_delay;
        rec.remaining_mj = node.ledger().remaining_mj;
        rec.consumed_mj = node.ledger().consumed_mj;
        rec.harvested_mj = node.ledger().harvested_mj;
        rec.quality = pkt.harvest_quality;
        rec.alarm = pkt.alarm;
        rec.bootstrap = pkt.bootstrap;
        result.trace.push_back(std::move(rec));

        schedule_delivery(pkt, ev.time);
        if (out.next_wake && *out.next_wake <= sc.duration_s) {
          Event next;
          next.time = *out.next_wake;
          next.node = ev.node;
          next.kind = EventKind::Wake;
          push(next);
        }
        break;
      }

      case EventKind::PacketDelivery: {
        if (ev.hop_target >= 0) {
          Node& fwd = nodes[static_cast<std::size_t>(ev.hop_target)];
          if (ev.hop_target == sync_node) fwd.charge_sync_forward();
          else fwd.charge_relay_forward();
        } else {
          result.plane.ingest(ev.packet);
          result.server_arrivals.push_back(ev.time);
        }
        break;
      }
    }
  }

  std::map<int, LedgerSnapshot> snapshots;
  for (int i = 0; i < sc.node_count; ++i) {
    Node& node = nodes[static_cast<std::size_t>(i)];
    node.finalize(sc.duration_s);
    NodeSummary& summary = result.nodes[i];
    summary.ledger = node.ledger();
    summary.tally = node.tally();
    summary.final_class = node.node_class();
    snapshots[i] = {node.ledger().consumed_mj, node.ledger().remaining_mj,
                    node.ledger().alive};
  }
  result.plane.finalize();
  result.metrics = compute_metrics(result.plane, snapshots, sc.node.grid);

  std::sort(result.server_arrivals.begin(), result.server_arrivals.end());
  result.interarrival_cv = coefficient_of_variation(result.server_arrivals);
  return result;
}

}  // namespace asmp
