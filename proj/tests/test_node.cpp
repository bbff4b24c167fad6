#include <doctest.h>

#include <cmath>

#include "asmp/node.hpp"

using namespace asmp;

namespace {
NodeConfig basic_config() {
  NodeConfig cfg;
  cfg.grid = TargetGrid{1.0, 0.2, std::nullopt};
  cfg.initial_rate_hz = 0.2;
  cfg.algorithm = AlgorithmVariant::Asa;
  return cfg;
}
}  // namespace

TEST_CASE("classify follows the class machine") {
  // below the emergency level
  CHECK(classify(50.0, 100.0, false, true, NodeClass::A, 1.1) == NodeClass::B2);
  // no duty parks the node
  CHECK(classify(500.0, 100.0, false, false, NodeClass::A, 1.1) == NodeClass::C);
  // healthy battery, no decline: initial state
  CHECK(classify(1000.0, 100.0, false, true, NodeClass::A, 1.1) == NodeClass::A);
  // the decline trigger moves a healthy node to B1
  CHECK(classify(1000.0, 100.0, true, true, NodeClass::A, 1.1) == NodeClass::B1);
  // hysteresis: once in B2, recovery needs headroom above the level
  CHECK(classify(105.0, 100.0, false, true, NodeClass::B2, 1.1) == NodeClass::B2);
  CHECK(classify(111.0, 100.0, false, true, NodeClass::B2, 1.1) == NodeClass::A);
  // depletion and death are terminal
  CHECK(classify(0.0, 100.0, false, true, NodeClass::A, 1.1) == NodeClass::Dead);
  CHECK(classify(500.0, 100.0, false, true, NodeClass::Dead, 1.1) == NodeClass::Dead);
}

TEST_CASE("a ramp-following node emits one packet per grid step") {
  Node node(0, basic_config(), EnergyLedger::with_charge(1e6, 1e6));
  const double slope = 0.2;
  double t = 0.0;
  std::optional<double> next;
  for (int i = 0; i < 10; ++i) {
    const auto out = node.step(t, 20.0 + slope * t, 0.0);
    REQUIRE(out.packet);
    REQUIRE(out.next_wake);
    if (i >= 4) CHECK(*out.next_wake - t == doctest::Approx(5.0).epsilon(1e-9));
    next = out.next_wake;
    t = *next;
  }
  CHECK(node.tally().count[static_cast<int>(Operation::Transmit)] == 10);
}

TEST_CASE("a forced-B1 node skips one wake on an eligible trend") {
  NodeConfig cfg = basic_config();
  cfg.algorithm = AlgorithmVariant::AsaCasa;
  Node node(0, cfg, EnergyLedger::with_charge(1e6, 1e6));

  // gentle curvature keeps the velocity variability small but non-zero
  double t = 0.0;
  bool saw_skip = false;
  for (int i = 0; i < 40 && !saw_skip; ++i) {
    const double v = 0.2 + 1e-3 * t / 100.0;
    const auto out = node.step(t, 20.0 + v * t, 0.0);
    REQUIRE(out.packet);
    REQUIRE(out.next_wake);
    if (out.packet->info == ClassInfoKind::CasaSkip) {
      saw_skip = true;
      // the sleep is the announced fill delay plus the follow-up period
      CHECK(out.packet->next_expected_delay > out.packet->asa_period);
      CHECK(out.packet->predict_delay == out.packet->asa_period);
      CHECK(out.packet->class_info_string() == "1");
    }
    t = *out.next_wake;
  }
  CHECK(saw_skip);
}

TEST_CASE("a forced-B2 node in poor light recovers energy wake to wake") {
  NodeConfig cfg = basic_config();
  cfg.algorithm = AlgorithmVariant::AsaRasa;
  cfg.ewma_initial_mw = 0.005;
  cfg.harvest_max_mw = 500.0;
  Node node(0, cfg, EnergyLedger::with_charge(1000.0, 2000.0));

  const double quality = 0.005 / 500.0;  // constant 0.005 mW
  double t = 0.0;
  double prev_remaining = -1.0;
  int extensions = 0;
  for (int i = 0; i < 30; ++i) {
    const auto out = node.step(t, 20.0 + 0.2 * t, quality);
    REQUIRE(out.packet);
    REQUIRE(out.next_wake);
    if (out.packet->info == ClassInfoKind::RasaFactor) {
      ++extensions;
      CHECK(out.packet->rasa_factor >= 2);
      CHECK(out.packet->class_info_string() ==
            std::to_string(out.packet->rasa_factor));
    }
    if (i >= 3) {
      // once extensions run, the account no longer declines between wakes
      if (prev_remaining >= 0.0 && extensions > 0)
        CHECK(node.ledger().remaining_mj >= prev_remaining);
      prev_remaining = node.ledger().remaining_mj;
    }
    t = *out.next_wake;
  }
  CHECK(extensions > 5);
}

TEST_CASE("class info matches the class that produced it") {
  NodeConfig cfg = basic_config();
  cfg.algorithm = AlgorithmVariant::Asmp;
  Node node(0, cfg, EnergyLedger::with_charge(1e8, 1.332e8));
  double t = 0.0;
  for (int i = 0; i < 20; ++i) {
    const auto out = node.step(t, 20.0 + 0.2 * t, 0.0);
    REQUIRE(out.packet);
    const auto& pkt = *out.packet;
    if (pkt.info == ClassInfoKind::CasaSkip) CHECK(pkt.node_class == NodeClass::B1);
    if (pkt.info == ClassInfoKind::RasaFactor) CHECK(pkt.node_class == NodeClass::B2);
    t = *out.next_wake;
  }
}

TEST_CASE("a depleted node dies and stops emitting") {
  NodeConfig cfg = basic_config();
  Node node(0, cfg, EnergyLedger::with_charge(0.2, 1.0));  // barely charged
  double t = 0.0;
  int packets = 0;
  for (int i = 0; i < 50; ++i) {
    const auto out = node.step(t, 20.0 + 0.2 * t, 0.0);
    if (!out.packet) break;
    ++packets;
    REQUIRE(out.next_wake);
    t = *out.next_wake;
  }
  CHECK_FALSE(node.alive());
  CHECK(node.node_class() == NodeClass::Dead);
  CHECK(packets < 50);
  CHECK(node.step(t + 100.0, 20.0, 0.0).packet == std::nullopt);
}

TEST_CASE("a parked node only sleeps") {
  NodeConfig cfg = basic_config();
  cfg.has_role = false;
  Node node(0, cfg, EnergyLedger::with_charge(1000.0, 1000.0));
  CHECK(node.node_class() == NodeClass::C);
  CHECK_FALSE(node.step(0.0, 20.0, 0.0).packet);
  node.finalize(1000.0);
  const double expected = cfg.profile.sleep_mw * 1000.0;
  CHECK(node.ledger().consumed_mj == doctest::Approx(expected));
  CHECK(node.tally().count[static_cast<int>(Operation::Wake)] == 0);
}

TEST_CASE("no wake is scheduled beyond the cap") {
  NodeConfig cfg = basic_config();
  cfg.limits.max_period = 60.0;
  Node node(0, cfg, EnergyLedger::with_charge(1e6, 1e6));
  double t = 0.0;
  for (int i = 0; i < 30; ++i) {
    const auto out = node.step(t, 25.0, 0.0);  // flat signal wants forever
    REQUIRE(out.next_wake);
    CHECK(*out.next_wake - t <= 60.0 + 1e-12);
    t = *out.next_wake;
  }
}

TEST_CASE("crossing the event threshold pins the rate and raises the alarm") {
  NodeConfig cfg = basic_config();
  cfg.grid.event_threshold = 30.0;
  cfg.limits.alarm_period = 2.0;
  Node node(0, cfg, EnergyLedger::with_charge(1e6, 1e6));
  double t = 0.0;
  bool alarmed = false;
  for (int i = 0; i < 60 && !alarmed; ++i) {
    const auto out = node.step(t, 25.0 + 0.2 * t, 0.0);
    REQUIRE(out.packet);
    if (out.packet->sample.value >= 30.0) {
      CHECK(out.packet->alarm);
      CHECK(out.packet->next_expected_delay == doctest::Approx(2.0));
      alarmed = true;
    }
    t = *out.next_wake;
  }
  CHECK(alarmed);
}

TEST_CASE("the emergency level defaults to the outage bound") {
  NodeConfig cfg = basic_config();
  cfg.emergency_level_mj = 0.0;
  const double esp = sampling_energy(cfg.profile, cfg.load, 5.0 - cfg.profile.wake_s());
  CHECK(cfg.emergency_level() ==
        doctest::Approx(43200.0 * cfg.initial_rate_hz * esp).epsilon(1e-6));
  cfg.emergency_level_mj = 123.0;
  CHECK(cfg.emergency_level() == 123.0);
}
