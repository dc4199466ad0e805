#include "doctest.h"
#include "fogtraffic/app.hpp"

using namespace fogtraffic;
using namespace fogtraffic::literals;

namespace {

// Kernel, devices and application wired together without any traffic.
struct Harness {
  explicit Harness(ScenarioConfig c = paper_default(), std::size_t queued = 0)
      : config(std::move(c)),
        topo(build_topology(standard_description(config.topology_params()))),
        net(sim, topo),
        proc(sim, topo),
        assignment(topo.fog_count()),
        app(sim, topo, net, proc, config, RngStream(config.seed),
            {.queue_length = [queued](std::size_t) { return queued; },
             .on_slot_status = [this](std::size_t road, std::uint64_t n) { reported.emplace_back(road, n); },
             .current_assignment = [this] { return assignment; }}) {}

  ScenarioConfig config;
  Simulator sim;
  Topology topo;
  Network net;
  Processing proc;
  LedAssignment assignment;
  std::vector<std::pair<std::size_t, std::uint64_t>> reported;
  Application app;
};

ScenarioConfig free_of_cost() {
  ScenarioConfig c = paper_default();
  c.latency = {0, 0, 0};
  c.sensor.cpu_min_mi = c.sensor.cpu_max_mi = 0;
  c.sensor.nw_min_kb = c.sensor.nw_max_kb = 0;
  c.app = {.slot_detector_mi = 0, .signal_controller_mi = 0, .cloud_archive_mi = 0, .slot_status_kb = 0,
           .led_command_kb = 0, .archive_kb = 0};
  return c;
}

}  // namespace

TEST_SUITE("app") {
  TEST_CASE("a camera emits every period starting one period in") {
    Harness h;
    h.app.start_sensor(0, 5_s);
    h.sim.run_until(60_s);
    const auto& times = h.app.frame_times()[0];
    REQUIRE(times.size() == 12);
    CHECK(times.front() == 5_s);
    for (std::size_t i = 1; i < times.size(); ++i) CHECK(times[i] - times[i - 1] == 5_s);
  }

  TEST_CASE("non-positive period is rejected") {
    Harness h;
    CHECK_THROWS(h.app.start_sensor(0, 0_ms));
    CHECK_THROWS(h.app.start_sensor(0, SimTime::ms(-1000)));
  }

  TEST_CASE("slot status carries the camera's count") {
    SUBCASE("empty road") {
      Harness h(paper_default(), 0);
      h.app.start_sensor(2, 5_s);
      h.sim.run_until(6_s);
      h.app.stop_sensors();
      h.sim.run_to_completion();
      REQUIRE(h.reported.size() == 1);
      CHECK(h.reported[0] == std::pair<std::size_t, std::uint64_t>{2, 0});
      CHECK(h.app.led_commands_sent() == 0);  // already red
      REQUIRE(h.app.samples().size() == 1);
      CHECK_FALSE(h.app.samples()[0].led_changed);
    }
    SUBCASE("seven waiting") {
      Harness h(paper_default(), 7);
      h.app.start_sensor(0, 5_s);
      h.sim.run_until(6_s);
      h.app.stop_sensors();
      h.sim.run_to_completion();
      REQUIRE(h.reported.size() == 1);
      CHECK(h.reported[0].second == 7);
    }
  }

  TEST_CASE("every frame is archived once the run drains") {
    Harness h;
    h.app.start_sensors();
    h.sim.run_until(300_s);
    h.app.stop_sensors();
    h.sim.run_to_completion();
    CHECK(h.app.frames_emitted() == 4 * 60);
    CHECK(h.app.archives_received() == h.app.frames_emitted());
    CHECK(h.app.slot_status_handled() == h.app.frames_emitted());
    CHECK(h.app.samples().size() == h.app.frames_emitted());
    CHECK(h.net.in_flight() == 0);
  }

  TEST_CASE("LED updates") {
    Harness h;
    const LedAssignment green0 = path(0, 1, 4);
    std::vector<bool> commits;
    auto record = [&](bool changed) { commits.push_back(changed); };

    CHECK(h.app.update_leds(0, green0, record) == 2);
    CHECK(h.app.commanded_led(0) == LedColor::Green);
    CHECK(h.app.committed_led(0) == LedColor::Red);  // not yet delivered
    h.sim.run_to_completion();
    CHECK(h.app.committed_led(0) == LedColor::Green);
    // proxy -> fog -> LED: 100 + 50 ms plus 0.5 KB over the fog downlink.
    const SimTime expected = 150_ms + SimTime::seconds(0.5 / default_fog_spec().downlink_bw);
    REQUIRE(h.app.led_commits().size() == 1);
    CHECK(h.app.led_commits()[0].at == expected);

    // Same assignment again: nothing to send.
    CHECK(h.app.update_leds(0, green0, record) == 0);
    CHECK(commits == std::vector<bool>{true, false});

    LedAssignment bad({{true, false, true}, {true, false, false}, {true, false, false}, {true, false, false}});
    CHECK_THROWS_AS(h.app.update_leds(0, bad, record), ControllerError);
    CHECK_THROWS_AS(h.app.update_leds(0, LedAssignment(3), record), ControllerError);
  }

  TEST_CASE("refresh invariant: at most one LED change per road between frames") {
    Harness h;
    h.app.start_sensors();
    // Flip the signal every second so many decisions are possible.
    std::function<void()> flip = [&] {
      const std::size_t g = static_cast<std::size_t>(h.sim.now().count() / 1000) % 4;
      h.assignment = path(g, (g + 1) % 4, 4);
      if (h.sim.now() < 200_s) h.sim.schedule(EventKind::Generic, 1_s, flip);
    };
    h.sim.schedule(EventKind::Generic, 1_s, flip);
    h.sim.run_until(200_s);
    h.app.stop_sensors();
    h.sim.run_to_completion();
    for (std::size_t r = 0; r < 4; ++r) {
      const auto& frames = h.app.frame_times()[r];
      std::size_t changes = 0;
      for (const LedCommit& c : h.app.led_commits()) changes += c.road == r;
      CHECK(changes <= frames.size());
    }
  }

  TEST_CASE("loop delay") {
    const std::vector<SimTime> s{10_s, 20_s, 30_s};
    CHECK(loop_delay(s) == 20.0);
    const std::vector<SimTime> one{7_s};
    CHECK(loop_delay(one) == 7.0);
    CHECK_FALSE(loop_delay(std::span<const SimTime>{}).has_value());

    Harness h(free_of_cost());
    h.app.start_sensors();
    h.sim.run_until(30_s);
    h.app.stop_sensors();
    h.sim.run_to_completion();
    REQUIRE_FALSE(h.app.samples().empty());
    CHECK(loop_delay(h.app.samples()) == 0.0);
  }

  TEST_CASE("loop samples are non-negative and one per frame") {
    Harness h(paper_default(), 3);
    h.assignment = path(1, 0, 4);
    h.app.start_sensors();
    h.sim.run_until(100_s);
    h.app.stop_sensors();
    h.sim.run_to_completion();
    CHECK(h.app.samples().size() == h.app.frames_emitted());
    std::size_t changed = 0;
    for (const LoopSample& s : h.app.samples()) {
      CHECK(s.latency() >= 0_ms);
      changed += s.led_changed;
    }
    CHECK(changed == 1);  // road 2 turned green once
  }
}
