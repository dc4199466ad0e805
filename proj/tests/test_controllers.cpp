#include <algorithm>

#include "doctest.h"
#include "fogtraffic/controllers.hpp"

using namespace fogtraffic;
using namespace fogtraffic::literals;

namespace {

using Counts = std::vector<std::uint64_t>;
enum Lamp { Red, Yellow, Green };
using Board = std::array<Lamp, 4>;

// The path function for four roads, one branch per enumerated case. Roads are
// 1-based here to keep the branches readable.
Board path_cases(int s, int d) {
  Board b{Green, Green, Green, Green};
  if (s == 1 && d == 2) b = {Green, Red, Red, Red};
  else if (s == 1 && d == 3) b = {Green, Red, Red, Red};
  else if (s == 1 && d == 4) b = {Green, Red, Red, Red};
  if (s == 2 && d == 1) b = {Red, Green, Red, Red};
  else if (s == 2 && d == 3) b = {Red, Green, Red, Red};
  else if (s == 2 && d == 4) b = {Red, Green, Red, Red};
  if (s == 3 && d == 1) b = {Red, Red, Green, Red};
  else if (s == 3 && d == 2) b = {Red, Red, Green, Red};
  else if (s == 3 && d == 4) b = {Red, Red, Green, Red};
  if (s == 4 && d == 1) b = {Red, Red, Red, Green};
  else if (s == 4 && d == 2) b = {Red, Red, Red, Green};
  else if (s == 4 && d == 3) b = {Red, Red, Red, Green};
  return b;
}

// Plays a plan forward and checks at every boundary that at most one road is
// green or yellow.
void check_safety(const PhasePlan& plan) {
  const auto tl = plan.timeline(1_s);
  for (std::size_t i = 0; i < tl.size(); ++i) {
    REQUIRE(tl[i].end >= tl[i].start);
    for (std::size_t j = i + 1; j < tl.size(); ++j) {
      const bool overlap = tl[i].start < tl[j].end && tl[j].start < tl[i].end;
      REQUIRE_FALSE(overlap);
    }
  }
}

}  // namespace

TEST_SUITE("path") {
  TEST_CASE("matches the enumerated cases for every pair of four roads") {
    int cases = 0;
    for (int s = 1; s <= 4; ++s) {
      for (int d = 1; d <= 4; ++d) {
        if (s == d) continue;
        ++cases;
        const LedAssignment a = path(static_cast<std::size_t>(s - 1), static_cast<std::size_t>(d - 1), 4);
        const Board expected = path_cases(s, d);
        for (std::size_t r = 0; r < 4; ++r) {
          CAPTURE(s);
          CAPTURE(d);
          CAPTURE(r);
          CHECK(static_cast<int>(a.active(r)) == static_cast<int>(expected[r]));
        }
        CHECK_NOTHROW(a.validate());
      }
    }
    CHECK(cases == 12);
  }

  TEST_CASE("examples") {
    const LedAssignment a = path(0, 1, 4);
    CHECK(a.active(0) == LedColor::Green);
    CHECK(a.active(1) == LedColor::Red);
    const LedAssignment b = path(3, 2, 4);
    CHECK(b.active(3) == LedColor::Green);
    for (std::size_t r = 0; r < 3; ++r) CHECK(b.active(r) == LedColor::Red);
    CHECK_THROWS_AS(path(0, 0, 4), ControllerError);
    CHECK_THROWS_AS(path(0, 4, 4), ControllerError);
  }

  TEST_CASE("generalizes to more roads") {
    const LedAssignment a = path(9, 2, 14);
    for (std::size_t r = 0; r < 14; ++r) CHECK(a.active(r) == (r == 9 ? LedColor::Green : LedColor::Red));
  }

  TEST_CASE("assignment validation") {
    LedAssignment a(2);
    CHECK_NOTHROW(a.validate());
    LedAssignment both({{true, false, true}, {true, false, false}});
    CHECK_THROWS_AS(both.validate(), ControllerError);
    LedAssignment dark({{false, false, false}, {true, false, false}});
    CHECK_THROWS_AS(dark.validate(), ControllerError);
    LedAssignment two_green({{false, false, true}, {false, false, true}});
    CHECK_THROWS_WITH_AS(two_green.validate(), doctest::Contains("more than one road"), ControllerError);
    const std::vector<Signal> sig{Signal::Yellow, Signal::Red};
    CHECK(LedAssignment::from_signals(sig).active(0) == LedColor::Yellow);
  }
}

TEST_SUITE("itcms") {
  TEST_CASE("equal demand") {
    const PhasePlan p = itcms_plan(Counts{10, 10, 10, 10}, {}, 5_s);
    REQUIRE(p.served().size() == 4);
    for (const Phase& ph : p.phases) CHECK(ph.green == 25_s);
    CHECK(p.yellow_count() == 3);
    CHECK(p.length() == 115_s);
    const auto tl = p.timeline();
    REQUIRE(tl.size() == 7);
    CHECK(tl[1].signal == Signal::Yellow);
    CHECK(tl[1].start == 25_s);
    CHECK(tl[1].end == 30_s);
    CHECK(tl.back().end == 115_s);
  }

  TEST_CASE("single loaded road") {
    const PhasePlan p = itcms_plan(Counts{40, 0, 0, 0}, {}, 5_s);
    CHECK(p.phases[0].green == 100_s);
    for (std::size_t r = 1; r < 4; ++r) CHECK(p.phases[r].green == 0_ms);
    CHECK(p.served().size() == 1);
    CHECK(p.length() == 100_s);
  }

  TEST_CASE("no demand idles for the minimum cycle") {
    const PhasePlan p = itcms_plan(Counts{0, 0, 0, 0}, {}, 5_s);
    CHECK(p.served().empty());
    CHECK(p.idle == 10_s);
    CHECK(p.length() == 10_s);
    CHECK(p.timeline().empty());
  }

  TEST_CASE("property: proportional, monotone, safe") {
    Rng rng(31);
    for (int trial = 0; trial < 3000; ++trial) {
      const std::size_t roads = 1 + rng.index(14);
      Counts counts(roads);
      for (auto& c : counts) c = rng.index(90);
      const PhasePlan p = itcms_plan(counts, {}, 5_s);
      check_safety(p);
      const std::uint64_t total = total_vehicles(counts);
      if (total > 0) {
        const double cycle = static_cast<double>(cycle_time(total, 2500_ms).count());
        for (std::size_t r = 0; r < roads; ++r) {
          const double ratio = static_cast<double>(p.phases[r].green.count()) / cycle;
          REQUIRE(std::abs(ratio - *road_share(counts[r], total)) * cycle <= 1.0);
        }
      }
      // Bumping one road never shortens its green.
      const std::size_t r = rng.index(roads);
      Counts more = counts;
      more[r] += 1 + rng.index(10);
      REQUIRE(itcms_plan(more, {}, 5_s).phases[r].green >= p.phases[r].green);
    }
  }
}

TEST_SUITE("stl") {
  TEST_CASE("fixed cycle") {
    const PhasePlan p = stl_plan(std::vector<bool>(4, false), {}, 0_ms);
    CHECK(p.length() == 120_s);
    for (const Phase& ph : p.phases) CHECK(ph.green == 30_s);
  }

  TEST_CASE("a congested road gets the extension") {
    const PhasePlan p = stl_plan({false, true, false, false}, {}, 0_ms);
    CHECK(p.phases[1].green == 46_s);
    CHECK(p.length() == 136_s);
  }

  TEST_CASE("congestion trigger") {
    const std::vector<std::size_t> caps(4, 80);
    CHECK(stl_congestion(Counts{39, 40, 0, 80}, caps, 0.5) == std::vector<bool>{false, true, false, true});
  }

  TEST_CASE("reference arithmetic") {
    // 90 s of red at 2 cars per 15 s, and 30 s of green at 3 cars per 6 s.
    CHECK((90 / 15) * 2 == 12);
    CHECK((30 / 6) * 3 == 15);
  }

  TEST_CASE("yellow between greens") {
    const PhasePlan p = stl_plan(std::vector<bool>(4, false), {}, 5_s);
    CHECK(p.length() == 135_s);
    check_safety(p);
  }
}

TEST_SUITE("iov") {
  TEST_CASE("occupancy to green") {
    const PhasePlan p = iov_plan(Counts{80, 0, 12, 500}, {}, 5_s);
    CHECK(p.phases[0].green == 200_s);
    CHECK(p.phases[1].green == 0_ms);
    CHECK(p.phases[2].green == 30_s);
    CHECK(p.phases[3].green == 200_s);
    CHECK(p.served().size() == 3);
    check_safety(p);
  }

  TEST_CASE("entry model estimates occupancy from time since green") {
    ControllerConfig cfg;
    cfg.kind = ControllerKind::Iov;
    CycleSnapshot snap{.counts = {0, 0}, .capacities = {80, 80}, .since_last_green = {30_s, 1_s}};
    const PhasePlan p = plan_cycle(cfg, snap);
    CHECK(p.phases[0].green == 30_s);  // 12 cars
    CHECK(p.phases[1].green == 0_ms);
    cfg.iov_occupancy = IovOccupancy::Sensed;
    snap.counts = {4, 2};
    const PhasePlan q = plan_cycle(cfg, snap);
    CHECK(q.phases[0].green == 10_s);
    CHECK(q.phases[1].green == 5_s);
  }
}

TEST_SUITE("controller selection") {
  TEST_CASE("parse") {
    CHECK(parse_controller("itcms") == ControllerKind::Itcms);
    CHECK(parse_controller("stl") == ControllerKind::Stl);
    CHECK(parse_controller("iov") == ControllerKind::Iov);
    CHECK_THROWS_WITH_AS(parse_controller("foo"), doctest::Contains("itcms, stl, iov"), ControllerError);
  }

  TEST_CASE("plan_cycle dispatch") {
    ControllerConfig cfg;
    CycleSnapshot snap{.counts = {10, 10, 10, 10}, .capacities = {80, 80, 80, 80}, .since_last_green = {}};
    snap.since_last_green.assign(4, 0_ms);
    CHECK(plan_cycle(cfg, snap).phases[0].green == 25_s);
    cfg.kind = ControllerKind::Stl;
    CHECK(plan_cycle(cfg, snap).phases[0].green == 30_s);
  }
}
