// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <iterator>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "../support.hpp"
#include "fogtraffic/controllers.hpp"
#include "fogtraffic/metrics.hpp"
#include "fogtraffic/runner.hpp"

using namespace fogtraffic;
using namespace fogtraffic::literals;
namespace fs = std::filesystem;
namespace ft = fogtraffic::testing;

namespace {

// Tolerances and limits.
constexpr double kShareTolerance = 1e-12;
constexpr std::int64_t kResidualMs = 1;
constexpr double kMaxSeconds1 = 1.0;
constexpr double kMaxSeconds7 = 30.0;
constexpr double kMaxSeconds8 = 60.0;
constexpr double kMinImprovementPct = 10.0;
constexpr double kSweepRatePerRoad = 0.02;  // cars/s

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(double v, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// Runs shared by several criteria.
std::vector<RunRecord> g_compare_runs;
std::vector<RunRecord> g_sweep_runs;
std::vector<SweepRow> g_sweep_rows;
std::vector<RunRecord> g_other_runs;

Outcome equations() {
  Stopwatch sw;
  Outcome o;
  const std::vector<std::uint64_t> counts{10, 10, 10, 10};
  const std::uint64_t n = total_vehicles(counts);
  const SimTime cycle = cycle_time(n, 2500_ms);
  const auto greens = allocate_green(counts, 2500_ms);
  bool ok = n == 40 && cycle == 100_s;
  for (std::size_t r = 0; r < 4; ++r) {
    ok = ok && road_share(counts[r], n) == 0.25 && green_time(*road_share(counts[r], n), cycle) == 25_s &&
         greens[r] == 25_s;
  }
  ok = ok && std::accumulate(greens.begin(), greens.end(), SimTime{}) == cycle;
  if (!ok) return {false, "worked example [10,10,10,10] does not give N=40, T=100 s, k=0.25, T_r=25 s"};

  Rng rng(20240501);
  double worst_share = 0;
  std::int64_t worst_residual = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    std::vector<std::uint64_t> c(1 + rng.index(14));
    for (auto& x : c) x = rng.index(200);
    c[rng.index(c.size())] += 1;  // at least one vehicle
    const std::uint64_t total = total_vehicles(c);
    const SimTime t_t = cycle_time(total, 2500_ms);
    const auto g = allocate_green(c, 2500_ms);
    double share_sum = 0;
    for (std::size_t r = 0; r < c.size(); ++r) {
      const double k = *road_share(c[r], total);
      share_sum += k;
      worst_residual = std::max(worst_residual, std::abs((g[r] - green_time(k, t_t)).count()));
    }
    worst_share = std::max(worst_share, std::abs(share_sum - 1.0));
    if (std::accumulate(g.begin(), g.end(), SimTime{}) != t_t) {
      o.pass = false;
      o.detail = "sum of greens differs from cycle in trial " + std::to_string(trial);
      return o;
    }
  }
  const double secs = sw.seconds();
  o.pass = worst_share <= kShareTolerance && worst_residual <= kResidualMs && secs < kMaxSeconds1;
  o.detail = "10000 vectors, max |sum k - 1| = " + fmt(worst_share, 15) + ", max residual " +
             std::to_string(worst_residual) + " ms, " + fmt(secs) + " s";
  return o;
}

Outcome stl_arithmetic() {
  const ScenarioConfig cfg = stl_reference();
  const RunRecord run = simulate(cfg);
  g_other_runs.push_back(run);

  bool cycles_ok = run.cycle_starts.size() >= 2;
  for (std::size_t i = 1; i < run.cycle_starts.size(); ++i) {
    cycles_ok = cycles_ok && run.cycle_starts[i] - run.cycle_starts[i - 1] == 120_s;
  }
  const SimTime cycle = run.plans.front().length();

  // Per road and cycle: arrivals while red, crossings while green.
  std::size_t min_red_arrivals = SIZE_MAX, max_red_arrivals = 0, max_exits = 0, full_greens = 0;
  for (const SignalInterval& g : run.signal_timeline) {
    if (g.signal != Signal::Green || g.end - g.start != 30_s) continue;
    const RoadRecord& road = run.roads[g.road];
    std::size_t exits = 0;
    for (const Vehicle& v : road.crossed) exits += *v.crossed_time > g.start && *v.crossed_time <= g.end;
    max_exits = std::max(max_exits, exits);
    full_greens += exits == 15;
    // The red period that follows this green.
    const SimTime red_start = g.end;
    const SimTime red_end = g.start + cycle;
    if (red_end > run.duration) continue;
    std::size_t arrivals = 0;
    for (const auto* list : {&road.crossed, &road.queued}) {
      for (const Vehicle& v : *list) arrivals += v.arrival_time >= red_start && v.arrival_time < red_end;
    }
    min_red_arrivals = std::min(min_red_arrivals, arrivals);
    max_red_arrivals = std::max(max_red_arrivals, arrivals);
  }
  Outcome o;
  o.pass = cycles_ok && cycle == 120_s && min_red_arrivals == 12 && max_red_arrivals == 12 && max_exits == 15 &&
           full_greens > 0;
  o.detail = "cycle " + fmt(cycle.to_seconds(), 0) + " s, arrivals per red " + std::to_string(min_red_arrivals) +
             "-" + std::to_string(max_red_arrivals) + ", max exits per green " + std::to_string(max_exits) + " (" +
             std::to_string(full_greens) + " greens at 15)";
  return o;
}

Outcome iov_capacity() {
  const std::size_t one = road_capacity(400, 4.5, 0.5);
  const std::size_t two = one + road_capacity(400, 4.5, 0.5);
  return {one == 80 && two == 160, "capacity " + std::to_string(one) + ", two roads " + std::to_string(two)};
}

Outcome path_oracle() {
  // Case table for four roads: source road turns green, every other road red.
  struct Case {
    int s, d;
    std::array<LedColor, 4> leds;
  };
  constexpr LedColor G = LedColor::Green, R = LedColor::Red;
  const std::vector<Case> table{
      {1, 2, {G, R, R, R}}, {1, 3, {G, R, R, R}}, {1, 4, {G, R, R, R}},
      {2, 1, {R, G, R, R}}, {2, 3, {R, G, R, R}}, {2, 4, {R, G, R, R}},
      {3, 1, {R, R, G, R}}, {3, 2, {R, R, G, R}}, {3, 4, {R, R, G, R}},
      {4, 1, {R, R, R, G}}, {4, 2, {R, R, R, G}}, {4, 3, {R, R, R, G}},
  };
  int matched = 0;
  for (const Case& c : table) {
    const LedAssignment a = path(static_cast<std::size_t>(c.s - 1), static_cast<std::size_t>(c.d - 1), 4);
    bool ok = true;
    for (std::size_t r = 0; r < 4; ++r) ok = ok && a.active(r) == c.leds[r];
    matched += ok;
  }
  return {matched == 12, std::to_string(matched) + "/12 cases match"};
}

Outcome latency() {
  const ScenarioConfig cfg = paper_default();
  const Topology t = build_topology(standard_description(cfg.topology_params()));
  const SimTime l = t.route_latency("camera-1", "cloud");
  return {l == 350_ms, "camera-1 -> cloud " + std::to_string(l.count()) + " ms"};
}

void run_sweep() {
  ScenarioConfig base = paper_default();
  base.traffic.arrivals[0].rate_per_s = kSweepRatePerRoad;
  g_sweep_rows.clear();
  g_sweep_runs.clear();
  std::vector<std::future<RunRecord>> jobs;
  for (int n : {4, 8, 14}) {
    ScenarioConfig c = base;
    c.roads = n;
    jobs.push_back(std::async(std::launch::async, [c] { return simulate(c); }));
  }
  for (auto& j : jobs) {
    g_sweep_runs.push_back(j.get());
    g_sweep_rows.push_back({g_sweep_runs.back().config.roads, report(g_sweep_runs.back())});
  }
}

double g_sweep_seconds = 0;

Outcome ctt() {
  std::string values;
  bool ok = !g_sweep_rows.empty();
  for (const SweepRow& r : g_sweep_rows) {
    ok = ok && r.report.camera_transmission_time == 5.0;
    values += (values.empty() ? "" : ", ") + std::to_string(r.fog_nodes) + ": " + fmt(r.report.camera_transmission_time, 1);
  }
  return {ok, "CTT by NoFN {" + values + "}"};
}

Outcome controller_ordering() {
  Stopwatch sw;
  Outcome o;
  std::vector<std::future<std::vector<RunRecord>>> jobs;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    jobs.push_back(std::async(std::launch::async, [seed] {
      std::vector<RunRecord> runs;
      for (auto kind : {ControllerKind::Itcms, ControllerKind::Stl, ControllerKind::Iov}) {
        ScenarioConfig c = paper_default();
        c.seed = seed;
        c.controller.kind = kind;
        runs.push_back(simulate(c));
      }
      return runs;
    }));
  }
  double min_stl = 1e9, min_iov = 1e9, sum_stl = 0, sum_iov = 0;
  std::ostringstream per_seed;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto runs = jobs[seed - 1].get();
    const ComparisonTable t = compare({{"itcms", &runs[0]}, {"stl", &runs[1]}, {"iov", &runs[2]}});
    const ComparisonRow& ref = t.row("itcms");
    const ComparisonRow& stl = t.row("stl");
    const ComparisonRow& iov = t.row("iov");
    const bool ordered = ref.total_average_delay && stl.total_average_delay && iov.total_average_delay &&
                         *ref.total_average_delay < *stl.total_average_delay &&
                         *ref.total_average_delay < *iov.total_average_delay && ref.throughput >= stl.throughput &&
                         ref.throughput >= iov.throughput;
    const double r_stl = stl.delay_reduction_pct.value_or(-1e9);
    const double r_iov = iov.delay_reduction_pct.value_or(-1e9);
    o.pass = o.pass && ordered && r_stl >= kMinImprovementPct && r_iov >= kMinImprovementPct;
    min_stl = std::min(min_stl, r_stl);
    min_iov = std::min(min_iov, r_iov);
    sum_stl += r_stl;
    sum_iov += r_iov;
    per_seed << " s" << seed << "=" << fmt(ref.total_average_delay.value_or(-1), 1) << "/"
             << fmt(stl.total_average_delay.value_or(-1), 1) << "/" << fmt(iov.total_average_delay.value_or(-1), 1);
    for (auto& r : runs) g_compare_runs.push_back(std::move(r));
  }
  const double secs = sw.seconds();
  o.pass = o.pass && secs < kMaxSeconds7;
  o.detail = "delay itcms/stl/iov [s]:" + per_seed.str() + "; reduction vs STL mean " + fmt(sum_stl / 5, 1) +
             "% (min " + fmt(min_stl, 1) + "%, target 60%), vs IoV mean " + fmt(sum_iov / 5, 1) + "% (min " +
             fmt(min_iov, 1) + "%, target 30%); " + fmt(secs, 1) + " s";
  return o;
}

Outcome scaling() {
  Outcome o;
  bool ok = g_sweep_rows.size() == 3;
  std::ostringstream d;
  for (std::size_t i = 0; i < g_sweep_rows.size(); ++i) {
    const MetricsReport& r = g_sweep_rows[i].report;
    d << (i ? "; " : "") << "NoFN " << g_sweep_rows[i].fog_nodes << ": TTFU " << fmt(r.total_traffic_flow_usage, 0)
      << ", crossed " << r.crossed << ", ALD " << fmt(r.application_loop_delay.value_or(-1), 4);
    if (i == 0) continue;
    const MetricsReport& p = g_sweep_rows[i - 1].report;
    ok = ok && r.total_traffic_flow_usage > p.total_traffic_flow_usage && r.crossed > p.crossed &&
         r.application_loop_delay && p.application_loop_delay &&
         *r.application_loop_delay >= *p.application_loop_delay;
  }
  o.pass = ok && g_sweep_seconds < kMaxSeconds8;
  o.detail = d.str() + "; " + fmt(g_sweep_seconds, 1) + " s";
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / ("fogtraffic-acceptance-" + std::to_string(::getpid()));
  ScenarioConfig c = paper_default();
  c.roads = 4;
  c.controller.kind = ControllerKind::Itcms;
  c.duration_s = 3600;
  c.seed = 1;
  const auto first = run_scenario(c, root / "a");
  run_scenario(c, root / "b");
  g_other_runs.push_back(first.record);
  std::size_t files = 0;
  std::string differing;
  for (const auto& entry : fs::directory_iterator(root / "a")) {
    if (entry.path().extension() != ".csv") continue;
    ++files;
    if (slurp(entry.path()) != slurp(root / "b" / entry.path().filename())) differing += entry.path().filename().string() + " ";
  }
  fs::remove_all(root);
  return {files >= 4 && differing.empty(),
          std::to_string(files) + " CSV files compared" + (differing.empty() ? ", all identical" : ", differ: " + differing)};
}

std::vector<const RunRecord*> all_runs() {
  std::vector<const RunRecord*> out;
  for (const auto* list : {&g_compare_runs, &g_sweep_runs, &g_other_runs}) {
    for (const RunRecord& r : *list) out.push_back(&r);
  }
  return out;
}

Outcome conservation() {
  std::size_t runs = 0;
  for (const RunRecord* r : all_runs()) {
    ++runs;
    for (const std::string& v : {ft::vehicle_violation(*r), ft::tuple_violation(*r), ft::ttfu_violation(*r)}) {
      if (!v.empty()) return {false, r->config.name + " seed " + std::to_string(r->config.seed) + ": " + v};
    }
  }
  return {runs > 0, std::to_string(runs) + " runs: vehicles, tuples and TTFU recount exact"};
}

Outcome safety() {
  std::size_t runs = 0, intervals = 0;
  for (const auto* list : {&g_compare_runs, &g_sweep_runs}) {
    for (const RunRecord& r : *list) {
      ++runs;
      intervals += r.signal_timeline.size();
      if (const std::string v = ft::timeline_violation(r); !v.empty()) return {false, v};
    }
  }
  return {runs == 18, std::to_string(runs) + " runs, " + std::to_string(intervals) + " signal intervals, no overlap"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> check;
  };
  // The sweep feeds criteria 6, 8, 10 and 11; run it first.
  const std::vector<Criterion> criteria{
      {1, "equations", equations},
      {2, "stl-arithmetic", stl_arithmetic},
      {3, "iov-capacity", iov_capacity},
      {4, "path-oracle", path_oracle},
      {5, "latency-composition", latency},
      {6, "ctt", ctt},
      {7, "controller-ordering", controller_ordering},
      {8, "scaling-trends", scaling},
      {9, "determinism", determinism},
      {10, "conservation", conservation},
      {11, "safety", safety},
  };
  {
    Stopwatch sw;
    try {
      run_sweep();
    } catch (const std::exception& e) {
      std::printf("sweep failed: %s\n", e.what());
    }
    g_sweep_seconds = sw.seconds();
  }
  int failures = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
