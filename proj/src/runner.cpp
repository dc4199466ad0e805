#include "fogtraffic/runner.hpp"

#include <fstream>
#include <future>
#include <sstream>

namespace fogtraffic {

namespace fs = std::filesystem;

namespace {

template <class Fn>
void write_file(const fs::path& path, Fn&& fn) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  fn(out);
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

std::vector<std::string> split(const std::string& list) {
  std::vector<std::string> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    out.push_back(b == std::string::npos ? "" : item.substr(b, e - b + 1));
  }
  return out;
}

template <class T, class Fn>
std::vector<T> map_runs(std::size_t n, bool parallel, Fn&& fn) {
  std::vector<T> out;
  out.reserve(n);
  if (!parallel) {
    for (std::size_t i = 0; i < n; ++i) out.push_back(fn(i));
    return out;
  }
  std::vector<std::future<T>> futures;
  for (std::size_t i = 0; i < n; ++i) futures.push_back(std::async(std::launch::async, fn, i));
  for (auto& f : futures) out.push_back(f.get());
  return out;
}

}  // namespace

void write_run_outputs(const RunRecord& run, const MetricsReport& report, const fs::path& dir) {
  fs::create_directories(dir);
  write_file(dir / "summary.csv", [&](std::ostream& o) { write_summary_csv(o, report); });
  write_file(dir / "throughput.csv", [&](std::ostream& o) { write_throughput_csv(o, report); });
  write_file(dir / "delay.csv", [&](std::ostream& o) { write_delay_csv(o, run); });
  write_file(dir / "energy.csv", [&](std::ostream& o) { write_energy_csv(o, report); });
  write_file(dir / "timing.json", [&](std::ostream& o) { write_timing_json(o, run); });
  write_file(dir / "effective_config.json",
             [&](std::ostream& o) { o << scenario_to_json(run.config).dump(2) << '\n'; });
}

SingleRun run_scenario(const ScenarioConfig& config, const std::optional<fs::path>& out_dir) {
  SingleRun r{simulate(config), {}};
  r.report = report(r.record);
  if (out_dir) write_run_outputs(r.record, r.report, *out_dir);
  return r;
}

std::vector<ControllerKind> parse_controller_list(const std::string& list) {
  std::vector<ControllerKind> out;
  for (const std::string& name : split(list)) {
    try {
      out.push_back(parse_controller(name));
    } catch (const ControllerError& e) {
      throw ConfigError("controllers", e.what());
    }
  }
  if (out.size() < 2) throw ConfigError("controllers", "compare needs at least two controllers");
  return out;
}

ComparisonTable compare_controllers(const ScenarioConfig& base, const std::vector<ControllerKind>& controllers,
                                    const std::optional<fs::path>& out_dir, bool parallel) {
  if (controllers.size() < 2) throw ConfigError("controllers", "compare needs at least two controllers");
  base.validate();
  auto runs = map_runs<SingleRun>(controllers.size(), parallel, [&](std::size_t i) {
    ScenarioConfig c = base;
    c.controller.kind = controllers[i];
    return run_scenario(c, std::nullopt);
  });
  std::vector<NamedRun> named;
  for (std::size_t i = 0; i < runs.size(); ++i) named.push_back({to_string(controllers[i]), &runs[i].record});
  ComparisonTable table = compare(named);
  if (out_dir) {
    for (std::size_t i = 0; i < runs.size(); ++i) {
      write_run_outputs(runs[i].record, runs[i].report, *out_dir / to_string(controllers[i]));
    }
    write_file(*out_dir / "compare.csv", [&](std::ostream& o) { write_compare_csv(o, table); });
  }
  return table;
}

std::vector<int> parse_node_list(const std::string& list) {
  std::vector<int> out;
  for (const std::string& item : split(list)) {
    std::size_t pos = 0;
    int n = 0;
    try {
      n = std::stoi(item, &pos);
    } catch (const std::exception&) {
      throw ConfigError("nodes", "'" + item + "' is not an integer");
    }
    if (pos != item.size()) throw ConfigError("nodes", "'" + item + "' is not an integer");
    if (n < 1) throw ConfigError("nodes", "fog-node counts must be >= 1");
    out.push_back(n);
  }
  if (out.empty()) throw ConfigError("nodes", "at least one fog-node count is required");
  return out;
}

std::vector<SweepRow> sweep_fog_nodes(const ScenarioConfig& base, const std::vector<int>& node_counts,
                                      const std::optional<fs::path>& out_dir, bool parallel) {
  if (node_counts.empty()) throw ConfigError("nodes", "at least one fog-node count is required");
  std::vector<ScenarioConfig> configs;
  for (int n : node_counts) {
    ScenarioConfig c = base;
    c.roads = n;
    if (!c.traffic.road_lengths_m.empty() && c.traffic.road_lengths_m.size() != static_cast<std::size_t>(n)) {
      c.traffic.road_lengths_m.assign(static_cast<std::size_t>(n), c.traffic.road_lengths_m.front());
    }
    if (c.traffic.arrivals.size() > 1 && c.traffic.arrivals.size() != static_cast<std::size_t>(n)) {
      throw ConfigError("traffic.arrivals", "per-road arrivals cannot be reused across a fog-node sweep");
    }
    c.validate();
    configs.push_back(std::move(c));
  }
  auto runs = map_runs<SingleRun>(configs.size(), parallel,
                                  [&](std::size_t i) { return run_scenario(configs[i], std::nullopt); });
  std::vector<SweepRow> rows;
  for (std::size_t i = 0; i < runs.size(); ++i) rows.push_back({node_counts[i], runs[i].report});
  if (out_dir) {
    for (std::size_t i = 0; i < runs.size(); ++i) {
      write_run_outputs(runs[i].record, runs[i].report, *out_dir / ("nofn-" + std::to_string(node_counts[i])));
    }
    write_file(*out_dir / "sweep.csv", [&](std::ostream& o) { write_sweep_csv(o, rows); });
  }
  return rows;
}

}  // namespace fogtraffic
