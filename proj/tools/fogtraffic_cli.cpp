// Command-line front end: run, compare, sweep, print-default-config.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "fogtraffic/runner.hpp"

namespace ft = fogtraffic;

namespace {

constexpr int kExitConfigError = 2;
constexpr int kExitRuntimeError = 3;

struct CommonOptions {
  std::string config_path;
  std::optional<int> roads;
  std::optional<std::string> controller;
  std::optional<double> duration;
  std::optional<std::uint64_t> seed;
  std::string out = "out";
};

void add_common(CLI::App* cmd, CommonOptions& o, bool with_controller = true) {
  cmd->add_option("--config", o.config_path, "Scenario JSON layered over the built-in defaults");
  cmd->add_option("--roads", o.roads, "Number of roads (one fog node each)");
  if (with_controller) cmd->add_option("--controller", o.controller, "itcms | stl | iov");
  cmd->add_option("--duration", o.duration, "Simulated seconds");
  cmd->add_option("--seed", o.seed, "Root random seed");
  cmd->add_option("--out", o.out, "Output directory")->capture_default_str();
}

ft::ScenarioConfig resolve(const CommonOptions& o) {
  ft::ScenarioConfig c = o.config_path.empty() ? ft::paper_default() : ft::load_scenario(o.config_path);
  if (o.roads) c.roads = *o.roads;
  if (o.controller) {
    try {
      c.controller.kind = ft::parse_controller(*o.controller);
    } catch (const ft::ControllerError& e) {
      throw ft::ConfigError("controller", e.what());
    }
  }
  if (o.duration) c.duration_s = *o.duration;
  if (o.seed) c.seed = *o.seed;
  c.validate();
  return c;
}

void print_report(const ft::MetricsReport& r) {
  auto opt = [](const std::optional<double>& v) { return v ? ft::format_number(*v) : std::string("no data"); };
  std::cout << "controller            " << r.controller << '\n'
            << "roads (fog nodes)     " << r.roads << '\n'
            << "ET (wall s)           " << ft::format_number(r.execution_time_wall) << '\n'
            << "ALD (s)               " << opt(r.application_loop_delay) << '\n'
            << "CTT (s)               " << ft::format_number(r.camera_transmission_time) << '\n'
            << "TTFU (KB)             " << ft::format_number(r.total_traffic_flow_usage) << '\n'
            << "arrived/crossed       " << r.arrived << " / " << r.crossed << '\n'
            << "queued/blocked        " << r.queued << " / " << r.blocked << '\n'
            << "throughput (cars/s)   " << ft::format_number(r.throughput) << '\n'
            << "total avg delay (s)   " << opt(r.total_average_delay) << '\n'
            << "energy (J)            " << ft::format_number(r.total_energy) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fog-computing traffic-signal simulator"};
  app.require_subcommand(1);

  CommonOptions run_opts;
  auto* run_cmd = app.add_subcommand("run", "Run one simulation and write CSV files");
  add_common(run_cmd, run_opts);

  CommonOptions cmp_opts;
  std::string controllers = "itcms,stl,iov";
  auto* cmp_cmd = app.add_subcommand("compare", "Run several controllers on identical arrivals");
  add_common(cmp_cmd, cmp_opts, false);
  cmp_cmd->add_option("--controllers", controllers, "Comma-separated controllers")->capture_default_str();

  CommonOptions sweep_opts;
  std::string nodes = "4,8,14";
  auto* sweep_cmd = app.add_subcommand("sweep", "Run once per fog-node count");
  add_common(sweep_cmd, sweep_opts);
  sweep_cmd->add_option("--nodes", nodes, "Comma-separated fog-node counts")->capture_default_str();

  CommonOptions print_opts;
  auto* print_cmd = app.add_subcommand("print-default-config", "Print the effective configuration as JSON");
  add_common(print_cmd, print_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfigError;
  }

  try {
    if (*run_cmd) {
      const ft::ScenarioConfig config = resolve(run_opts);
      const auto result = ft::run_scenario(config, run_opts.out);
      print_report(result.report);
      std::cout << "wrote " << run_opts.out << "/summary.csv\n";
    } else if (*cmp_cmd) {
      const ft::ScenarioConfig config = resolve(cmp_opts);
      const auto kinds = ft::parse_controller_list(controllers);
      const auto table = ft::compare_controllers(config, kinds, cmp_opts.out);
      ft::write_compare_csv(std::cout, table);
      std::cout << "wrote " << cmp_opts.out << "/compare.csv\n";
    } else if (*sweep_cmd) {
      const ft::ScenarioConfig config = resolve(sweep_opts);
      const auto counts = ft::parse_node_list(nodes);
      const auto rows = ft::sweep_fog_nodes(config, counts, sweep_opts.out);
      ft::write_sweep_csv(std::cout, rows);
      std::cout << "wrote " << sweep_opts.out << "/sweep.csv\n";
    } else if (*print_cmd) {
      std::cout << ft::scenario_to_json(resolve(print_opts)).dump(2) << '\n';
    }
  } catch (const ft::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const ft::TopologyError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntimeError;
  }
  return 0;
}
