#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fogtraffic/controllers.hpp"
#include "fogtraffic/metrics.hpp"
#include "fogtraffic/runner.hpp"

namespace py = pybind11;
using namespace fogtraffic;
using nlohmann::json;

namespace {

// Configurations and results cross the boundary as JSON text; the Python
// side turns them into dicts.

ScenarioConfig config_from(const std::string& text) {
  json j;
  try {
    j = text.empty() ? json::object() : json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("invalid JSON: ") + e.what());
  }
  ScenarioConfig c = scenario_from_json(j);
  c.validate();
  return c;
}

std::optional<std::filesystem::path> out_dir(const std::optional<std::string>& out) {
  if (!out) return std::nullopt;
  return std::filesystem::path(*out);
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json report_json(const MetricsReport& r) {
  json energy = json::array();
  for (const EnergyRow& e : r.energy) {
    energy.push_back({{"device", e.device}, {"busy_s", e.busy_s}, {"idle_s", e.idle_s},
                      {"utilization", e.utilization}, {"energy_J", e.energy_j}});
  }
  json series = json::array();
  for (const ThroughputBucket& b : r.throughput_series) series.push_back({b.start_s, b.cars_per_sec});
  return {{"scenario", r.scenario},
          {"controller", r.controller},
          {"roads", r.roads},
          {"seed", r.seed},
          {"duration_s", r.duration_s},
          {"ET", r.execution_time_wall},
          {"ALD", optional_number(r.application_loop_delay)},
          {"ALD_samples", r.loop_samples},
          {"CTT", r.camera_transmission_time},
          {"TTFU", r.total_traffic_flow_usage},
          {"arrived", r.arrived},
          {"crossed", r.crossed},
          {"queued", r.queued},
          {"blocked", r.blocked},
          {"throughput", r.throughput},
          {"throughput_series", series},
          {"total_average_delay", optional_number(r.total_average_delay)},
          {"total_energy_J", r.total_energy},
          {"energy", energy}};
}

std::string run_json(const std::string& config, const std::optional<std::string>& out) {
  ScenarioConfig c = config_from(config);
  py::gil_scoped_release release;
  return report_json(run_scenario(c, out_dir(out)).report).dump();
}

std::string compare_json(const std::string& config, const std::vector<std::string>& controllers,
                         const std::optional<std::string>& out) {
  ScenarioConfig c = config_from(config);
  std::string list;
  for (const auto& name : controllers) list += (list.empty() ? "" : ",") + name;
  const auto kinds = parse_controller_list(list);
  py::gil_scoped_release release;
  const ComparisonTable t = compare_controllers(c, kinds, out_dir(out));
  json rows = json::array();
  for (const ComparisonRow& r : t.rows) {
    rows.push_back({{"controller", r.name},
                    {"crossed", r.crossed},
                    {"throughput", r.throughput},
                    {"total_average_delay", optional_number(r.total_average_delay)},
                    {"delay_reduction_pct", optional_number(r.delay_reduction_pct)},
                    {"throughput_gain_pct", optional_number(r.throughput_gain_pct)}});
  }
  return json{{"reference", t.reference}, {"rows", rows}}.dump();
}

std::string sweep_json(const std::string& config, const std::vector<int>& nodes, const std::optional<std::string>& out) {
  ScenarioConfig c = config_from(config);
  std::string list;
  for (int n : nodes) list += (list.empty() ? "" : ",") + std::to_string(n);
  const auto counts = parse_node_list(list);
  py::gil_scoped_release release;
  json rows = json::array();
  for (const SweepRow& r : sweep_fog_nodes(c, counts, out_dir(out))) {
    json row = report_json(r.report);
    row["NoFN"] = r.fog_nodes;
    rows.push_back(row);
  }
  return rows.dump();
}

std::vector<std::string> lamp_names(const LedAssignment& a) {
  std::vector<std::string> out;
  for (std::size_t r = 0; r < a.roads(); ++r) out.emplace_back(to_string(a.active(r)));
  return out;
}

py::dict plan_dict(const PhasePlan& p) {
  std::vector<double> greens;
  for (const Phase& ph : p.phases) greens.push_back(ph.green.to_seconds());
  py::dict d;
  d["greens"] = greens;
  d["yellow"] = p.yellow.to_seconds();
  d["idle"] = p.idle.to_seconds();
  d["length"] = p.length().to_seconds();
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Fog-computing traffic signal simulator";

  auto base = py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<TopologyError>(m, "TopologyError", base.ptr());
  py::register_exception<ControllerError>(m, "ControllerError", PyExc_ValueError);
  py::register_exception<ComparisonError>(m, "ComparisonError", PyExc_ValueError);

  m.def("total_vehicles", [](const std::vector<std::uint64_t>& c) { return total_vehicles(c); }, py::arg("counts"));
  m.def("cycle_time", [](std::uint64_t total, double mu) { return cycle_time(total, SimTime::seconds(mu)).to_seconds(); },
        py::arg("total"), py::arg("crossing_time") = 2.5);
  m.def("road_share", &road_share, py::arg("count"), py::arg("total"));
  m.def("green_time", [](double k, double cycle) { return green_time(k, SimTime::seconds(cycle)).to_seconds(); },
        py::arg("share"), py::arg("cycle"));
  m.def(
      "allocate_green",
      [](const std::vector<std::uint64_t>& c, double mu) {
        std::vector<double> out;
        for (SimTime t : allocate_green(c, SimTime::seconds(mu))) out.push_back(t.to_seconds());
        return out;
      },
      py::arg("counts"), py::arg("crossing_time") = 2.5);
  m.def("road_capacity", &road_capacity, py::arg("length_m"), py::arg("car_length_m") = 4.5, py::arg("gap_m") = 0.5);

  m.def(
      "path", [](std::size_t s, std::size_t d, std::size_t roads) { return lamp_names(path(s, d, roads)); },
      py::arg("source"), py::arg("destination"), py::arg("roads") = 4, "LED colors per road (0-based roads).");
  m.def(
      "itcms_plan",
      [](const std::vector<std::uint64_t>& counts, double mu, double yellow) {
        ItcmsParams p;
        p.crossing_time = SimTime::seconds(mu);
        return plan_dict(itcms_plan(counts, p, SimTime::seconds(yellow)));
      },
      py::arg("counts"), py::arg("crossing_time") = 2.5, py::arg("yellow") = 5.0);
  m.def(
      "stl_plan",
      [](const std::vector<bool>& congested, double yellow) {
        return plan_dict(stl_plan(congested, StlParams{}, SimTime::seconds(yellow)));
      },
      py::arg("congested"), py::arg("yellow") = 5.0);
  m.def(
      "iov_plan",
      [](const std::vector<std::uint64_t>& occupancy, double yellow) {
        return plan_dict(iov_plan(occupancy, IovParams{}, SimTime::seconds(yellow)));
      },
      py::arg("occupancy"), py::arg("yellow") = 5.0);

  m.def(
      "route_latency",
      [](const std::string& from, const std::string& to, const std::string& config) {
        const ScenarioConfig c = config_from(config);
        const Topology t = build_topology(standard_description(c.topology_params()));
        return t.route_latency(from, to).to_seconds() * 1000.0;
      },
      py::arg("source"), py::arg("destination"), py::arg("config") = "", "Route latency in milliseconds.");

  m.def("default_config_json", [] { return scenario_to_json(paper_default()).dump(); });
  m.def("effective_config_json", [](const std::string& config) { return scenario_to_json(config_from(config)).dump(); },
        py::arg("config"));
  m.def("run_json", &run_json, py::arg("config"), py::arg("out") = py::none());
  m.def("compare_json", &compare_json, py::arg("config"), py::arg("controllers"), py::arg("out") = py::none());
  m.def("sweep_json", &sweep_json, py::arg("config"), py::arg("nodes"), py::arg("out") = py::none());
}
