#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "fogtraffic/controllers.hpp"
#include "fogtraffic/topology.hpp"
#include "fogtraffic/traffic.hpp"

namespace fogtraffic {

/// Invalid scenario configuration. `key()` is the dotted path of the
/// offending entry.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::invalid_argument(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct Units {
  std::string time_unit = "ms";  // unit of link latencies: "ms" or "s"
  std::string bw_unit = "KB/s";  // "KB/s" or "MB/s"; payloads are always KB

  double latency_to_ms() const { return time_unit == "s" ? 1000.0 : 1.0; }
  double bandwidth_to_kb() const { return bw_unit == "MB/s" ? 1000.0 : 1.0; }
  bool operator==(const Units&) const = default;
};

struct LatencyConfig {
  double cloud_proxy = 200;
  double proxy_fog = 100;
  double fog_edge = 50;
  bool operator==(const LatencyConfig&) const = default;
};

struct SensorConfig {
  double period_s = 5;
  double cpu_min_mi = 20;
  double cpu_max_mi = 100;
  double nw_min_kb = 20;
  double nw_max_kb = 100;
  bool operator==(const SensorConfig&) const = default;
};

struct AppConfig {
  double slot_detector_mi = 100;
  double signal_controller_mi = 200;
  double cloud_archive_mi = 50;
  double slot_status_kb = 1;
  double led_command_kb = 0.5;
  std::optional<double> archive_kb;  // defaults to the frame's payload
  bool operator==(const AppConfig&) const = default;
};

struct TrafficConfig {
  double crossing_time_s = 2.5;
  double road_length_m = 400;
  std::vector<double> road_lengths_m;  // optional per-road override
  double car_length_m = 4.5;
  double gap_m = 0.5;
  std::vector<ArrivalSpec> arrivals;  // one entry for all roads, or one per road

  double length_of(std::size_t road) const {
    return road_lengths_m.empty() ? road_length_m : road_lengths_m.at(road);
  }
  const ArrivalSpec& arrival_of(std::size_t road) const {
    return arrivals.size() == 1 ? arrivals.front() : arrivals.at(road);
  }
};

struct ScenarioConfig {
  std::string name = "paper-default";
  std::uint64_t seed = 1;
  double duration_s = 3600;
  bool drain = true;
  int roads = 4;  // one fog node per road
  Units units;
  DeviceSpec cloud = default_cloud_spec();
  DeviceSpec proxy = default_proxy_spec();
  DeviceSpec fog = default_fog_spec();
  LatencyConfig latency;
  SensorConfig sensor;
  AppConfig app;
  TrafficConfig traffic;
  ControllerConfig controller;
  double throughput_bucket_s = 10;

  /// Throws ConfigError naming the first invalid key.
  void validate() const;
  TopologyParams topology_params() const;
};

/// Built-in defaults: the four-road deployment with the tier hardware and
/// link latencies of the reference setup, Poisson arrivals of 0.1 cars/s per
/// road, ITCMS control, one simulated hour.
ScenarioConfig paper_default();

/// Fixed-cycle reference case: 30 s greens on four roads, two cars every
/// 15 s per road, three departures per 6 s of green, no yellow.
ScenarioConfig stl_reference();

ScenarioConfig scenario_from_json(const nlohmann::json& j);
ScenarioConfig scenario_from_json(const nlohmann::json& j, const ScenarioConfig& base);
nlohmann::json scenario_to_json(const ScenarioConfig& config);
ScenarioConfig load_scenario(const std::string& path, const ScenarioConfig& base = paper_default());

/// Canonical dump of everything except the controller kind; runs comparable
/// side by side share this.
std::string comparison_fingerprint(const ScenarioConfig& config);

}  // namespace fogtraffic
