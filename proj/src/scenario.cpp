#include "fogtraffic/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace fogtraffic {

using nlohmann::json;

namespace {

class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_, "expected an object");
  }

  std::string key_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json* child(const std::string& key) {
    auto it = j_.find(key);
    if (it == j_.end()) return nullptr;
    seen_.insert(key);
    return &*it;
  }

  void number(const std::string& key, double& out) {
    if (const json* v = child(key)) {
      if (!v->is_number()) throw ConfigError(key_path(key), "expected a number");
      out = v->get<double>();
    }
  }
  void seconds(const std::string& key, SimTime& out) {
    double s = out.to_seconds();
    number(key, s);
    out = SimTime::seconds(s);
  }
  void integer(const std::string& key, int& out) {
    if (const json* v = child(key)) {
      if (!v->is_number_integer()) throw ConfigError(key_path(key), "expected an integer");
      out = v->get<int>();
    }
  }
  void unsigned64(const std::string& key, std::uint64_t& out) {
    if (const json* v = child(key)) {
      if (!v->is_number_unsigned()) throw ConfigError(key_path(key), "expected a non-negative integer");
      out = v->get<std::uint64_t>();
    }
  }
  void boolean(const std::string& key, bool& out) {
    if (const json* v = child(key)) {
      if (!v->is_boolean()) throw ConfigError(key_path(key), "expected true or false");
      out = v->get<bool>();
    }
  }
  void string(const std::string& key, std::string& out) {
    if (const json* v = child(key)) {
      if (!v->is_string()) throw ConfigError(key_path(key), "expected a string");
      out = v->get<std::string>();
    }
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.contains(it.key())) throw ConfigError(key_path(it.key()), "unknown key");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_device(const json& j, const std::string& path, DeviceSpec& d) {
  ObjectReader r(j, path);
  r.number("mips", d.mips);
  r.number("ram_mb", d.ram_mb);
  r.number("uplink_bw", d.uplink_bw);
  r.number("downlink_bw", d.downlink_bw);
  r.number("rate_per_mips", d.rate_per_mips);
  r.number("busy_power", d.busy_power);
  r.number("idle_power", d.idle_power);
  r.finish();
}

json write_device(const DeviceSpec& d) {
  return {{"mips", d.mips},
          {"ram_mb", d.ram_mb},
          {"uplink_bw", d.uplink_bw},
          {"downlink_bw", d.downlink_bw},
          {"rate_per_mips", d.rate_per_mips},
          {"busy_power", d.busy_power},
          {"idle_power", d.idle_power}};
}

ArrivalSpec read_arrival(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  ArrivalSpec a;
  std::string kind;
  r.string("kind", kind);
  if (kind == "deterministic") {
    a.kind = ArrivalSpec::Kind::Deterministic;
    r.number("interval_s", a.interval_s);
    int batch = 1;
    r.integer("batch", batch);
    if (batch < 1) throw ConfigError(r.key_path("batch"), "must be >= 1");
    a.batch = static_cast<std::uint32_t>(batch);
    if (r.child("offset_s")) {
      double off = 0;
      r.number("offset_s", off);
      a.offset_s = off;
    }
  } else if (kind == "poisson") {
    a.kind = ArrivalSpec::Kind::Poisson;
    r.number("rate_per_s", a.rate_per_s);
  } else if (kind == "trace") {
    a.kind = ArrivalSpec::Kind::Trace;
    if (const json* t = r.child("times_s")) {
      if (!t->is_array()) throw ConfigError(r.key_path("times_s"), "expected an array of numbers");
      for (const json& v : *t) {
        if (!v.is_number()) throw ConfigError(r.key_path("times_s"), "expected an array of numbers");
        a.times_s.push_back(v.get<double>());
      }
    }
  } else {
    throw ConfigError(r.key_path("kind"), "expected one of deterministic, poisson, trace");
  }
  r.finish();
  try {
    a.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
  return a;
}

json write_arrival(const ArrivalSpec& a) {
  json j{{"kind", to_string(a.kind)}};
  switch (a.kind) {
    case ArrivalSpec::Kind::Deterministic:
      j["interval_s"] = a.interval_s;
      j["batch"] = a.batch;
      if (a.offset_s) j["offset_s"] = *a.offset_s;
      break;
    case ArrivalSpec::Kind::Poisson: j["rate_per_s"] = a.rate_per_s; break;
    case ArrivalSpec::Kind::Trace: j["times_s"] = a.times_s; break;
  }
  return j;
}

const char* to_string(IovOccupancy o) { return o == IovOccupancy::Sensed ? "sensed" : "entry-model"; }

}  // namespace

void ScenarioConfig::validate() const {
  auto require = [](bool ok, const char* key, const char* what) {
    if (!ok) throw ConfigError(key, what);
  };
  require(roads >= 1, "roads", "at least one road (fog node) is required");
  require(duration_s > 0, "duration_s", "must be positive");
  require(units.time_unit == "ms" || units.time_unit == "s", "units.time_unit", "expected \"ms\" or \"s\"");
  require(units.bw_unit == "KB/s" || units.bw_unit == "MB/s", "units.bw_unit", "expected \"KB/s\" or \"MB/s\"");
  for (auto [spec, key] : {std::pair{&cloud, "devices.cloud"}, {&proxy, "devices.proxy"}, {&fog, "devices.fog"}}) {
    try {
      spec->validate(key);
    } catch (const TopologyError& e) {
      throw ConfigError(key, e.what());
    }
  }
  require(latency.cloud_proxy >= 0, "links.cloud_proxy", "must be non-negative");
  require(latency.proxy_fog >= 0, "links.proxy_fog", "must be non-negative");
  require(latency.fog_edge >= 0, "links.fog_edge", "must be non-negative");
  require(sensor.period_s > 0, "sensor.period_s", "must be positive");
  require(sensor.cpu_min_mi >= 0 && sensor.cpu_min_mi <= sensor.cpu_max_mi, "sensor.cpu_min_mi",
          "must satisfy 0 <= cpu_min_mi <= cpu_max_mi");
  require(sensor.nw_min_kb >= 0 && sensor.nw_min_kb <= sensor.nw_max_kb, "sensor.nw_min_kb",
          "must satisfy 0 <= nw_min_kb <= nw_max_kb");
  require(app.slot_detector_mi >= 0, "app.slot_detector_mi", "must be non-negative");
  require(app.signal_controller_mi >= 0, "app.signal_controller_mi", "must be non-negative");
  require(app.cloud_archive_mi >= 0, "app.cloud_archive_mi", "must be non-negative");
  require(app.slot_status_kb >= 0, "app.slot_status_kb", "must be non-negative");
  require(app.led_command_kb >= 0, "app.led_command_kb", "must be non-negative");
  require(!app.archive_kb || *app.archive_kb >= 0, "app.archive_kb", "must be non-negative");
  require(traffic.crossing_time_s > 0 && SimTime::seconds(traffic.crossing_time_s) > SimTime{},
          "traffic.crossing_time_s", "must be at least 1 ms");
  require(traffic.road_length_m > 0, "traffic.road_length_m", "must be positive");
  require(traffic.road_lengths_m.empty() || traffic.road_lengths_m.size() == static_cast<std::size_t>(roads),
          "traffic.road_lengths_m", "must list one length per road");
  for (double l : traffic.road_lengths_m) require(l > 0, "traffic.road_lengths_m", "lengths must be positive");
  require(traffic.car_length_m > 0, "traffic.car_length_m", "must be positive");
  require(traffic.gap_m >= 0, "traffic.gap_m", "must be non-negative");
  for (std::size_t r = 0; r < static_cast<std::size_t>(roads); ++r) {
    require(road_capacity(traffic.length_of(r), traffic.car_length_m, traffic.gap_m) >= 1, "traffic.road_length_m",
            "a road must hold at least one car");
  }
  require(traffic.arrivals.size() == 1 || traffic.arrivals.size() == static_cast<std::size_t>(roads),
          "traffic.arrivals", "give one arrival process for all roads or one per road");
  for (const ArrivalSpec& a : traffic.arrivals) {
    try {
      a.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError("traffic.arrivals", e.what());
    }
  }
  require(controller.yellow >= SimTime{}, "controller.yellow_s", "must be non-negative");
  require(controller.itcms.min_cycle > SimTime{}, "controller.itcms.min_cycle_s", "must be positive");
  require(controller.stl.base_green > SimTime{}, "controller.stl.base_green_s", "must be positive");
  require(controller.stl.extension >= SimTime{}, "controller.stl.extension_s", "must be non-negative");
  require(controller.stl.congestion_threshold > 0, "controller.stl.congestion_threshold", "must be positive");
  require(controller.iov.headway > SimTime{}, "controller.iov.headway_s", "must be positive");
  require(controller.iov.car_length_m > 0, "controller.iov.car_length_m", "must be positive");
  require(controller.iov.gap_m >= 0, "controller.iov.gap_m", "must be non-negative");
  require(controller.iov.road_length_m > 0, "controller.iov.road_length_m", "must be positive");
  require(controller.iov.min_cycle > SimTime{}, "controller.iov.min_cycle_s", "must be positive");
  require(throughput_bucket_s > 0, "metrics.throughput_bucket_s", "must be positive");
}

TopologyParams ScenarioConfig::topology_params() const {
  TopologyParams p;
  p.fog_nodes = roads;
  p.cloud = cloud;
  p.proxy = proxy;
  p.fog = fog;
  for (DeviceSpec* d : {&p.cloud, &p.proxy, &p.fog}) {
    d->uplink_bw *= units.bandwidth_to_kb();
    d->downlink_bw *= units.bandwidth_to_kb();
  }
  p.cloud.level = 0;
  p.proxy.level = 1;
  p.fog.level = 2;
  const double k = units.latency_to_ms();
  p.latencies.cloud_proxy = SimTime::ms(std::llround(latency.cloud_proxy * k));
  p.latencies.proxy_fog = SimTime::ms(std::llround(latency.proxy_fog * k));
  p.latencies.fog_edge = SimTime::ms(std::llround(latency.fog_edge * k));
  return p;
}

ScenarioConfig paper_default() {
  ScenarioConfig c;
  ArrivalSpec poisson;
  poisson.kind = ArrivalSpec::Kind::Poisson;
  poisson.rate_per_s = 0.1;
  c.traffic.arrivals = {poisson};
  return c;
}

ScenarioConfig stl_reference() {
  ScenarioConfig c = paper_default();
  c.name = "stl-reference";
  c.controller.kind = ControllerKind::Stl;
  c.controller.yellow = SimTime{};
  c.traffic.crossing_time_s = 2.0;  // three departures per 6 s
  ArrivalSpec batches;
  batches.kind = ArrivalSpec::Kind::Deterministic;
  batches.interval_s = 15;
  batches.batch = 2;
  batches.offset_s = 0.0;
  c.traffic.arrivals = {batches};
  c.duration_s = 1200;
  return c;
}

ScenarioConfig scenario_from_json(const json& j) { return scenario_from_json(j, paper_default()); }

ScenarioConfig scenario_from_json(const json& j, const ScenarioConfig& base) {
  ScenarioConfig c = base;
  ObjectReader r(j, "");
  r.string("name", c.name);
  r.unsigned64("seed", c.seed);
  r.number("duration_s", c.duration_s);
  r.boolean("drain", c.drain);
  r.integer("roads", c.roads);
  if (const json* u = r.child("units")) {
    ObjectReader ur(*u, "units");
    ur.string("time_unit", c.units.time_unit);
    ur.string("bw_unit", c.units.bw_unit);
    ur.finish();
  }
  if (const json* d = r.child("devices")) {
    ObjectReader dr(*d, "devices");
    if (const json* x = dr.child("cloud")) read_device(*x, "devices.cloud", c.cloud);
    if (const json* x = dr.child("proxy")) read_device(*x, "devices.proxy", c.proxy);
    if (const json* x = dr.child("fog")) read_device(*x, "devices.fog", c.fog);
    dr.finish();
  }
  if (const json* l = r.child("links")) {
    ObjectReader lr(*l, "links");
    lr.number("cloud_proxy", c.latency.cloud_proxy);
    lr.number("proxy_fog", c.latency.proxy_fog);
    lr.number("fog_edge", c.latency.fog_edge);
    lr.finish();
  }
  if (const json* s = r.child("sensor")) {
    ObjectReader sr(*s, "sensor");
    sr.number("period_s", c.sensor.period_s);
    sr.number("cpu_min_mi", c.sensor.cpu_min_mi);
    sr.number("cpu_max_mi", c.sensor.cpu_max_mi);
    sr.number("nw_min_kb", c.sensor.nw_min_kb);
    sr.number("nw_max_kb", c.sensor.nw_max_kb);
    sr.finish();
  }
  if (const json* a = r.child("app")) {
    ObjectReader ar(*a, "app");
    ar.number("slot_detector_mi", c.app.slot_detector_mi);
    ar.number("signal_controller_mi", c.app.signal_controller_mi);
    ar.number("cloud_archive_mi", c.app.cloud_archive_mi);
    ar.number("slot_status_kb", c.app.slot_status_kb);
    ar.number("led_command_kb", c.app.led_command_kb);
    if (const json* v = ar.child("archive_kb")) {
      if (v->is_null()) {
        c.app.archive_kb.reset();
      } else {
        double kb = 0;
        ar.number("archive_kb", kb);
        c.app.archive_kb = kb;
      }
    }
    ar.finish();
  }
  if (const json* t = r.child("traffic")) {
    ObjectReader tr(*t, "traffic");
    tr.number("crossing_time_s", c.traffic.crossing_time_s);
    tr.number("road_length_m", c.traffic.road_length_m);
    tr.number("car_length_m", c.traffic.car_length_m);
    tr.number("gap_m", c.traffic.gap_m);
    if (const json* l = tr.child("road_lengths_m")) {
      if (!l->is_array()) throw ConfigError("traffic.road_lengths_m", "expected an array of numbers");
      c.traffic.road_lengths_m.clear();
      for (const json& v : *l) {
        if (!v.is_number()) throw ConfigError("traffic.road_lengths_m", "expected an array of numbers");
        c.traffic.road_lengths_m.push_back(v.get<double>());
      }
    }
    if (const json* a = tr.child("arrivals")) {
      c.traffic.arrivals.clear();
      if (a->is_array()) {
        for (std::size_t i = 0; i < a->size(); ++i) {
          c.traffic.arrivals.push_back(read_arrival((*a)[i], "traffic.arrivals[" + std::to_string(i) + "]"));
        }
      } else {
        c.traffic.arrivals.push_back(read_arrival(*a, "traffic.arrivals"));
      }
    }
    tr.finish();
  }
  if (const json* k = r.child("controller")) {
    ObjectReader kr(*k, "controller");
    std::string kind = to_string(c.controller.kind);
    kr.string("kind", kind);
    try {
      c.controller.kind = parse_controller(kind);
    } catch (const ControllerError& e) {
      throw ConfigError("controller.kind", e.what());
    }
    kr.seconds("yellow_s", c.controller.yellow);
    if (const json* x = kr.child("itcms")) {
      ObjectReader xr(*x, "controller.itcms");
      xr.seconds("min_cycle_s", c.controller.itcms.min_cycle);
      xr.finish();
    }
    if (const json* x = kr.child("stl")) {
      ObjectReader xr(*x, "controller.stl");
      xr.seconds("base_green_s", c.controller.stl.base_green);
      xr.seconds("extension_s", c.controller.stl.extension);
      xr.number("congestion_threshold", c.controller.stl.congestion_threshold);
      xr.finish();
    }
    if (const json* x = kr.child("iov")) {
      ObjectReader xr(*x, "controller.iov");
      xr.seconds("headway_s", c.controller.iov.headway);
      xr.number("car_length_m", c.controller.iov.car_length_m);
      xr.number("gap_m", c.controller.iov.gap_m);
      xr.number("road_length_m", c.controller.iov.road_length_m);
      xr.seconds("min_cycle_s", c.controller.iov.min_cycle);
      std::string occ = to_string(c.controller.iov_occupancy);
      xr.string("occupancy", occ);
      if (occ == "entry-model") {
        c.controller.iov_occupancy = IovOccupancy::EntryModel;
      } else if (occ == "sensed") {
        c.controller.iov_occupancy = IovOccupancy::Sensed;
      } else {
        throw ConfigError("controller.iov.occupancy", "expected \"entry-model\" or \"sensed\"");
      }
      xr.finish();
    }
    kr.finish();
  }
  if (const json* m = r.child("metrics")) {
    ObjectReader mr(*m, "metrics");
    mr.number("throughput_bucket_s", c.throughput_bucket_s);
    mr.finish();
  }
  r.finish();
  c.validate();
  return c;
}

json scenario_to_json(const ScenarioConfig& c) {
  json arrivals = json::array();
  for (const ArrivalSpec& a : c.traffic.arrivals) arrivals.push_back(write_arrival(a));
  json traffic{{"crossing_time_s", c.traffic.crossing_time_s},
               {"road_length_m", c.traffic.road_length_m},
               {"car_length_m", c.traffic.car_length_m},
               {"gap_m", c.traffic.gap_m},
               {"arrivals", arrivals}};
  if (!c.traffic.road_lengths_m.empty()) traffic["road_lengths_m"] = c.traffic.road_lengths_m;
  json app{{"slot_detector_mi", c.app.slot_detector_mi},
           {"signal_controller_mi", c.app.signal_controller_mi},
           {"cloud_archive_mi", c.app.cloud_archive_mi},
           {"slot_status_kb", c.app.slot_status_kb},
           {"led_command_kb", c.app.led_command_kb},
           {"archive_kb", c.app.archive_kb ? json(*c.app.archive_kb) : json(nullptr)}};
  return {
      {"name", c.name},
      {"seed", c.seed},
      {"duration_s", c.duration_s},
      {"drain", c.drain},
      {"roads", c.roads},
      {"units", {{"time_unit", c.units.time_unit}, {"bw_unit", c.units.bw_unit}}},
      {"devices", {{"cloud", write_device(c.cloud)}, {"proxy", write_device(c.proxy)}, {"fog", write_device(c.fog)}}},
      {"links",
       {{"cloud_proxy", c.latency.cloud_proxy}, {"proxy_fog", c.latency.proxy_fog}, {"fog_edge", c.latency.fog_edge}}},
      {"sensor",
       {{"period_s", c.sensor.period_s},
        {"cpu_min_mi", c.sensor.cpu_min_mi},
        {"cpu_max_mi", c.sensor.cpu_max_mi},
        {"nw_min_kb", c.sensor.nw_min_kb},
        {"nw_max_kb", c.sensor.nw_max_kb}}},
      {"app", app},
      {"traffic", traffic},
      {"controller",
       {{"kind", to_string(c.controller.kind)},
        {"yellow_s", c.controller.yellow.to_seconds()},
        {"itcms", {{"min_cycle_s", c.controller.itcms.min_cycle.to_seconds()}}},
        {"stl",
         {{"base_green_s", c.controller.stl.base_green.to_seconds()},
          {"extension_s", c.controller.stl.extension.to_seconds()},
          {"congestion_threshold", c.controller.stl.congestion_threshold}}},
        {"iov",
         {{"headway_s", c.controller.iov.headway.to_seconds()},
          {"car_length_m", c.controller.iov.car_length_m},
          {"gap_m", c.controller.iov.gap_m},
          {"road_length_m", c.controller.iov.road_length_m},
          {"min_cycle_s", c.controller.iov.min_cycle.to_seconds()},
          {"occupancy", to_string(c.controller.iov_occupancy)}}}}},
      {"metrics", {{"throughput_bucket_s", c.throughput_bucket_s}}},
  };
}

ScenarioConfig load_scenario(const std::string& path, const ScenarioConfig& base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("invalid JSON in '") + path + "': " + e.what());
  }
  return scenario_from_json(j, base);
}

std::string comparison_fingerprint(const ScenarioConfig& config) {
  json j = scenario_to_json(config);
  j["controller"].erase("kind");
  return j.dump();
}

}  // namespace fogtraffic
