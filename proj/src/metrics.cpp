#include "fogtraffic/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace fogtraffic {

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

namespace {

std::string format_optional(const std::optional<double>& v) { return v ? format_number(*v) : "NA"; }

}  // namespace

std::vector<ThroughputBucket> throughput(const RunRecord& run, double bucket_s) {
  if (!(bucket_s > 0)) throw std::invalid_argument("throughput bucket must be positive");
  const SimTime bucket = SimTime::seconds(bucket_s);
  if (bucket <= SimTime{}) throw std::invalid_argument("throughput bucket must be at least 1 ms");
  const std::int64_t n = std::max<std::int64_t>(1, (run.duration.count() + bucket.count() - 1) / bucket.count());
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(n), 0);
  for (const RoadRecord& road : run.roads) {
    for (const Vehicle& v : road.crossed) {
      const std::int64_t idx = std::min(v.crossed_time->count() / bucket.count(), n - 1);
      ++counts[static_cast<std::size_t>(idx)];
    }
  }
  std::vector<ThroughputBucket> out;
  for (std::int64_t i = 0; i < n; ++i) {
    const SimTime start = bucket * i;
    const SimTime end = std::min(start + bucket, run.duration);
    const double len = std::max(end - start, SimTime::ms(1)).to_seconds();
    const auto c = counts[static_cast<std::size_t>(i)];
    out.push_back({start.to_seconds(), c, static_cast<double>(c) / len});
  }
  return out;
}

std::optional<double> total_average_delay(const RunRecord& run) {
  std::int64_t total_ms = 0;
  std::uint64_t n = 0;
  for (const RoadRecord& road : run.roads) {
    for (const Vehicle& v : road.crossed) {
      total_ms += (*v.crossed_time - v.arrival_time).count();
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return static_cast<double>(total_ms) / static_cast<double>(n) / 1000.0;
}

double recount_network_usage(const RunRecord& run) {
  double total = 0;
  for (const TransmissionRecord& t : run.transmissions) total += static_cast<double>(t.hops) * t.nw_length;
  return total;
}

MetricsReport report(const RunRecord& run) {
  MetricsReport r;
  r.scenario = run.config.name;
  r.controller = to_string(run.config.controller.kind);
  r.roads = run.config.roads;
  r.seed = run.config.seed;
  r.duration_s = run.duration.to_seconds();
  r.execution_time_wall = run.wall_seconds;
  r.application_loop_delay = loop_delay(run.loop_samples);
  r.loop_samples = run.loop_samples.size();
  r.camera_transmission_time = run.config.sensor.period_s;
  r.total_traffic_flow_usage = run.network_usage;
  r.throughput_series = throughput(run, run.config.throughput_bucket_s);
  r.arrived = run.total_arrived();
  r.crossed = run.total_crossed();
  r.queued = run.total_queued();
  r.blocked = run.total_blocked();
  r.throughput = static_cast<double>(r.crossed) / r.duration_s;
  r.total_average_delay = total_average_delay(run);
  r.energy = run.energy;
  for (const EnergyRow& e : r.energy) {
    r.total_energy += e.energy_j;
    r.total_cost += e.cost;
  }
  return r;
}

const ComparisonRow& ComparisonTable::row(const std::string& name) const {
  for (const ComparisonRow& r : rows) {
    if (r.name == name) return r;
  }
  throw std::out_of_range("no comparison row named '" + name + "'");
}

ComparisonTable compare(const std::vector<NamedRun>& runs) {
  if (runs.empty()) throw ComparisonError("nothing to compare");
  const std::string fingerprint = comparison_fingerprint(runs.front().run->config);
  for (const NamedRun& nr : runs) {
    if (nr.run->config.seed != runs.front().run->config.seed) {
      throw ComparisonError("run '" + nr.name + "' uses a different seed");
    }
    if (comparison_fingerprint(nr.run->config) != fingerprint) {
      throw ComparisonError("run '" + nr.name + "' uses a different scenario");
    }
  }
  const NamedRun* ref = &runs.front();
  for (const NamedRun& nr : runs) {
    if (nr.run->config.controller.kind == ControllerKind::Itcms) {
      ref = &nr;
      break;
    }
  }
  const std::optional<double> ref_delay = total_average_delay(*ref->run);
  const double ref_tp = static_cast<double>(ref->run->total_crossed()) / ref->run->duration.to_seconds();

  ComparisonTable table;
  table.reference = ref->name;
  for (const NamedRun& nr : runs) {
    ComparisonRow row;
    row.name = nr.name;
    row.crossed = nr.run->total_crossed();
    row.throughput = static_cast<double>(row.crossed) / nr.run->duration.to_seconds();
    row.total_average_delay = total_average_delay(*nr.run);
    if (ref_delay && row.total_average_delay && *row.total_average_delay > 0) {
      row.delay_reduction_pct = (*row.total_average_delay - *ref_delay) / *row.total_average_delay * 100.0;
    } else if (ref_delay && row.total_average_delay) {
      row.delay_reduction_pct = 0.0;
    }
    if (row.throughput > 0) {
      row.throughput_gain_pct = (ref_tp - row.throughput) / row.throughput * 100.0;
    } else if (ref_tp == 0) {
      row.throughput_gain_pct = 0.0;
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

void write_summary_csv(std::ostream& out, const MetricsReport& r) {
  out << "scenario,controller,roads,seed,duration_s,ALD_s,ALD_samples,CTT_s,TTFU_KB,arrived,crossed,queued,blocked,"
         "throughput_cars_per_s,total_average_delay_s,total_energy_J,total_cost\n";
  out << r.scenario << ',' << r.controller << ',' << r.roads << ',' << r.seed << ',' << format_number(r.duration_s)
      << ',' << format_optional(r.application_loop_delay) << ',' << r.loop_samples << ','
      << format_number(r.camera_transmission_time) << ',' << format_number(r.total_traffic_flow_usage) << ','
      << r.arrived << ',' << r.crossed << ',' << r.queued << ',' << r.blocked << ',' << format_number(r.throughput)
      << ',' << format_optional(r.total_average_delay) << ',' << format_number(r.total_energy) << ','
      << format_number(r.total_cost) << '\n';
}

void write_throughput_csv(std::ostream& out, const MetricsReport& r) {
  out << "bucket_start,cars_per_sec\n";
  for (const ThroughputBucket& b : r.throughput_series) {
    out << format_number(b.start_s) << ',' << format_number(b.cars_per_sec) << '\n';
  }
}

void write_delay_csv(std::ostream& out, const RunRecord& run) {
  out << "road,arrived,crossed,queued,blocked,total_average_delay_s\n";
  for (const RoadRecord& road : run.roads) {
    std::int64_t total = 0;
    for (const Vehicle& v : road.crossed) total += (*v.crossed_time - v.arrival_time).count();
    const std::optional<double> mean =
        road.crossed.empty() ? std::nullopt
                             : std::optional<double>(static_cast<double>(total) / road.crossed.size() / 1000.0);
    out << "R" << road.road + 1 << ',' << road.arrived << ',' << road.crossed.size() << ',' << road.queued.size()
        << ',' << road.blocked << ',' << format_optional(mean) << '\n';
  }
  out << "all," << run.total_arrived() << ',' << run.total_crossed() << ',' << run.total_queued() << ','
      << run.total_blocked() << ',' << format_optional(total_average_delay(run)) << '\n';
}

void write_energy_csv(std::ostream& out, const MetricsReport& r) {
  out << "device,level,busy_s,idle_s,utilization,energy_J,cost\n";
  for (const EnergyRow& e : r.energy) {
    out << e.device << ',' << e.level << ',' << format_number(e.busy_s) << ',' << format_number(e.idle_s) << ','
        << format_number(e.utilization) << ',' << format_number(e.energy_j) << ',' << format_number(e.cost) << '\n';
  }
}

void write_timing_json(std::ostream& out, const RunRecord& run) {
  const nlohmann::json j{{"ET_s", run.wall_seconds},
                         {"events_dispatched", run.kernel.events_dispatched},
                         {"simulated_elapsed_s", run.elapsed.to_seconds()}};
  out << j.dump(2) << '\n';
}

void write_compare_csv(std::ostream& out, const ComparisonTable& table) {
  out << "controller,crossed,throughput_cars_per_s,total_average_delay_s,delay_reduction_pct,throughput_gain_pct\n";
  for (const ComparisonRow& r : table.rows) {
    out << r.name << ',' << r.crossed << ',' << format_number(r.throughput) << ','
        << format_optional(r.total_average_delay) << ',' << format_optional(r.delay_reduction_pct) << ','
        << format_optional(r.throughput_gain_pct) << '\n';
  }
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "NoFN,ET,ALD,CTT,TTFU\n";
  for (const SweepRow& row : rows) {
    out << row.fog_nodes << ',' << format_number(row.report.execution_time_wall) << ','
        << format_optional(row.report.application_loop_delay) << ','
        << format_number(row.report.camera_transmission_time) << ','
        << format_number(row.report.total_traffic_flow_usage) << '\n';
  }
}

}  // namespace fogtraffic
