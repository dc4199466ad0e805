#pragma once

#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fogtraffic/simulation.hpp"

namespace fogtraffic {

struct ThroughputBucket {
  double start_s;
  std::uint64_t crossed;
  double cars_per_sec;
};

struct MetricsReport {
  std::string scenario;
  std::string controller;
  int roads = 0;
  std::uint64_t seed = 0;
  double duration_s = 0;

  double execution_time_wall = 0;                  // ET, host seconds
  std::optional<double> application_loop_delay;    // ALD, simulated seconds
  std::size_t loop_samples = 0;
  double camera_transmission_time = 0;             // CTT, seconds
  double total_traffic_flow_usage = 0;             // TTFU, KB

  std::vector<ThroughputBucket> throughput_series;
  double throughput = 0;                           // cars/s over the whole run
  std::optional<double> total_average_delay;       // seconds
  std::uint64_t arrived = 0;
  std::uint64_t crossed = 0;
  std::uint64_t queued = 0;  // never crossed, still waiting
  std::uint64_t blocked = 0;

  std::vector<EnergyRow> energy;
  double total_energy = 0;
  double total_cost = 0;
};

/// Crossings per bucket divided by the bucket length, over [0, duration).
std::vector<ThroughputBucket> throughput(const RunRecord& run, double bucket_s);

/// Mean (crossed - arrival) over vehicles that crossed; empty if none did.
std::optional<double> total_average_delay(const RunRecord& run);

/// TTFU recomputed from the transmission log.
double recount_network_usage(const RunRecord& run);

MetricsReport report(const RunRecord& run);

class ComparisonError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct NamedRun {
  std::string name;
  const RunRecord* run;
};

struct ComparisonRow {
  std::string name;
  std::uint64_t crossed;
  double throughput;
  std::optional<double> total_average_delay;
  std::optional<double> delay_reduction_pct;  // (other - reference) / other
  std::optional<double> throughput_gain_pct;  // (reference - other) / other
};

struct ComparisonTable {
  std::string reference;
  std::vector<ComparisonRow> rows;

  const ComparisonRow& row(const std::string& name) const;
};

/// Side-by-side comparison relative to the ITCMS run (or the first run when
/// none is ITCMS). Runs must share scenario and seed.
ComparisonTable compare(const std::vector<NamedRun>& runs);

struct SweepRow {
  int fog_nodes;
  MetricsReport report;
};

// CSV writers. Numbers use fixed precision so equal runs give equal bytes.
void write_summary_csv(std::ostream& out, const MetricsReport& r);
void write_throughput_csv(std::ostream& out, const MetricsReport& r);
void write_delay_csv(std::ostream& out, const RunRecord& run);
void write_energy_csv(std::ostream& out, const MetricsReport& r);
/// Host timing lives apart from the CSVs so those stay byte-reproducible.
void write_timing_json(std::ostream& out, const RunRecord& run);
void write_compare_csv(std::ostream& out, const ComparisonTable& table);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

std::string format_number(double v);

}  // namespace fogtraffic
