#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fogtraffic/metrics.hpp"
#include "fogtraffic/scenario.hpp"

namespace fogtraffic {

/// Writes summary.csv, throughput.csv, delay.csv, energy.csv, timing.json and
/// effective_config.json for one finished run.
void write_run_outputs(const RunRecord& run, const MetricsReport& report, const std::filesystem::path& dir);

struct SingleRun {
  RunRecord record;
  MetricsReport report;
};

SingleRun run_scenario(const ScenarioConfig& config, const std::optional<std::filesystem::path>& out_dir);

/// Splits "a,b,c" and parses controller names. Requires at least two.
std::vector<ControllerKind> parse_controller_list(const std::string& list);

/// One run per controller on the same scenario and seed; writes compare.csv
/// plus each run's files under <out>/<controller>/.
ComparisonTable compare_controllers(const ScenarioConfig& base, const std::vector<ControllerKind>& controllers,
                                    const std::optional<std::filesystem::path>& out_dir, bool parallel = true);

/// Splits "4,8,14" into fog-node counts (each >= 1, list non-empty).
std::vector<int> parse_node_list(const std::string& list);

/// One run per fog-node count; writes sweep.csv.
std::vector<SweepRow> sweep_fog_nodes(const ScenarioConfig& base, const std::vector<int>& node_counts,
                                      const std::optional<std::filesystem::path>& out_dir, bool parallel = true);

}  // namespace fogtraffic
