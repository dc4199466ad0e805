#pragma once

#include <cstdint>
#include <memory>
#include <unordered_set>
#include <vector>

#include "fogtraffic/app.hpp"
#include "fogtraffic/controllers.hpp"
#include "fogtraffic/des.hpp"
#include "fogtraffic/network.hpp"
#include "fogtraffic/scenario.hpp"
#include "fogtraffic/topology.hpp"
#include "fogtraffic/traffic.hpp"

namespace fogtraffic {

struct RoadRecord {
  std::size_t road = 0;
  std::size_t capacity = 0;
  std::uint64_t arrived = 0;
  std::uint64_t blocked = 0;
  std::vector<Vehicle> crossed;
  std::vector<Vehicle> queued;  // still waiting when the run stopped
};

struct TupleCounts {
  std::uint64_t frames_emitted = 0;
  std::uint64_t frames_processed = 0;
  std::uint64_t archives_received = 0;
  std::uint64_t slot_status_handled = 0;
  std::uint64_t led_commands_sent = 0;
  std::uint64_t sent = 0;
  std::uint64_t delivered = 0;
  std::uint64_t in_flight = 0;
};

/// Everything a finished run produced. Immutable input to the metrics.
struct RunRecord {
  ScenarioConfig config;
  RunSummary kernel;
  SimTime duration;  // traffic and sensing stop here
  SimTime elapsed;   // clock after draining in-flight tuples
  double wall_seconds = 0;

  std::vector<RoadRecord> roads;
  std::vector<SignalInterval> signal_timeline;
  std::vector<SimTime> cycle_starts;
  std::vector<PhasePlan> plans;

  std::vector<LoopSample> loop_samples;
  std::vector<LedCommit> led_commits;
  std::vector<std::vector<SimTime>> frame_times;

  double network_usage = 0;
  std::vector<TransmissionRecord> transmissions;
  TupleCounts tuples;
  std::vector<EnergyRow> energy;

  std::uint64_t total_arrived() const;
  std::uint64_t total_crossed() const;
  std::uint64_t total_blocked() const;
  std::uint64_t total_queued() const;
};

/// One self-contained simulation of a scenario. Not movable: the
/// application and controller hold references into it.
class Simulation {
 public:
  explicit Simulation(ScenarioConfig config);
  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  /// Runs to the configured duration (then drains tuples if configured).
  /// May be called once.
  RunRecord run();

  const Topology& topology() const { return topology_; }
  void enable_trace(bool on) { sim_.enable_trace(on); }
  const std::vector<TraceEntry>& trace() const { return sim_.trace(); }

 private:
  void schedule_traffic(EventKind kind, SimTime at, std::function<void()> fn);
  void schedule_next_arrival(std::size_t road);
  void start_cycle();
  void run_phase(std::shared_ptr<const std::vector<Phase>> served, std::size_t index);
  void set_signal(std::size_t road, Signal signal);
  void refresh_assignment(std::optional<std::size_t> green_road);
  void stop();

  ScenarioConfig config_;
  ControllerConfig controller_;
  SimTime crossing_time_;
  Simulator sim_;
  RngStream rng_;
  Topology topology_;
  Network network_;
  Processing processing_;
  std::vector<RoadState> roads_;
  std::vector<ArrivalProcess> arrivals_;
  std::vector<Rng> destination_rng_;
  std::unique_ptr<Application> app_;

  std::vector<std::uint64_t> sensed_;
  std::vector<SimTime> last_green_end_;
  std::vector<std::optional<SignalInterval>> open_intervals_;
  LedAssignment assignment_;
  std::unordered_set<EventId> traffic_events_;
  std::uint64_t next_vehicle_id_ = 1;
  bool ran_ = false;

  std::vector<SignalInterval> timeline_;
  std::vector<SimTime> cycle_starts_;
  std::vector<PhasePlan> plans_;
};

/// Convenience: build, run and return the record.
RunRecord simulate(const ScenarioConfig& config);

}  // namespace fogtraffic
