#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fogtraffic/rng.hpp"
#include "fogtraffic/sim_time.hpp"

namespace fogtraffic {

// ---- Green-time arithmetic -------------------------------------------------

/// Sum of per-road vehicle counts.
std::uint64_t total_vehicles(std::span<const std::uint64_t> counts);

/// Cycle length needed to pass every counted vehicle: crossing_time * total.
SimTime cycle_time(std::uint64_t total, SimTime crossing_time);

/// A road's share of the total count. Empty when there is no demand at all.
std::optional<double> road_share(std::uint64_t road_count, std::uint64_t total);

/// share * cycle, rounded down to whole milliseconds.
SimTime green_time(double share, SimTime cycle);

/// Green time per road, proportional to counts. Each share is rounded down
/// to the millisecond and the residual goes to the last road, so the result
/// always sums to cycle_time(total, crossing_time).
std::vector<SimTime> allocate_green(std::span<const std::uint64_t> counts, SimTime crossing_time);

/// Number of vehicles that fit on a road of the given length.
std::size_t road_capacity(double length_m, double car_length_m = 4.5, double gap_m = 0.5);

// ---- Roads and vehicles ----------------------------------------------------

enum class Signal { Red, Yellow, Green };
const char* to_string(Signal s);

struct Vehicle {
  std::uint64_t id = 0;
  std::size_t source_road = 0;
  std::size_t destination_road = 0;
  SimTime arrival_time;
  std::optional<SimTime> crossed_time;
};

/// FIFO queue of vehicles waiting at one approach of the intersection.
class RoadState {
 public:
  RoadState(std::size_t road_id, double length_m, std::size_t capacity)
      : road_id_(road_id), length_m_(length_m), capacity_(capacity) {}

  std::size_t road_id() const { return road_id_; }
  double length_m() const { return length_m_; }
  std::size_t capacity() const { return capacity_; }
  Signal signal() const { return signal_; }
  void set_signal(Signal s) { signal_ = s; }

  /// Appends the vehicle if there is room; otherwise counts it as blocked.
  bool arrive(Vehicle v);
  /// One crossing opportunity at time t: the head vehicle leaves if present.
  std::optional<Vehicle> serve_slot(SimTime t);
  /// floor(window / crossing_time) crossings starting at green_start, the
  /// i-th (1-based) at green_start + i * crossing_time.
  std::vector<Vehicle> discharge(SimTime green_start, SimTime window, SimTime crossing_time);

  std::size_t queue_length() const { return queue_.size(); }
  const std::deque<Vehicle>& queue() const { return queue_; }
  std::uint64_t arrived() const { return arrived_; }
  std::uint64_t blocked() const { return blocked_; }
  std::uint64_t crossed() const { return crossed_.size(); }
  const std::vector<Vehicle>& crossed_vehicles() const { return crossed_; }

 private:
  std::size_t road_id_;
  double length_m_;
  std::size_t capacity_;
  Signal signal_ = Signal::Red;
  std::deque<Vehicle> queue_;
  std::vector<Vehicle> crossed_;
  std::uint64_t arrived_ = 0;
  std::uint64_t blocked_ = 0;
};

// ---- Arrival processes -----------------------------------------------------

struct ArrivalSpec {
  enum class Kind { Deterministic, Poisson, Trace };
  Kind kind = Kind::Poisson;
  double interval_s = 10;             // deterministic
  std::uint32_t batch = 1;            // deterministic: vehicles per arrival instant
  std::optional<double> offset_s;     // deterministic: first arrival (defaults to interval)
  double rate_per_s = 0.1;            // poisson
  std::vector<double> times_s;        // trace

  void validate() const;
};

const char* to_string(ArrivalSpec::Kind kind);

/// Stateful generator of arrival instants for one road.
class ArrivalProcess {
 public:
  ArrivalProcess(ArrivalSpec spec, Rng rng);

  /// Next arrival instant and how many vehicles arrive then; empty when the
  /// process is exhausted.
  std::optional<std::pair<SimTime, std::uint32_t>> next();

 private:
  ArrivalSpec spec_;
  Rng rng_;
  std::size_t emitted_ = 0;
  double clock_s_ = 0;
};

}  // namespace fogtraffic
