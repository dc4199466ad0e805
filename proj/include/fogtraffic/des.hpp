#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fogtraffic/sim_time.hpp"

namespace fogtraffic {

enum class EventKind : std::uint8_t {
  TupleArrival,
  TupleExecutionComplete,
  SensorEmit,
  PhaseChange,
  VehicleArrival,
  VehicleCross,
  MetricsSample,
  Generic,
};

std::string_view to_string(EventKind kind);

using EventId = std::uint64_t;

class SchedulingError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an event handler throws. Carries the offending event.
class SimulationError : public std::runtime_error {
 public:
  SimulationError(EventId id, EventKind kind, SimTime at, const std::string& what);

  EventId event_id() const { return id_; }
  EventKind kind() const { return kind_; }
  SimTime fire_at() const { return at_; }

 private:
  EventId id_;
  EventKind kind_;
  SimTime at_;
};

struct RunSummary {
  std::uint64_t events_dispatched = 0;
  SimTime clock;

  bool operator==(const RunSummary&) const = default;
};

struct TraceEntry {
  EventId id;
  SimTime fire_at;
  EventKind kind;

  bool operator==(const TraceEntry&) const = default;
};

/// Single-threaded discrete-event kernel. Events at equal times dispatch in
/// ascending id order, ids being assigned in schedule order.
class Simulator {
 public:
  using Handler = std::function<void()>;

  SimTime now() const { return now_; }

  EventId schedule(EventKind kind, SimTime delay, Handler handler);
  EventId schedule_at(EventKind kind, SimTime at, Handler handler);
  bool cancel(EventId id);
  bool pending(EventId id) const { return handlers_.contains(id); }
  std::size_t pending_count() const { return handlers_.size(); }

  RunSummary run_until(SimTime t_end);
  /// Dispatches until the queue is empty.
  RunSummary run_to_completion();

  void enable_trace(bool on) { tracing_ = on; }
  const std::vector<TraceEntry>& trace() const { return trace_; }
  std::uint64_t total_dispatched() const { return dispatched_; }

 private:
  struct Key {
    SimTime fire_at;
    EventId id;
    bool operator>(const Key& o) const {
      return fire_at != o.fire_at ? fire_at > o.fire_at : id > o.id;
    }
  };
  struct Entry {
    EventKind kind;
    Handler handler;
  };

  bool dispatch_next(SimTime limit);

  SimTime now_;
  EventId next_id_ = 1;
  std::uint64_t dispatched_ = 0;
  std::priority_queue<Key, std::vector<Key>, std::greater<Key>> queue_;
  std::unordered_map<EventId, Entry> handlers_;
  bool tracing_ = false;
  std::vector<TraceEntry> trace_;
};

}  // namespace fogtraffic
