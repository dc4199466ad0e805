#include "fogtraffic/des.hpp"

#include <exception>

namespace fogtraffic {

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::TupleArrival: return "tuple-arrival";
    case EventKind::TupleExecutionComplete: return "tuple-execution-complete";
    case EventKind::SensorEmit: return "sensor-emit";
    case EventKind::PhaseChange: return "phase-change";
    case EventKind::VehicleArrival: return "vehicle-arrival";
    case EventKind::VehicleCross: return "vehicle-cross";
    case EventKind::MetricsSample: return "metrics-sample";
    case EventKind::Generic: return "generic";
  }
  return "unknown";
}

SimulationError::SimulationError(EventId id, EventKind kind, SimTime at, const std::string& what)
    : std::runtime_error("event " + std::to_string(id) + " (" + std::string(to_string(kind)) + " at " +
                         std::to_string(at.count()) + " ms) failed: " + what),
      id_(id),
      kind_(kind),
      at_(at) {}

EventId Simulator::schedule(EventKind kind, SimTime delay, Handler handler) {
  if (delay < SimTime{}) {
    throw SchedulingError("negative delay " + std::to_string(delay.count()) + " ms");
  }
  return schedule_at(kind, now_ + delay, std::move(handler));
}

EventId Simulator::schedule_at(EventKind kind, SimTime at, Handler handler) {
  if (at < now_) {
    throw SchedulingError("event at " + std::to_string(at.count()) + " ms is before now (" +
                          std::to_string(now_.count()) + " ms)");
  }
  const EventId id = next_id_++;
  queue_.push(Key{at, id});
  handlers_.emplace(id, Entry{kind, std::move(handler)});
  return id;
}

bool Simulator::cancel(EventId id) { return handlers_.erase(id) > 0; }

bool Simulator::dispatch_next(SimTime limit) {
  while (!queue_.empty()) {
    const Key key = queue_.top();
    if (key.fire_at > limit) return false;
    queue_.pop();
    auto it = handlers_.find(key.id);
    if (it == handlers_.end()) continue;  // cancelled
    Entry entry = std::move(it->second);
    handlers_.erase(it);
    now_ = key.fire_at;
    ++dispatched_;
    if (tracing_) trace_.push_back(TraceEntry{key.id, key.fire_at, entry.kind});
    try {
      entry.handler();
    } catch (const SimulationError&) {
      throw;
    } catch (const std::exception& e) {
      throw SimulationError(key.id, entry.kind, key.fire_at, e.what());
    }
    return true;
  }
  return false;
}

RunSummary Simulator::run_until(SimTime t_end) {
  if (t_end < now_) {
    throw SchedulingError("run_until target " + std::to_string(t_end.count()) + " ms is in the past");
  }
  RunSummary summary;
  while (dispatch_next(t_end)) ++summary.events_dispatched;
  now_ = t_end;
  summary.clock = now_;
  return summary;
}

RunSummary Simulator::run_to_completion() {
  RunSummary summary;
  while (dispatch_next(SimTime::max())) ++summary.events_dispatched;
  summary.clock = now_;
  return summary;
}

}  // namespace fogtraffic
