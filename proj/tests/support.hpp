#pragma once

// Independent checks over a finished run, shared by the unit and acceptance
// suites. Each returns an empty string when the property holds, otherwise a
// description of the first violation.

#include <algorithm>
#include <string>

#include "fogtraffic/simulation.hpp"

namespace fogtraffic::testing {

/// No two roads are green (or yellow) at the same instant.
inline std::string timeline_violation(const RunRecord& run) {
  auto tl = run.signal_timeline;
  std::sort(tl.begin(), tl.end(), [](const SignalInterval& a, const SignalInterval& b) { return a.start < b.start; });
  for (std::size_t i = 1; i < tl.size(); ++i) {
    if (tl[i].start < tl[i - 1].end) {
      return "roads " + std::to_string(tl[i - 1].road + 1) + " and " + std::to_string(tl[i].road + 1) +
             " overlap at " + std::to_string(tl[i].start.to_seconds()) + " s";
    }
  }
  return {};
}

/// arrivals = crossed + queued + blocked on every road.
inline std::string vehicle_violation(const RunRecord& run) {
  for (const RoadRecord& r : run.roads) {
    if (r.arrived != r.crossed.size() + r.queued.size() + r.blocked) {
      return "road " + std::to_string(r.road + 1) + ": arrived " + std::to_string(r.arrived) + " != crossed " +
             std::to_string(r.crossed.size()) + " + queued " + std::to_string(r.queued.size()) + " + blocked " +
             std::to_string(r.blocked);
    }
    for (const Vehicle& v : r.crossed) {
      if (!v.crossed_time || *v.crossed_time < v.arrival_time) return "vehicle crossed before arriving";
    }
  }
  return {};
}

/// Every sent tuple is delivered, and each frame yields one archive, one
/// status report and one loop sample (drained runs only).
inline std::string tuple_violation(const RunRecord& run) {
  const TupleCounts& t = run.tuples;
  if (t.sent != t.delivered + t.in_flight) return "sent != delivered + in flight";
  if (t.sent != run.transmissions.size()) return "transmission log size differs from sent count";
  if (!run.config.drain) return {};
  if (t.in_flight != 0) return std::to_string(t.in_flight) + " tuples still in flight";
  if (t.frames_processed != t.frames_emitted) return "frames processed != frames emitted";
  if (t.archives_received != t.frames_emitted) return "archives != frames";
  if (t.slot_status_handled != t.frames_emitted) return "slot status reports != frames";
  if (run.loop_samples.size() != t.frames_emitted) return "loop samples != frames";
  // Frames + archives + status reports + LED commands.
  if (t.sent != 3 * t.frames_emitted + t.led_commands_sent) return "tuple kinds do not add up to sent";
  return {};
}

/// TTFU recounted from the transmission log, with hop counts taken from a
/// freshly built topology rather than from the log.
inline double recount_ttfu(const RunRecord& run) {
  const Topology topo = build_topology(standard_description(run.config.topology_params()));
  double total = 0;
  for (const TransmissionRecord& t : run.transmissions) {
    // Walk parents to the common ancestor.
    std::size_t hops = 0;
    NodeId a = t.from;
    NodeId b = t.to;
    while (topo.node(a).depth > topo.node(b).depth) a = *topo.node(a).parent, ++hops;
    while (topo.node(b).depth > topo.node(a).depth) b = *topo.node(b).parent, ++hops;
    while (a != b) a = *topo.node(a).parent, b = *topo.node(b).parent, hops += 2;
    for (std::size_t h = 0; h < hops; ++h) total += t.nw_length;
  }
  return total;
}

inline std::string ttfu_violation(const RunRecord& run) {
  const double recount = recount_ttfu(run);
  if (recount != run.network_usage) {
    return "TTFU " + std::to_string(run.network_usage) + " != recount " + std::to_string(recount);
  }
  return {};
}

}  // namespace fogtraffic::testing
