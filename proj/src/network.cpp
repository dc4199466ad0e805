#include "fogtraffic/network.hpp"

#include <algorithm>
#include <stdexcept>

namespace fogtraffic {

const char* to_string(TupleType type) {
  switch (type) {
    case TupleType::Frame: return "FRAME";
    case TupleType::SlotStatus: return "SLOT_STATUS";
    case TupleType::LedCommand: return "LED_COMMAND";
    case TupleType::CloudArchive: return "CLOUD_ARCHIVE";
  }
  return "UNKNOWN";
}

SimTime Network::transit_time(NodeId from, NodeId to, double nw_length) const {
  SimTime total;
  for (const Hop& hop : topo_.route(from, to)) {
    total += hop.latency;
    const auto& spec = hop.upward ? topo_.node(hop.from).spec : topo_.node(hop.to).spec;
    if (spec && nw_length > 0) {
      total += SimTime::seconds(nw_length / (hop.upward ? spec->uplink_bw : spec->downlink_bw));
    }
  }
  return total;
}

EventId Network::transmit(Tuple tuple, NodeId from, NodeId to, DeliveryHandler on_delivery) {
  if (tuple.nw_length < 0) throw std::invalid_argument("negative tuple nw_length");
  const std::size_t hops = topo_.route(from, to).size();
  for (std::size_t i = 0; i < hops; ++i) usage_ += tuple.nw_length;
  const SimTime sent_at = sim_.now();
  const SimTime delay = transit_time(from, to, tuple.nw_length);
  ++sent_;
  const std::size_t slot = log_.size();
  log_.push_back({tuple.id, tuple.type, from, to, hops, tuple.nw_length, sent_at, sent_at + delay});
  return sim_.schedule(EventKind::TupleArrival, delay,
                       [this, slot, tuple = std::move(tuple), handler = std::move(on_delivery)]() mutable {
                         ++delivered_;
                         tuple.delivered_at = sim_.now();
                         log_[slot].delivered_at = sim_.now();
                         if (handler) handler(std::move(tuple));
                       });
}

Processing::Processing(Simulator& sim, const Topology& topology)
    : sim_(sim), topo_(topology), state_(topology.size()) {}

EventId Processing::execute(NodeId device, Tuple tuple, CompletionHandler on_complete) {
  const auto& spec = topo_.node(device).spec;
  if (!spec) throw std::invalid_argument("device '" + topo_.node(device).name + "' cannot execute tuples");
  if (tuple.cpu_length < 0) throw std::invalid_argument("negative tuple cpu_length");
  DeviceState& st = state_[device];
  const SimTime start = std::max(sim_.now(), st.busy_until);
  const SimTime end = start + service_time(tuple.cpu_length, spec->mips);
  st.busy_until = end;
  if (end > start) st.busy.push_back({start, end});
  return sim_.schedule_at(EventKind::TupleExecutionComplete, end,
                          [this, device, tuple = std::move(tuple), handler = std::move(on_complete)]() mutable {
                            ++state_[device].completed;
                            tuple.executed_at = sim_.now();
                            if (handler) handler(std::move(tuple));
                          });
}

SimTime Processing::busy_time(NodeId device, SimTime horizon) const {
  SimTime total;
  for (const Interval& iv : state_.at(device).busy) {
    if (iv.start >= horizon) break;
    total += std::min(iv.end, horizon) - iv.start;
  }
  return total;
}

std::vector<EnergyRow> energy_report(const Topology& topology, const Processing& processing, SimTime elapsed) {
  if (elapsed <= SimTime{}) throw std::invalid_argument("energy_report needs a positive elapsed time");
  std::vector<EnergyRow> rows;
  for (NodeId id : topology.compute_devices()) {
    const auto& node = topology.node(id);
    const DeviceSpec& spec = *node.spec;
    const double busy = processing.busy_time(id, elapsed).to_seconds();
    const double idle = elapsed.to_seconds() - busy;
    rows.push_back({node.name, spec.level, busy, idle, busy / elapsed.to_seconds(),
                    spec.busy_power * busy + spec.idle_power * idle, spec.rate_per_mips * spec.mips * busy});
  }
  return rows;
}

}  // namespace fogtraffic
