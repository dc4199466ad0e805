#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fogtraffic/des.hpp"
#include "fogtraffic/topology.hpp"

namespace fogtraffic {

enum class TupleType : std::uint8_t { Frame, SlotStatus, LedCommand, CloudArchive };

const char* to_string(TupleType type);

struct Tuple {
  std::uint64_t id = 0;
  TupleType type = TupleType::Frame;
  std::string source;
  std::string destination;
  double cpu_length = 0;  // MI
  double nw_length = 0;   // payload, bandwidth unit * s
  SimTime created_at;
  std::optional<SimTime> delivered_at;
  std::optional<SimTime> executed_at;

  // Application payload.
  std::size_t road = 0;
  std::uint64_t frame_id = 0;
  SimTime loop_start;  // emission time of the originating frame
  std::size_t vehicle_count = 0;
  std::optional<LedColor> led_on;
};

struct TransmissionRecord {
  std::uint64_t tuple_id;
  TupleType type;
  NodeId from;
  NodeId to;
  std::size_t hops;
  double nw_length;
  SimTime sent_at;
  SimTime delivered_at;
};

/// Moves tuples along tree paths. Each hop costs its link latency plus
/// serialization: sender uplink bandwidth on upward hops, receiver downlink
/// bandwidth on downward hops. Sensors and actuators have no bandwidth
/// figure, so hops touching them cost latency only. Links are uncontended.
class Network {
 public:
  using DeliveryHandler = std::function<void(Tuple)>;

  Network(Simulator& sim, const Topology& topology) : sim_(sim), topo_(topology) {}

  SimTime transit_time(NodeId from, NodeId to, double nw_length) const;
  EventId transmit(Tuple tuple, NodeId from, NodeId to, DeliveryHandler on_delivery);

  /// Total payload carried, counted once per hop.
  double network_usage() const { return usage_; }
  std::uint64_t sent() const { return sent_; }
  std::uint64_t delivered() const { return delivered_; }
  std::uint64_t in_flight() const { return sent_ - delivered_; }
  const std::vector<TransmissionRecord>& log() const { return log_; }

 private:
  Simulator& sim_;
  const Topology& topo_;
  double usage_ = 0;
  std::uint64_t sent_ = 0;
  std::uint64_t delivered_ = 0;
  std::vector<TransmissionRecord> log_;
};

/// FIFO single-server execution on each compute device.
class Processing {
 public:
  using CompletionHandler = std::function<void(Tuple)>;

  Processing(Simulator& sim, const Topology& topology);

  static SimTime service_time(double cpu_length, double mips) { return SimTime::seconds(cpu_length / mips); }

  EventId execute(NodeId device, Tuple tuple, CompletionHandler on_complete);
  /// Time the device is busy within [0, horizon].
  SimTime busy_time(NodeId device, SimTime horizon) const;
  std::uint64_t executed(NodeId device) const { return state_.at(device).completed; }

 private:
  struct Interval {
    SimTime start;
    SimTime end;
  };
  struct DeviceState {
    SimTime busy_until;
    std::uint64_t completed = 0;
    std::vector<Interval> busy;
  };

  Simulator& sim_;
  const Topology& topo_;
  std::vector<DeviceState> state_;
};

struct EnergyRow {
  std::string device;
  int level = 0;
  double busy_s = 0;
  double idle_s = 0;
  double utilization = 0;
  double energy_j = 0;
  double cost = 0;  // rate_per_mips * MIPS * busy seconds; informational
};

/// Per-device busy/idle integration over [0, elapsed].
std::vector<EnergyRow> energy_report(const Topology& topology, const Processing& processing, SimTime elapsed);

}  // namespace fogtraffic
