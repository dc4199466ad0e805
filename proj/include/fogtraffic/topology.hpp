#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fogtraffic/sim_time.hpp"

namespace fogtraffic {

class TopologyError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class NodeKind { Cloud, Proxy, FogNode, Camera, Led };
enum class LedColor { Red = 0, Yellow = 1, Green = 2 };

const char* to_string(NodeKind kind);
const char* to_string(LedColor color);

/// Hardware of a compute tier. Bandwidths are in KB/s (or the configured
/// unit), powers in watts.
struct DeviceSpec {
  int level = 2;
  double mips = 1000;
  double ram_mb = 3000;
  double uplink_bw = 800;
  double downlink_bw = 1000;
  double rate_per_mips = 400;
  double busy_power = 107.339;
  double idle_power = 83.4333;

  void validate(const std::string& name) const;
};

DeviceSpec default_cloud_spec();
DeviceSpec default_proxy_spec();
DeviceSpec default_fog_spec();

struct NodeDecl {
  std::string name;
  NodeKind kind = NodeKind::FogNode;
  std::optional<DeviceSpec> spec;  // compute tiers only
  std::optional<LedColor> color;   // LEDs only
};

struct LinkDecl {
  std::string parent;
  std::string child;
  SimTime latency;
};

struct TopologyDescription {
  std::vector<NodeDecl> nodes;
  std::vector<LinkDecl> links;
};

struct LinkLatencies {
  SimTime cloud_proxy = SimTime::ms(200);
  SimTime proxy_fog = SimTime::ms(100);
  SimTime fog_edge = SimTime::ms(50);
};

struct TopologyParams {
  int fog_nodes = 4;
  DeviceSpec cloud = default_cloud_spec();
  DeviceSpec proxy = default_proxy_spec();
  DeviceSpec fog = default_fog_spec();
  LinkLatencies latencies;
};

/// cloud -> proxy -> fog-i -> {camera-i, led-i-red, led-i-yellow, led-i-green}
TopologyDescription standard_description(const TopologyParams& params);

using NodeId = std::size_t;

struct Hop {
  NodeId from;
  NodeId to;
  SimTime latency;
  bool upward;
};

class Topology {
 public:
  struct Node {
    std::string name;
    NodeKind kind;
    std::optional<DeviceSpec> spec;
    std::optional<LedColor> color;
    std::optional<NodeId> parent;
    SimTime uplink_latency;  // to parent
    std::size_t depth = 0;
  };

  std::size_t size() const { return nodes_.size(); }
  const Node& node(NodeId id) const { return nodes_.at(id); }
  NodeId id(const std::string& name) const;
  bool contains(const std::string& name) const { return by_name_.contains(name); }

  NodeId cloud() const { return cloud_; }
  NodeId proxy() const { return proxy_; }
  std::size_t fog_count() const { return fogs_.size(); }
  NodeId fog(std::size_t road) const { return fogs_.at(road); }
  NodeId camera(std::size_t road) const { return cameras_.at(road); }
  NodeId led(std::size_t road, LedColor color) const { return leds_.at(road)[static_cast<int>(color)]; }
  /// Compute devices (cloud, proxy, fog nodes) in id order.
  std::vector<NodeId> compute_devices() const;

  std::vector<Hop> route(NodeId from, NodeId to) const;
  SimTime route_latency(NodeId from, NodeId to) const;
  SimTime route_latency(const std::string& from, const std::string& to) const {
    return route_latency(id(from), id(to));
  }

 private:
  friend Topology build_topology(const TopologyDescription& description);

  std::vector<Node> nodes_;
  std::map<std::string, NodeId> by_name_;
  NodeId cloud_ = 0;
  NodeId proxy_ = 0;
  std::vector<NodeId> fogs_;
  std::vector<NodeId> cameras_;
  std::vector<std::array<NodeId, 3>> leds_;
};

/// Validates the description and builds the device tree. Throws TopologyError
/// on duplicate names, dangling or cyclic links, or malformed fog nodes.
Topology build_topology(const TopologyDescription& description);

}  // namespace fogtraffic
