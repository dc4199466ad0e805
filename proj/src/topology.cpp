#include "fogtraffic/topology.hpp"

#include <algorithm>
#include <set>

namespace fogtraffic {

const char* to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::Cloud: return "cloud";
    case NodeKind::Proxy: return "proxy";
    case NodeKind::FogNode: return "fog";
    case NodeKind::Camera: return "camera";
    case NodeKind::Led: return "led";
  }
  return "unknown";
}

const char* to_string(LedColor color) {
  switch (color) {
    case LedColor::Red: return "red";
    case LedColor::Yellow: return "yellow";
    case LedColor::Green: return "green";
  }
  return "unknown";
}

void DeviceSpec::validate(const std::string& name) const {
  auto fail = [&](const std::string& what) { throw TopologyError("device '" + name + "': " + what); };
  if (!(mips > 0)) fail("mips must be positive");
  if (!(uplink_bw > 0)) fail("uplink_bw must be positive");
  if (!(downlink_bw > 0)) fail("downlink_bw must be positive");
  if (level < 0 || level > 2) fail("level must be 0, 1 or 2");
  if (!(idle_power >= 0)) fail("idle_power must be non-negative");
  if (!(busy_power >= idle_power)) fail("busy_power must be >= idle_power");
  if (!(ram_mb >= 0)) fail("ram must be non-negative");
}

// Powers follow the usual iFogSim example values; the remaining figures are
// the cloud/proxy/fog configuration of the deployment.
DeviceSpec default_cloud_spec() {
  return DeviceSpec{.level = 0,
                    .mips = 500,
                    .ram_mb = 45000,
                    .uplink_bw = 1000,
                    .downlink_bw = 1200,
                    .rate_per_mips = 1000,
                    .busy_power = 16 * 103,
                    .idle_power = 16 * 83.25};
}

DeviceSpec default_proxy_spec() {
  return DeviceSpec{.level = 1,
                    .mips = 4000,
                    .ram_mb = 4500,
                    .uplink_bw = 1000,
                    .downlink_bw = 1100,
                    .rate_per_mips = 500,
                    .busy_power = 107.339,
                    .idle_power = 83.4333};
}

DeviceSpec default_fog_spec() {
  return DeviceSpec{.level = 2,
                    .mips = 1000,
                    .ram_mb = 3000,
                    .uplink_bw = 800,
                    .downlink_bw = 1000,
                    .rate_per_mips = 400,
                    .busy_power = 107.339,
                    .idle_power = 83.4333};
}

TopologyDescription standard_description(const TopologyParams& params) {
  if (params.fog_nodes < 1) throw TopologyError("at least one fog node is required");
  TopologyDescription d;
  d.nodes.push_back({"cloud", NodeKind::Cloud, params.cloud, {}});
  d.nodes.push_back({"proxy", NodeKind::Proxy, params.proxy, {}});
  d.links.push_back({"cloud", "proxy", params.latencies.cloud_proxy});
  for (int i = 1; i <= params.fog_nodes; ++i) {
    const std::string fog = "fog-" + std::to_string(i);
    d.nodes.push_back({fog, NodeKind::FogNode, params.fog, {}});
    d.links.push_back({"proxy", fog, params.latencies.proxy_fog});
    const std::string cam = "camera-" + std::to_string(i);
    d.nodes.push_back({cam, NodeKind::Camera, {}, {}});
    d.links.push_back({fog, cam, params.latencies.fog_edge});
    for (LedColor c : {LedColor::Red, LedColor::Yellow, LedColor::Green}) {
      const std::string led = "led-" + std::to_string(i) + "-" + to_string(c);
      d.nodes.push_back({led, NodeKind::Led, {}, c});
      d.links.push_back({fog, led, params.latencies.fog_edge});
    }
  }
  return d;
}

NodeId Topology::id(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) throw TopologyError("unknown device '" + name + "'");
  return it->second;
}

std::vector<NodeId> Topology::compute_devices() const {
  std::vector<NodeId> out;
  for (NodeId i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].spec) out.push_back(i);
  }
  return out;
}

std::vector<Hop> Topology::route(NodeId from, NodeId to) const {
  if (from >= nodes_.size() || to >= nodes_.size()) throw TopologyError("unknown device id");
  std::vector<Hop> up;
  std::vector<Hop> down;
  NodeId a = from;
  NodeId b = to;
  while (nodes_[a].depth > nodes_[b].depth) {
    up.push_back({a, *nodes_[a].parent, nodes_[a].uplink_latency, true});
    a = *nodes_[a].parent;
  }
  while (nodes_[b].depth > nodes_[a].depth) {
    down.push_back({*nodes_[b].parent, b, nodes_[b].uplink_latency, false});
    b = *nodes_[b].parent;
  }
  while (a != b) {
    up.push_back({a, *nodes_[a].parent, nodes_[a].uplink_latency, true});
    a = *nodes_[a].parent;
    down.push_back({*nodes_[b].parent, b, nodes_[b].uplink_latency, false});
    b = *nodes_[b].parent;
  }
  up.insert(up.end(), down.rbegin(), down.rend());
  return up;
}

SimTime Topology::route_latency(NodeId from, NodeId to) const {
  SimTime total;
  for (const Hop& h : route(from, to)) total += h.latency;
  return total;
}

Topology build_topology(const TopologyDescription& description) {
  Topology t;
  for (const NodeDecl& decl : description.nodes) {
    if (decl.name.empty()) throw TopologyError("device with empty name");
    if (t.by_name_.contains(decl.name)) throw TopologyError("duplicate device name '" + decl.name + "'");
    const bool compute = decl.kind == NodeKind::Cloud || decl.kind == NodeKind::Proxy || decl.kind == NodeKind::FogNode;
    if (compute && !decl.spec) throw TopologyError("device '" + decl.name + "' has no hardware spec");
    if (decl.spec) decl.spec->validate(decl.name);
    if (decl.kind == NodeKind::Led && !decl.color) throw TopologyError("LED '" + decl.name + "' has no color");
    t.by_name_.emplace(decl.name, t.nodes_.size());
    t.nodes_.push_back({decl.name, decl.kind, decl.spec, decl.color, std::nullopt, SimTime{}, 0});
  }

  std::vector<NodeId> roots;
  for (NodeId i = 0; i < t.nodes_.size(); ++i) {
    if (t.nodes_[i].kind == NodeKind::Cloud) roots.push_back(i);
  }
  if (roots.size() != 1) throw TopologyError("exactly one cloud device is required");
  t.cloud_ = roots.front();

  std::vector<std::vector<NodeId>> children(t.nodes_.size());
  for (const LinkDecl& link : description.links) {
    if (link.latency < SimTime{}) throw TopologyError("negative latency on link " + link.parent + " -> " + link.child);
    const NodeId p = t.id(link.parent);
    const NodeId c = t.id(link.child);
    if (p == c) throw TopologyError("cycle: self-link on '" + link.parent + "'");
    if (t.nodes_[c].parent) throw TopologyError("device '" + link.child + "' has more than one parent");
    t.nodes_[c].parent = p;
    t.nodes_[c].uplink_latency = link.latency;
    children[p].push_back(c);
  }
  if (t.nodes_[t.cloud_].parent) throw TopologyError("cycle: the cloud cannot have a parent");

  // Walk parent pointers; anything not ending at the cloud is a cycle or detached.
  for (NodeId i = 0; i < t.nodes_.size(); ++i) {
    std::set<NodeId> seen;
    NodeId cur = i;
    while (cur != t.cloud_) {
      if (!seen.insert(cur).second) throw TopologyError("cycle in links through '" + t.nodes_[cur].name + "'");
      if (!t.nodes_[cur].parent) throw TopologyError("device '" + t.nodes_[cur].name + "' is not connected");
      cur = *t.nodes_[cur].parent;
    }
    t.nodes_[i].depth = seen.size();
  }

  auto expect_parent = [&](NodeId c, NodeKind kind) {
    if (t.nodes_[*t.nodes_[c].parent].kind != kind) {
      throw TopologyError("device '" + t.nodes_[c].name + "' must be attached to a " + to_string(kind));
    }
  };
  std::vector<NodeId> proxies;
  for (NodeId i = 0; i < t.nodes_.size(); ++i) {
    switch (t.nodes_[i].kind) {
      case NodeKind::Cloud: break;
      case NodeKind::Proxy:
        expect_parent(i, NodeKind::Cloud);
        proxies.push_back(i);
        break;
      case NodeKind::FogNode: expect_parent(i, NodeKind::Proxy); break;
      case NodeKind::Camera:
      case NodeKind::Led: expect_parent(i, NodeKind::FogNode); break;
    }
  }
  if (proxies.size() != 1) throw TopologyError("exactly one proxy device is required");
  t.proxy_ = proxies.front();

  for (NodeId i = 0; i < t.nodes_.size(); ++i) {
    if (t.nodes_[i].kind != NodeKind::FogNode) continue;
    std::optional<NodeId> cam;
    std::array<std::optional<NodeId>, 3> leds;
    std::size_t led_count = 0;
    for (NodeId c : children[i]) {
      if (t.nodes_[c].kind == NodeKind::Camera) {
        if (cam) throw TopologyError("fog node '" + t.nodes_[i].name + "' has more than one camera");
        cam = c;
      } else if (t.nodes_[c].kind == NodeKind::Led) {
        ++led_count;
        auto& slot = leds[static_cast<int>(*t.nodes_[c].color)];
        if (slot) throw TopologyError("fog node '" + t.nodes_[i].name + "' has two " + to_string(*t.nodes_[c].color) + " LEDs");
        slot = c;
      }
    }
    if (!cam) throw TopologyError("fog node '" + t.nodes_[i].name + "' has no camera");
    if (led_count != 3) {
      throw TopologyError("fog node '" + t.nodes_[i].name + "' must have exactly 3 LEDs, has " + std::to_string(led_count));
    }
    t.fogs_.push_back(i);
    t.cameras_.push_back(*cam);
    t.leds_.push_back({*leds[0], *leds[1], *leds[2]});
  }
  if (t.fogs_.empty()) throw TopologyError("at least one fog node is required");
  return t;
}

}  // namespace fogtraffic
