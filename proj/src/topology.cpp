#include "sdiov/topology.hpp"

#include <algorithm>
#include <deque>
#include <functional>

#include "sdiov/errors.hpp"

namespace sdiov {

NodeId Topology::add_node(NodeKind kind, std::string name, double forwarding_capacity_mbps) {
  const NodeId id{static_cast<std::uint32_t>(nodes_.size())};
  nodes_.push_back(Node{kind, std::move(name), forwarding_capacity_mbps});
  adjacency_.emplace_back();
  switch (kind) {
    case NodeKind::Rsu: rsus_.push_back(id); break;
    case NodeKind::Switch: switches_.push_back(id); break;
    case NodeKind::Server: servers_.push_back(id); break;
  }
  return id;
}

LinkId Topology::add_link(std::string name, NodeId a, NodeId b, double capacity_mbps,
                          double latency_ms) {
  if (a.index() >= nodes_.size() || b.index() >= nodes_.size() || a == b) {
    throw Error("link '" + name + "' has invalid endpoints");
  }
  const LinkId id{static_cast<std::uint32_t>(links_.size())};
  links_.push_back(Link{std::move(name), a, b, capacity_mbps, latency_ms});
  // Links are appended in id order, so adjacency stays sorted by link id.
  adjacency_[a.index()].emplace_back(id, b);
  adjacency_[b.index()].emplace_back(id, a);
  return id;
}

NodeId Topology::find_node(const std::string& name) const {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].name == name) return NodeId{static_cast<std::uint32_t>(i)};
  }
  throw Error("unknown node '" + name + "'");
}

void Topology::validate() const {
  if (nodes_.empty()) throw Error("topology has no nodes");
  if (servers_.empty()) throw Error("topology has no servers");
  if (rsus_.empty()) throw Error("topology has no RSUs");
  const auto dist = hop_distances(*this, NodeId{0});
  if (std::any_of(dist.begin(), dist.end(), [](int d) { return d < 0; })) {
    throw Error("topology is not connected");
  }
  for (const auto& sw : switches_) {
    if (nodes_[sw.index()].forwarding_capacity_mbps <= 0.0) {
      throw Error("switch '" + nodes_[sw.index()].name + "' needs a positive capacity");
    }
  }
  for (const auto& l : links_) {
    if (l.capacity_mbps <= 0.0 || l.latency_ms < 0.0) {
      throw Error("link '" + l.name + "' has invalid capacity or latency");
    }
  }
}

bool operator==(const Topology& x, const Topology& y) {
  if (x.nodes_.size() != y.nodes_.size() || x.links_ != y.links_) return false;
  for (std::size_t i = 0; i < x.nodes_.size(); ++i) {
    const auto& a = x.nodes_[i];
    const auto& b = y.nodes_[i];
    if (a.kind != b.kind || a.name != b.name ||
        a.forwarding_capacity_mbps != b.forwarding_capacity_mbps) {
      return false;
    }
  }
  return true;
}

Topology build_default_topology(const TopologyDefaults& d) {
  Topology t;
  std::vector<NodeId> rsu, sw, m;
  for (int i = 1; i <= 3; ++i) rsu.push_back(t.add_node(NodeKind::Rsu, "RSU" + std::to_string(i)));
  for (int i = 1; i <= 8; ++i) {
    const bool core = (i == 4 || i == 5);
    sw.push_back(t.add_node(NodeKind::Switch, "S" + std::to_string(i),
                            core ? d.core_switch_capacity_mbps : d.edge_switch_capacity_mbps));
  }
  for (int i = 1; i <= 3; ++i) m.push_back(t.add_node(NodeKind::Server, "M" + std::to_string(i)));

  int n = 0;
  auto link = [&](NodeId a, NodeId b) {
    t.add_link("L" + std::to_string(++n), a, b, d.link_capacity_mbps, d.link_latency_ms);
  };
  // L1-L3: RSU attachment.
  for (int i = 0; i < 3; ++i) link(rsu[i], sw[i]);
  // L4-L9: ingress to both core switches.
  for (int i = 0; i < 3; ++i) {
    link(sw[i], sw[3]);
    link(sw[i], sw[4]);
  }
  // L10-L15: core to server-facing switches.
  for (int c = 3; c <= 4; ++c) {
    for (int j = 5; j < 8; ++j) link(sw[c], sw[j]);
  }
  // L16-L18: server attachment.
  for (int i = 0; i < 3; ++i) link(sw[5 + i], m[i]);
  // L19-L22: lateral redundancy links.
  link(sw[0], sw[1]);
  link(sw[1], sw[2]);
  link(sw[3], sw[4]);
  link(sw[6], sw[7]);
  return t;
}

std::vector<int> hop_distances(const Topology& topology, NodeId src) {
  std::vector<int> dist(topology.node_count(), -1);
  std::deque<NodeId> queue{src};
  dist[src.index()] = 0;
  while (!queue.empty()) {
    const NodeId u = queue.front();
    queue.pop_front();
    for (const auto& [lid, v] : topology.adjacent(u)) {
      if (dist[v.index()] < 0) {
        dist[v.index()] = dist[u.index()] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

Path shortest_path(const Topology& topology, NodeId src, NodeId dst) {
  const auto to_dst = hop_distances(topology, dst);
  if (to_dst[src.index()] < 0) {
    throw NoPath(topology.node(src).name + " -> " + topology.node(dst).name);
  }
  // Walking greedily along the smallest link id that moves one hop closer
  // yields the lexicographically smallest minimal path.
  Path path;
  NodeId at = src;
  while (at != dst) {
    for (const auto& [lid, v] : topology.adjacent(at)) {
      if (to_dst[v.index()] == to_dst[at.index()] - 1) {
        path.push_back(lid);
        at = v;
        break;
      }
    }
  }
  return path;
}

Path shortest_path(const Topology& topology, std::size_t rsu, PmId server) {
  return shortest_path(topology, topology.rsu_node(rsu), topology.server_node(server));
}

std::vector<Path> equal_cost_paths(const Topology& topology, NodeId src, NodeId dst) {
  const auto to_dst = hop_distances(topology, dst);
  if (to_dst[src.index()] < 0) {
    throw NoPath(topology.node(src).name + " -> " + topology.node(dst).name);
  }
  std::vector<Path> out;
  Path current;
  std::function<void(NodeId)> walk = [&](NodeId at) {
    if (at == dst) {
      out.push_back(current);
      return;
    }
    for (const auto& [lid, v] : topology.adjacent(at)) {
      if (to_dst[v.index()] == to_dst[at.index()] - 1) {
        current.push_back(lid);
        walk(v);
        current.pop_back();
      }
    }
  };
  walk(src);
  // Depth-first over sorted adjacency already emits lexicographic order.
  return out;
}

std::vector<NodeId> path_nodes(const Topology& topology, NodeId src, const Path& path) {
  std::vector<NodeId> nodes{src};
  NodeId at = src;
  for (const auto lid : path) {
    at = topology.link(lid).other(at);
    nodes.push_back(at);
  }
  return nodes;
}

double path_latency_ms(const Topology& topology, const Path& path) {
  double total = 0.0;
  for (const auto lid : path) total += topology.link(lid).latency_ms;
  return total;
}

}  // namespace sdiov
