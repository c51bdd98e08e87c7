#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sdiov/ids.hpp"

namespace sdiov {

enum class NodeKind { Rsu, Switch, Server };

struct Node {
  NodeKind kind = NodeKind::Switch;
  std::string name;
  // Switch forwarding capacity; the switch "CPU usage" proxy is the forwarded
  // traffic divided by this. Unused for RSUs and servers.
  double forwarding_capacity_mbps = 0.0;
};

struct Link {
  std::string name;
  NodeId a;
  NodeId b;
  double capacity_mbps = 1000.0;
  double latency_ms = 2.0;

  NodeId other(NodeId n) const { return n == a ? b : a; }
  friend bool operator==(const Link&, const Link&) = default;
};

using Path = std::vector<LinkId>;

class Topology {
 public:
  NodeId add_node(NodeKind kind, std::string name, double forwarding_capacity_mbps = 0.0);
  LinkId add_link(std::string name, NodeId a, NodeId b, double capacity_mbps, double latency_ms);

  const Node& node(NodeId id) const { return nodes_.at(id.index()); }
  const Link& link(LinkId id) const { return links_.at(id.index()); }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t link_count() const { return links_.size(); }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Link>& links() const { return links_; }

  // Role lists, in insertion order. Server i backs PmId(i), RSU i is ingress i.
  const std::vector<NodeId>& rsus() const { return rsus_; }
  const std::vector<NodeId>& switches() const { return switches_; }
  const std::vector<NodeId>& servers() const { return servers_; }

  NodeId server_node(PmId pm) const { return servers_.at(pm.index()); }
  NodeId rsu_node(std::size_t rsu) const { return rsus_.at(rsu); }

  // (link, neighbour) pairs sorted by link id.
  const std::vector<std::pair<LinkId, NodeId>>& adjacent(NodeId n) const {
    return adjacency_.at(n.index());
  }

  NodeId find_node(const std::string& name) const;

  // Throws Error unless the graph is connected and every RSU reaches every server.
  void validate() const;

  friend bool operator==(const Topology& x, const Topology& y);

 private:
  std::vector<Node> nodes_;
  std::vector<Link> links_;
  std::vector<NodeId> rsus_;
  std::vector<NodeId> switches_;
  std::vector<NodeId> servers_;
  std::vector<std::vector<std::pair<LinkId, NodeId>>> adjacency_;
};

struct TopologyDefaults {
  double link_capacity_mbps = 1000.0;
  double link_latency_ms = 2.0;
  // Ingress and server-facing switches.
  double edge_switch_capacity_mbps = 1250.0;
  // The two core switches each carry half of all traffic when load is split,
  // so they are provisioned at 1.5x the edge switches.
  double core_switch_capacity_mbps = 1875.0;
};

// Three RSUs, eight switches (S1-S3 ingress, S4-S5 core, S6-S8 server-facing),
// three servers M1-M3 and twenty-two links L1-L22.
Topology build_default_topology(const TopologyDefaults& defaults = {});

// Minimal-hop path; among equal-length paths the lexicographically smallest
// link-id sequence wins. Throws NoPath.
Path shortest_path(const Topology& topology, NodeId src, NodeId dst);
Path shortest_path(const Topology& topology, std::size_t rsu, PmId server);

// Every minimal-hop path, sorted lexicographically by link ids.
std::vector<Path> equal_cost_paths(const Topology& topology, NodeId src, NodeId dst);

// Hop distance from src to every node (-1 when unreachable).
std::vector<int> hop_distances(const Topology& topology, NodeId src);

// Nodes visited by a path starting at src, including both endpoints.
std::vector<NodeId> path_nodes(const Topology& topology, NodeId src, const Path& path);

double path_latency_ms(const Topology& topology, const Path& path);

}  // namespace sdiov
