#include <algorithm>
#include <deque>

#include "doctest.h"
#include "sdiov/errors.hpp"
#include "sdiov/topology.hpp"

using namespace sdiov;

namespace {

// Oracle: plain BFS over the raw link list, no adjacency cache.
int bfs_hops(const Topology& t, NodeId s, NodeId d) {
  std::vector<int> dist(t.node_count(), -1);
  std::deque<std::uint32_t> q{s.value};
  dist[s.value] = 0;
  while (!q.empty()) {
    const auto u = q.front();
    q.pop_front();
    for (const auto& l : t.links()) {
      std::uint32_t v;
      if (l.a.value == u) v = l.b.value;
      else if (l.b.value == u) v = l.a.value;
      else continue;
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        q.push_back(v);
      }
    }
  }
  return dist[d.value];
}

// Oracle: enumerate every simple path by DFS and keep the shortest, then the
// lexicographically smallest link sequence.
void dfs(const Topology& t, std::uint32_t u, std::uint32_t d, std::vector<bool>& seen, Path& cur,
         std::vector<Path>& all) {
  if (u == d) {
    all.push_back(cur);
    return;
  }
  if (cur.size() >= 9) return;
  for (std::uint32_t li = 0; li < t.link_count(); ++li) {
    const auto& l = t.links()[li];
    std::uint32_t v;
    if (l.a.value == u) v = l.b.value;
    else if (l.b.value == u) v = l.a.value;
    else continue;
    if (seen[v]) continue;
    seen[v] = true;
    cur.push_back(LinkId(li));
    dfs(t, v, d, seen, cur, all);
    cur.pop_back();
    seen[v] = false;
  }
}

std::vector<Path> brute_minimal_paths(const Topology& t, NodeId s, NodeId d) {
  std::vector<bool> seen(t.node_count(), false);
  seen[s.value] = true;
  Path cur;
  std::vector<Path> all;
  dfs(t, s.value, d.value, seen, cur, all);
  std::size_t best = SIZE_MAX;
  for (const auto& p : all) best = std::min(best, p.size());
  std::vector<Path> out;
  for (const auto& p : all) {
    if (p.size() == best) out.push_back(p);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("default topology has the testbed shape") {
  const auto t = build_default_topology();
  CHECK(t.servers().size() == 3);
  CHECK(t.rsus().size() == 3);
  CHECK(t.switches().size() == 8);
  CHECK(t.link_count() == 22);
  CHECK_NOTHROW(t.validate());
}

TEST_CASE("every rsu reaches every server") {
  const auto t = build_default_topology();
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::uint32_t m = 0; m < 3; ++m) {
      const auto p = shortest_path(t, r, PmId(m));
      CHECK(p.size() >= 1);
      const auto nodes = path_nodes(t, t.rsu_node(r), p);
      CHECK(nodes.front() == t.rsu_node(r));
      CHECK(nodes.back() == t.server_node(PmId(m)));
    }
  }
}

TEST_CASE("rsu1 to m1 hop count matches bfs") {
  const auto t = build_default_topology();
  const auto p = shortest_path(t, 0, PmId(0));
  CHECK(static_cast<int>(p.size()) == bfs_hops(t, t.rsu_node(0), t.server_node(PmId(0))));
}

TEST_CASE("shortest path matches brute-force oracle for all rsu/server pairs") {
  const auto t = build_default_topology();
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::uint32_t m = 0; m < 3; ++m) {
      const auto s = t.rsu_node(r), d = t.server_node(PmId(m));
      const auto oracle = brute_minimal_paths(t, s, d);
      REQUIRE(!oracle.empty());
      const auto p = shortest_path(t, s, d);
      CHECK(static_cast<int>(p.size()) == bfs_hops(t, s, d));
      CHECK(p == oracle.front());
      CHECK(equal_cost_paths(t, s, d) == oracle);
    }
  }
}

TEST_CASE("equal paths break ties on the smaller link sequence") {
  // Diamond: a-b-d and a-c-d, links added so the lower ids go through c.
  Topology t;
  const auto a = t.add_node(NodeKind::Rsu, "a");
  const auto b = t.add_node(NodeKind::Switch, "b", 100);
  const auto c = t.add_node(NodeKind::Switch, "c", 100);
  const auto d = t.add_node(NodeKind::Server, "d");
  const auto l0 = t.add_link("ac", a, c, 10, 1);
  const auto l1 = t.add_link("cd", c, d, 10, 1);
  t.add_link("ab", a, b, 10, 1);
  t.add_link("bd", b, d, 10, 1);
  CHECK(shortest_path(t, a, d) == Path{l0, l1});
  CHECK(equal_cost_paths(t, a, d).size() == 2);
}

TEST_CASE("disconnected graph reports NoPath") {
  Topology t;
  const auto a = t.add_node(NodeKind::Rsu, "a");
  const auto b = t.add_node(NodeKind::Server, "b");
  CHECK_THROWS_AS(shortest_path(t, a, b), NoPath);
  CHECK_THROWS_AS(t.validate(), Error);
}

TEST_CASE("path latency sums link latencies") {
  const auto t = build_default_topology();
  const auto p = shortest_path(t, 0, PmId(0));
  CHECK(path_latency_ms(t, p) == doctest::Approx(2.0 * static_cast<double>(p.size())));
}

TEST_CASE("core switches carry more forwarding capacity") {
  const auto t = build_default_topology();
  CHECK(t.node(t.find_node("S4")).forwarding_capacity_mbps == 1875.0);
  CHECK(t.node(t.find_node("S1")).forwarding_capacity_mbps == 1250.0);
}
