#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "opcsim/graph.hpp"
#include "opcsim/graph_algorithms.hpp"
#include "opcsim/placement.hpp"

using namespace opcsim;

namespace {

Graph graph_from_edges(std::size_t n, std::initializer_list<std::pair<NodeId, NodeId>> edges) {
  Graph g = make_graph(n);
  for (auto [u, v] : edges) g.add_edge(u, v);
  g.sort_adjacency();
  return g;
}

}  // namespace

TEST_SUITE("topology") {

TEST_CASE("simple graph basics") {
  Graph g = graph_from_edges(3, {{0, 1}, {1, 2}});
  CHECK(g.node_count() == 3);
  CHECK(g.edge_count() == 2);
  CHECK(g.degree(1) == 2);
  CHECK(g.has_edge(0, 1));
  CHECK(g.has_edge(1, 0));
  CHECK_FALSE(g.has_edge(0, 2));
  CHECK(g.connected());

  CHECK_THROWS_AS(g.add_edge(1, 1), std::invalid_argument);  // self loop
  CHECK_THROWS_AS(g.add_edge(0, 1), std::invalid_argument);  // duplicate
  CHECK_THROWS_AS(g.add_edge(0, 9), std::invalid_argument);  // out of range

  Graph split = make_graph(4);
  split.add_edge(0, 1);
  split.add_edge(2, 3);
  CHECK_FALSE(split.connected());
}

TEST_CASE("preferential attachment: edge count identity and determinism") {
  // (m+1)m/2 clique edges plus m per subsequent node.
  const Graph g = generate_ba(50, 2, 1);
  CHECK(g.node_count() == 50);
  CHECK(g.edge_count() == 3 + 47 * 2);
  CHECK(g.connected());

  for (std::uint64_t seed : {2, 3, 4, 5}) {
    const Graph h = generate_ba(50, 2, seed);
    CHECK(h.edge_count() == 97);
    CHECK(h.connected());
  }

  // n == m+1 degenerates to the seed clique itself
  const Graph k4 = generate_ba(4, 3, 7);
  CHECK(k4.edge_count() == 6);
  for (NodeId v = 0; v < 4; ++v) CHECK(k4.degree(v) == 3);

  // same parameters, same seed: identical adjacency
  const Graph a = generate_ba(30, 2, 42);
  const Graph b = generate_ba(30, 2, 42);
  CHECK(a.adj == b.adj);
  const Graph c = generate_ba(30, 2, 43);
  CHECK(a.adj != c.adj);

  CHECK_THROWS_AS(generate_ba(3, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(generate_ba(2, 2, 1), std::invalid_argument);
}

TEST_CASE("attachment favors high degree") {
  // Hubs must emerge: the max degree should clearly exceed m, and early
  // nodes should on average out-degree late ones.
  const Graph g = generate_ba(200, 2, 11);
  std::size_t max_degree = 0;
  for (NodeId v = 0; v < 200; ++v) max_degree = std::max(max_degree, g.degree(v));
  CHECK(max_degree >= 12);

  double early = 0, late = 0;
  for (NodeId v = 0; v < 20; ++v) early += static_cast<double>(g.degree(v));
  for (NodeId v = 180; v < 200; ++v) late += static_cast<double>(g.degree(v));
  CHECK(early > 2 * late);
}

TEST_CASE("role assignment: one origin among the low-degree nodes") {
  Graph g = generate_ba(50, 2, 3);
  assign_roles(g, 9);

  std::size_t origins = 0;
  for (NodeId v = 0; v < 50; ++v)
    if (g.roles[v] == NodeRole::Origin) ++origins;
  CHECK(origins == 1);
  CHECK(g.origin() < 50);
  CHECK_FALSE(g.access_nodes().empty());

  // eligibility: degree no greater than the median degree
  std::vector<std::size_t> degrees;
  for (NodeId v = 0; v < 50; ++v) degrees.push_back(g.degree(v));
  std::vector<std::size_t> sorted = degrees;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t median = sorted[(sorted.size() - 1) / 2];
  for (NodeId v : g.access_nodes()) CHECK(g.degree(v) <= median);
  CHECK(g.degree(g.origin()) <= median);
  // the origin hosts the server, not receivers
  const std::vector<NodeId> access = g.access_nodes();
  CHECK(std::find(access.begin(), access.end(), g.origin()) == access.end());

  // explicit override
  assign_roles(g, 5, {1, 2});
  CHECK(g.origin() == 5);
  CHECK(g.access_nodes() == std::vector<NodeId>{1, 2});
  CHECK_THROWS_AS(assign_roles(g, 5, {5}), std::invalid_argument);
}

TEST_CASE("routing: shortest paths with smallest-id tie breaks") {
  //   0 - 1
  //   |   |
  //   2 - 3 - 4
  Graph g = graph_from_edges(5, {{0, 1}, {0, 2}, {1, 3}, {2, 3}, {3, 4}});
  const RoutingTable rt = RoutingTable::build(g);

  CHECK(rt.distance(0, 4) == 3);
  CHECK(rt.distance(4, 0) == 3);
  CHECK(rt.distance(2, 2) == 0);
  CHECK(rt.next_hop(2, 2) == 2);

  // 0 -> 3 has two equal routes (via 1 or 2); the smaller first hop wins
  CHECK(rt.next_hop(0, 3) == 1);
  CHECK(rt.path(0, 3) == std::vector<NodeId>{0, 1, 3});
  CHECK(rt.path(0, 4) == std::vector<NodeId>{0, 1, 3, 4});
  CHECK(rt.path(4, 0) == std::vector<NodeId>{4, 3, 1, 0});

  CHECK_THROWS_AS(RoutingTable::build(graph_from_edges(2, {})), std::runtime_error);
}

TEST_CASE("routing: parallel equals serial exactly") {
  for (std::uint64_t seed : {1, 2, 3}) {
    const Graph g = generate_ba(60, 2, seed);
    CHECK(RoutingTable::build(g) == RoutingTable::build_serial(g));
  }
}

TEST_CASE("betweenness: hand-computed scores") {
  // path: only the middle vertex carries pairs (2 ordered)
  const Graph path3 = graph_from_edges(3, {{0, 1}, {1, 2}});
  CHECK(betweenness_scores(path3) == std::vector<double>{0, 2, 0});

  // path of five: inner scores by pair counting
  const Graph path5 = graph_from_edges(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
  CHECK(betweenness_scores(path5) == std::vector<double>{0, 6, 8, 6, 0});

  // star: all 3*2 leaf pairs cross the hub
  const Graph star = graph_from_edges(4, {{0, 1}, {0, 2}, {0, 3}});
  CHECK(betweenness_scores(star) == std::vector<double>{6, 0, 0, 0});

  // complete graph: every pair is adjacent, nobody carries anything
  const Graph k4 = generate_ba(4, 3, 1);
  CHECK(betweenness_scores(k4) == std::vector<double>{0, 0, 0, 0});

  // square: two equal paths split the dependency half-and-half
  const Graph square = graph_from_edges(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
  CHECK(betweenness_scores(square) == std::vector<double>{1, 1, 1, 1});
}

TEST_CASE("betweenness: parallel equals serial bitwise") {
  for (std::uint64_t seed : {1, 2, 3, 4}) {
    const Graph g = generate_ba(80, 2, seed);
    const std::vector<double> par = betweenness_scores(g);
    const std::vector<double> ser = betweenness_scores_serial(g);
    REQUIRE(par.size() == ser.size());
    for (std::size_t i = 0; i < par.size(); ++i) CHECK(par[i] == ser[i]);
  }
}

TEST_CASE("placement: caching sets per policy") {
  //  receiver side: 0 (access), middle 1-2 (core), origin 3
  Graph g = graph_from_edges(4, {{0, 1}, {1, 2}, {2, 3}});
  assign_roles(g, 3, {0});
  const std::vector<double> scores = betweenness_scores(g);
  const std::vector<NodeId> path = {0, 1, 2, 3};

  // universal: every on-path router caches; the origin never does
  CHECK(caching_nodes_for(PlacementPolicy::Universal, path, g, scores) ==
        std::vector<NodeId>{0, 1, 2});
  // edge: only access-role path nodes
  CHECK(caching_nodes_for(PlacementPolicy::Edge, path, g, scores) == std::vector<NodeId>{0});
  // betweenness: the path maximum (ties all kept) — inner nodes carry most
  const std::vector<NodeId> bc = caching_nodes_for(PlacementPolicy::Betweenness, path, g, scores);
  const double best = std::max({scores[0], scores[1], scores[2]});
  for (NodeId v : bc) CHECK(scores[v] == best);
  CHECK_FALSE(bc.empty());

  CHECK_THROWS_AS(caching_nodes_for(PlacementPolicy::Universal, {}, g, scores),
                  std::invalid_argument);
}

TEST_CASE("edge-list round trip preserves structure and roles") {
  Graph g = generate_ba(25, 2, 5);
  assign_roles(g, 17);

  std::ostringstream out;
  save_edge_list(g, out);
  std::istringstream in(out.str());
  const Graph back = load_edge_list(in);

  CHECK(back.adj == g.adj);
  CHECK(back.origin() == g.origin());
  CHECK(back.access_nodes() == g.access_nodes());

  // rejects disconnected and duplicate-origin inputs
  std::istringstream disconnected("0 1\n2 3\n");
  CHECK_THROWS_AS(load_edge_list(disconnected), std::runtime_error);
  std::istringstream two_origins("0 1\norigin 0\norigin 1\n");
  CHECK_THROWS_AS(load_edge_list(two_origins), std::runtime_error);
  std::istringstream empty("# nothing\n");
  CHECK_THROWS_AS(load_edge_list(empty), std::runtime_error);

  // comments and a role section parse
  std::istringstream annotated("# demo\n0 1\n1 2\norigin 2\naccess 0\n");
  const Graph line = load_edge_list(annotated);
  CHECK(line.node_count() == 3);
  CHECK(line.origin() == 2);
  CHECK(line.access_nodes() == std::vector<NodeId>{0});
}

}  // TEST_SUITE
