#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace opcsim {

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = ~NodeId{0};

enum class NodeRole : std::uint8_t { Core, Access, Origin };

inline const char* to_string(NodeRole r) {
  switch (r) {
    case NodeRole::Core: return "core";
    case NodeRole::Access: return "access";
    default: return "origin";
  }
}

/// Undirected simple graph with per-node roles. Adjacency lists are kept
/// sorted ascending so every traversal is order-deterministic.
struct Graph {
  std::vector<std::vector<NodeId>> adj;
  std::vector<NodeRole> roles;

  std::size_t node_count() const { return adj.size(); }
  std::size_t edge_count() const;
  std::size_t degree(NodeId v) const { return adj[v].size(); }

  void add_edge(NodeId u, NodeId v);
  bool has_edge(NodeId u, NodeId v) const;
  void sort_adjacency();
  bool connected() const;

  /// The single origin node; throws if roles do not define exactly one.
  NodeId origin() const;
  std::vector<NodeId> access_nodes() const;  // ascending
};

Graph make_graph(std::size_t n);

/// Preferential-attachment topology: a (m+1)-clique seed, then each new node
/// attaches to m distinct existing nodes drawn proportionally to their
/// degree at arrival time. Edge count is (m+1)m/2 + (n-m-1)m.
Graph generate_ba(std::size_t n, std::size_t m, std::uint64_t seed);

/// Picks the origin and access set among low-degree nodes (degree at most
/// the median): leaves of the hierarchy host receivers, one of them hosts
/// the origin server instead. Hubs stay pure forwarders.
void assign_roles(Graph& g, std::uint64_t seed);
void assign_roles(Graph& g, NodeId origin, const std::vector<NodeId>& access);

/// Text form: "u v" edge lines, '#' comments, then an optional role section
/// ("origin N" / "access N N ..."). Loading validates connectivity and, when
/// roles are present, that exactly one origin exists.
Graph load_edge_list(std::istream& in);
Graph load_edge_list_file(const std::string& path);
void save_edge_list(const Graph& g, std::ostream& out);
void save_edge_list_file(const Graph& g, const std::string& path);

}  // namespace opcsim
