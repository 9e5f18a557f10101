#pragma once

#include <cstdint>
#include <vector>

#include "opcsim/graph.hpp"

namespace opcsim {

/// All-pairs shortest-path next hops, built from one BFS per destination.
/// Equal-length choices are broken toward the smallest node id at every
/// step, so any (from, to) pair has exactly one path.
class RoutingTable {
 public:
  static RoutingTable build(const Graph& g);         // BFS per destination, OpenMP
  static RoutingTable build_serial(const Graph& g);  // reference implementation

  std::uint32_t distance(NodeId from, NodeId to) const { return dist_[index(from, to)]; }
  NodeId next_hop(NodeId from, NodeId to) const { return from == to ? from : next_[index(from, to)]; }

  /// Inclusive node sequence from -> to.
  std::vector<NodeId> path(NodeId from, NodeId to) const;

  std::size_t node_count() const { return n_; }

  friend bool operator==(const RoutingTable& a, const RoutingTable& b) {
    return a.n_ == b.n_ && a.dist_ == b.dist_ && a.next_ == b.next_;
  }

 private:
  std::size_t index(NodeId from, NodeId to) const {
    return static_cast<std::size_t>(from) * n_ + to;
  }
  static void build_destination(const Graph& g, NodeId dest, std::uint32_t* dist_col,
                                NodeId* next_col);
  static RoutingTable build_impl(const Graph& g, bool parallel);

  std::size_t n_ = 0;
  std::vector<std::uint32_t> dist_;
  std::vector<NodeId> next_;
};

/// Shortest-path betweenness over ordered node pairs, unnormalized:
/// score(v) = sum over s != t, v distinct from both, of the fraction of
/// shortest s-t paths through v. Parallel and serial variants accumulate
/// per-source contributions in identical order, so their outputs are
/// bitwise equal.
std::vector<double> betweenness_scores(const Graph& g);
std::vector<double> betweenness_scores_serial(const Graph& g);

namespace detail {
/// One source's contribution row (dependency accumulation), row[s] == 0.
void brandes_row(const Graph& g, NodeId source, double* row);
}  // namespace detail

}  // namespace opcsim
