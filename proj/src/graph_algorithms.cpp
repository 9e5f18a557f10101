#include "opcsim/graph_algorithms.hpp"

#include <limits>
#include <stdexcept>
#include <vector>

namespace opcsim {

namespace {
constexpr std::uint32_t kUnreached = std::numeric_limits<std::uint32_t>::max();
}

void RoutingTable::build_destination(const Graph& g, NodeId dest, std::uint32_t* dist_col,
                                     NodeId* next_col) {
  const std::size_t n = g.node_count();
  std::vector<std::uint32_t> dist(n, kUnreached);
  std::vector<NodeId> queue;
  queue.reserve(n);
  dist[dest] = 0;
  queue.push_back(dest);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId u = queue[head];
    for (NodeId v : g.adj[u]) {
      if (dist[v] == kUnreached) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }

  for (NodeId u = 0; u < n; ++u) {
    dist_col[u] = dist[u];
    if (u == dest || dist[u] == kUnreached) {
      next_col[u] = u == dest ? dest : kNoNode;
      continue;
    }
    NodeId hop = kNoNode;
    for (NodeId v : g.adj[u]) {  // adjacency sorted: first match is smallest id
      if (dist[v] + 1 == dist[u]) {
        hop = v;
        break;
      }
    }
    next_col[u] = hop;
  }
}

RoutingTable RoutingTable::build_impl(const Graph& g, bool parallel) {
  const std::size_t n = g.node_count();
  RoutingTable t;
  t.n_ = n;
  t.dist_.assign(n * n, kUnreached);
  t.next_.assign(n * n, kNoNode);

  std::vector<std::uint32_t> dist_cols(n * n);
  std::vector<NodeId> next_cols(n * n);

  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t d = 0; d < static_cast<std::int64_t>(n); ++d)
      build_destination(g, static_cast<NodeId>(d), &dist_cols[static_cast<std::size_t>(d) * n],
                        &next_cols[static_cast<std::size_t>(d) * n]);
  } else {
    for (NodeId d = 0; d < n; ++d)
      build_destination(g, d, &dist_cols[static_cast<std::size_t>(d) * n],
                        &next_cols[static_cast<std::size_t>(d) * n]);
  }

  for (NodeId d = 0; d < n; ++d) {
    for (NodeId u = 0; u < n; ++u) {
      const std::uint32_t dist = dist_cols[static_cast<std::size_t>(d) * n + u];
      if (dist == kUnreached)
        throw std::runtime_error("routing requires a connected graph (node " + std::to_string(u) +
                                 " cannot reach " + std::to_string(d) + ")");
      t.dist_[t.index(u, d)] = dist;
      t.next_[t.index(u, d)] = next_cols[static_cast<std::size_t>(d) * n + u];
    }
  }
  return t;
}

RoutingTable RoutingTable::build(const Graph& g) { return build_impl(g, true); }
RoutingTable RoutingTable::build_serial(const Graph& g) { return build_impl(g, false); }

std::vector<NodeId> RoutingTable::path(NodeId from, NodeId to) const {
  std::vector<NodeId> out;
  NodeId cur = from;
  out.push_back(cur);
  while (cur != to) {
    cur = next_hop(cur, to);
    out.push_back(cur);
    if (out.size() > n_) throw std::runtime_error("routing loop detected");
  }
  return out;
}

namespace detail {

void brandes_row(const Graph& g, NodeId source, double* row) {
  const std::size_t n = g.node_count();
  std::vector<std::uint32_t> dist(n, kUnreached);
  std::vector<double> sigma(n, 0.0);
  std::vector<double> delta(n, 0.0);
  std::vector<std::vector<NodeId>> preds(n);
  std::vector<NodeId> order;
  order.reserve(n);

  dist[source] = 0;
  sigma[source] = 1.0;
  order.push_back(source);
  for (std::size_t head = 0; head < order.size(); ++head) {
    const NodeId u = order[head];
    for (NodeId v : g.adj[u]) {
      if (dist[v] == kUnreached) {
        dist[v] = dist[u] + 1;
        order.push_back(v);
      }
      if (dist[v] == dist[u] + 1) {
        sigma[v] += sigma[u];
        preds[v].push_back(u);
      }
    }
  }

  for (std::size_t i = order.size(); i-- > 0;) {
    const NodeId w = order[i];
    for (NodeId p : preds[w]) delta[p] += sigma[p] / sigma[w] * (1.0 + delta[w]);
    row[w] = w == source ? 0.0 : delta[w];
  }
  for (std::size_t v = 0; v < n; ++v)
    if (dist[v] == kUnreached) row[v] = 0.0;
}

}  // namespace detail

namespace {

std::vector<double> betweenness_impl(const Graph& g, bool parallel) {
  const std::size_t n = g.node_count();
  std::vector<double> rows(n * n, 0.0);

  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t s = 0; s < static_cast<std::int64_t>(n); ++s)
      detail::brandes_row(g, static_cast<NodeId>(s), &rows[static_cast<std::size_t>(s) * n]);
  } else {
    for (NodeId s = 0; s < n; ++s)
      detail::brandes_row(g, s, &rows[static_cast<std::size_t>(s) * n]);
  }

  // Fixed source-order accumulation keeps the result independent of thread
  // count and identical between the serial and parallel variants.
  std::vector<double> scores(n, 0.0);
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t v = 0; v < n; ++v) scores[v] += rows[s * n + v];
  return scores;
}

}  // namespace

std::vector<double> betweenness_scores(const Graph& g) { return betweenness_impl(g, true); }
std::vector<double> betweenness_scores_serial(const Graph& g) { return betweenness_impl(g, false); }

}  // namespace opcsim
