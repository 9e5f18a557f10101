#include "opcsim/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "opcsim/rng.hpp"

namespace opcsim {

std::size_t Graph::edge_count() const {
  std::size_t deg_sum = 0;
  for (const auto& nbrs : adj) deg_sum += nbrs.size();
  return deg_sum / 2;
}

void Graph::add_edge(NodeId u, NodeId v) {
  if (u == v) throw std::invalid_argument("self loop");
  if (u >= adj.size() || v >= adj.size()) throw std::invalid_argument("edge endpoint out of range");
  if (has_edge(u, v)) throw std::invalid_argument("duplicate edge");
  adj[u].push_back(v);
  adj[v].push_back(u);
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  const auto& nbrs = adj[u];
  return std::find(nbrs.begin(), nbrs.end(), v) != nbrs.end();
}

void Graph::sort_adjacency() {
  for (auto& nbrs : adj) std::sort(nbrs.begin(), nbrs.end());
}

bool Graph::connected() const {
  if (adj.empty()) return true;
  std::vector<std::uint8_t> visited(adj.size(), 0);
  std::queue<NodeId> q;
  q.push(0);
  visited[0] = 1;
  std::size_t reached = 1;
  while (!q.empty()) {
    const NodeId u = q.front();
    q.pop();
    for (NodeId v : adj[u]) {
      if (!visited[v]) {
        visited[v] = 1;
        ++reached;
        q.push(v);
      }
    }
  }
  return reached == adj.size();
}

NodeId Graph::origin() const {
  NodeId found = kNoNode;
  for (NodeId v = 0; v < roles.size(); ++v) {
    if (roles[v] == NodeRole::Origin) {
      if (found != kNoNode) throw std::runtime_error("graph has more than one origin");
      found = v;
    }
  }
  if (found == kNoNode) throw std::runtime_error("graph has no origin");
  return found;
}

std::vector<NodeId> Graph::access_nodes() const {
  std::vector<NodeId> out;
  for (NodeId v = 0; v < roles.size(); ++v)
    if (roles[v] == NodeRole::Access) out.push_back(v);
  return out;
}

Graph make_graph(std::size_t n) {
  Graph g;
  g.adj.resize(n);
  g.roles.assign(n, NodeRole::Core);
  return g;
}

Graph generate_ba(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (m < 1) throw std::invalid_argument("attachment degree must be at least 1");
  if (n <= m) throw std::invalid_argument("node count must exceed attachment degree");

  Graph g = make_graph(n);
  std::vector<std::size_t> degree(n, 0);
  auto connect = [&](NodeId u, NodeId v) {
    g.adj[u].push_back(v);
    g.adj[v].push_back(u);
    ++degree[u];
    ++degree[v];
  };

  for (NodeId u = 0; u + 1 <= m; ++u)
    for (NodeId v = u + 1; v <= m; ++v) connect(u, v);

  Rng rng(seed);
  std::vector<NodeId> picks;
  for (NodeId v = static_cast<NodeId>(m + 1); v < n; ++v) {
    // Degree snapshot at arrival: edges are applied after all m draws.
    std::size_t total_degree = 0;
    for (NodeId u = 0; u < v; ++u) total_degree += degree[u];
    picks.clear();
    while (picks.size() < m) {
      std::uint64_t r = uniform_below(rng, total_degree);
      NodeId chosen = kNoNode;
      for (NodeId u = 0; u < v; ++u) {
        if (r < degree[u]) {
          chosen = u;
          break;
        }
        r -= degree[u];
      }
      if (std::find(picks.begin(), picks.end(), chosen) != picks.end()) continue;
      picks.push_back(chosen);
    }
    for (NodeId u : picks) connect(v, u);
  }

  g.sort_adjacency();
  return g;
}

void assign_roles(Graph& g, std::uint64_t seed) {
  const std::size_t n = g.node_count();
  if (n < 2) throw std::invalid_argument("role assignment needs at least two nodes");

  std::vector<std::size_t> degrees(n);
  for (NodeId v = 0; v < n; ++v) degrees[v] = g.degree(v);
  std::vector<std::size_t> sorted = degrees;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t median = sorted[(n - 1) / 2];

  std::vector<NodeId> eligible;
  for (NodeId v = 0; v < n; ++v)
    if (degrees[v] <= median) eligible.push_back(v);
  if (eligible.size() < 2) {
    std::vector<NodeId> by_degree(n);
    for (NodeId v = 0; v < n; ++v) by_degree[v] = v;
    std::sort(by_degree.begin(), by_degree.end(),
              [&](NodeId a, NodeId b) { return degrees[a] != degrees[b] ? degrees[a] < degrees[b] : a < b; });
    eligible.assign(by_degree.begin(), by_degree.begin() + 2);
  }

  Rng rng(seed);
  const NodeId origin = eligible[uniform_below(rng, eligible.size())];
  g.roles.assign(n, NodeRole::Core);
  for (NodeId v : eligible) g.roles[v] = NodeRole::Access;
  g.roles[origin] = NodeRole::Origin;
}

void assign_roles(Graph& g, NodeId origin, const std::vector<NodeId>& access) {
  const std::size_t n = g.node_count();
  if (origin >= n) throw std::invalid_argument("origin node out of range");
  g.roles.assign(n, NodeRole::Core);
  for (NodeId v : access) {
    if (v >= n) throw std::invalid_argument("access node out of range");
    if (v == origin) throw std::invalid_argument("origin cannot also be an access node");
    g.roles[v] = NodeRole::Access;
  }
  g.roles[origin] = NodeRole::Origin;
}

Graph load_edge_list(std::istream& in) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  NodeId max_node = 0;
  bool any = false;
  NodeId origin = kNoNode;
  std::vector<NodeId> access;
  bool roles_seen = false;

  std::string line;
  while (std::getline(in, line)) {
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;

    if (first == "origin") {
      std::uint64_t v;
      if (!(ls >> v)) throw std::runtime_error("edge list: malformed origin line");
      if (origin != kNoNode) throw std::runtime_error("edge list: more than one origin");
      origin = static_cast<NodeId>(v);
      roles_seen = true;
      max_node = std::max(max_node, origin);
      any = true;
      continue;
    }
    if (first == "access") {
      std::uint64_t v;
      while (ls >> v) {
        access.push_back(static_cast<NodeId>(v));
        max_node = std::max(max_node, access.back());
      }
      roles_seen = true;
      any = true;
      continue;
    }

    std::uint64_t u, v;
    std::istringstream es(line);
    if (!(es >> u >> v)) throw std::runtime_error("edge list: malformed edge line: " + line);
    if (u == v) throw std::runtime_error("edge list: self loop on node " + std::to_string(u));
    edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
    max_node = std::max({max_node, edges.back().first, edges.back().second});
    any = true;
  }

  if (!any) throw std::runtime_error("edge list: empty input");

  Graph g = make_graph(static_cast<std::size_t>(max_node) + 1);
  for (auto [u, v] : edges) {
    if (!g.has_edge(u, v)) g.add_edge(u, v);
  }
  g.sort_adjacency();

  if (!g.connected()) throw std::runtime_error("edge list: graph is not connected");
  if (roles_seen) {
    if (origin == kNoNode) throw std::runtime_error("edge list: role section lacks an origin");
    assign_roles(g, origin, access);
  }
  return g;
}

Graph load_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open topology file: " + path);
  return load_edge_list(in);
}

void save_edge_list(const Graph& g, std::ostream& out) {
  out << "# nodes " << g.node_count() << " edges " << g.edge_count() << "\n";
  for (NodeId u = 0; u < g.node_count(); ++u)
    for (NodeId v : g.adj[u])
      if (u < v) out << u << " " << v << "\n";

  bool have_roles = false;
  for (NodeRole r : g.roles)
    if (r != NodeRole::Core) have_roles = true;
  if (!have_roles) return;

  out << "origin " << g.origin() << "\n";
  const std::vector<NodeId> access = g.access_nodes();
  if (!access.empty()) {
    out << "access";
    for (NodeId v : access) out << " " << v;
    out << "\n";
  }
}

void save_edge_list_file(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write topology file: " + path);
  save_edge_list(g, out);
}

}  // namespace opcsim
