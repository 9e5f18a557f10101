#include "opcsim/placement.hpp"

#include <stdexcept>

namespace opcsim {

PlacementPolicy placement_from_string(const std::string& name) {
  if (name == "universal") return PlacementPolicy::Universal;
  if (name == "edge") return PlacementPolicy::Edge;
  if (name == "betweenness") return PlacementPolicy::Betweenness;
  throw std::invalid_argument("unknown placement policy: " + name);
}

std::vector<NodeId> caching_nodes_for(PlacementPolicy policy, const std::vector<NodeId>& path,
                                      const Graph& g, const std::vector<double>& scores) {
  if (path.empty()) throw std::invalid_argument("placement needs a non-empty path");

  std::vector<NodeId> candidates;
  for (NodeId v : path)
    if (g.roles[v] != NodeRole::Origin) candidates.push_back(v);

  switch (policy) {
    case PlacementPolicy::Universal:
      return candidates;
    case PlacementPolicy::Edge: {
      std::vector<NodeId> out;
      for (NodeId v : candidates)
        if (g.roles[v] == NodeRole::Access) out.push_back(v);
      return out;
    }
    case PlacementPolicy::Betweenness:
    default: {
      if (scores.size() != g.node_count())
        throw std::invalid_argument("betweenness placement needs one score per node");
      double best = -1.0;
      for (NodeId v : candidates)
        if (scores[v] > best) best = scores[v];
      std::vector<NodeId> out;
      for (NodeId v : candidates)
        if (scores[v] == best) out.push_back(v);  // ties all store
      return out;
    }
  }
}

}  // namespace opcsim
