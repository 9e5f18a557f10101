#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "opcsim/graph.hpp"

namespace opcsim {

/// Which on-path routers store a passing chunk.
/// Universal: every router on the path. Edge: only access routers.
/// Betweenness: only the highest-scoring router(s) on the path.
/// The origin endpoint never stores.
enum class PlacementPolicy : std::uint8_t { Universal, Edge, Betweenness };

inline const char* to_string(PlacementPolicy p) {
  switch (p) {
    case PlacementPolicy::Universal: return "universal";
    case PlacementPolicy::Edge: return "edge";
    default: return "betweenness";
  }
}

PlacementPolicy placement_from_string(const std::string& name);

/// Storing nodes for one delivery path, in path order. `path` runs from the
/// requesting side to the responder. `scores` (node-indexed) is only
/// consulted by the Betweenness policy. An empty path is an error.
std::vector<NodeId> caching_nodes_for(PlacementPolicy policy, const std::vector<NodeId>& path,
                                      const Graph& g, const std::vector<double>& scores);

}  // namespace opcsim
