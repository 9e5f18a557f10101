#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "opcsim/simulator.hpp"
#include "opcsim/workload.hpp"

namespace opcsim {

/// Per-object behavior distilled from periodic cache state logs. One log is
/// one (snapshot, router) record; hit counters in the logs are cumulative,
/// so final totals come from each router's last snapshot.
struct ObjectBehavior {
  ObjectId object;
  std::uint64_t logs_present = 0;        // logs in which the object was cached
  double caching_frequency = 0.0;        // logs_present / log_count
  std::uint64_t stored_occurrences = 0;  // cached chunks summed over every log
  std::uint64_t hits = 0;                // final cumulative hits over all routers
  double caching_efficiency = 0.0;       // hits / stored_occurrences
  std::uint32_t size_chunks = 0;         // from the catalog when one is given
};

struct CdfPoint {
  std::uint32_t rank = 0;
  double fraction = 0.0;  // cumulative share of mass at ranks <= rank
};

struct BehavioralStats {
  std::uint64_t log_count = 0;
  std::vector<ObjectBehavior> per_object;   // sorted by object name
  std::vector<CdfPoint> hit_rank_cdf;       // hits by chunk rank
  std::vector<CdfPoint> stored_rank_cdf;    // stored-chunk log occurrences by rank
};

BehavioralStats behavioral_stats(const std::vector<CacheStateLog>& logs,
                                 const Catalog* catalog = nullptr);

/// "rank,fraction" CSV, one point per rank that carries mass.
std::string cdf_csv(const std::vector<CdfPoint>& cdf);

/// Per-object behavior table as CSV.
std::string objects_csv(const BehavioralStats& stats);

/// Rank ranges in the state-log text form ("1-7;9") as (lo, hi) pairs.
std::vector<std::pair<std::uint32_t, std::uint32_t>> parse_rank_ranges(const std::string& repr);

}  // namespace opcsim
