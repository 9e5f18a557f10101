#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "opcsim/graph.hpp"
#include "opcsim/memory_config.hpp"
#include "opcsim/opc_cache.hpp"
#include "opcsim/placement.hpp"
#include "opcsim/workload.hpp"

namespace opcsim {

/// How the per-router cache is sized. Fraction mode sizes the index as a
/// share of the catalog's chunk population (slot count = ratio * entries for
/// the object scheme, = entries for the chunk scheme; fraction 0 gives a
/// null cache). Bytes mode divides physical budgets by entry and MSS sizes.
struct CacheSizing {
  enum class Mode : std::uint8_t { Fraction, Bytes } mode = Mode::Fraction;
  double fraction = 0.001;
  double ratio = 11.0;
  std::uint64_t sram_bytes = 0;
  std::uint64_t dram_bytes = 0;
  std::uint32_t mss_bytes = kDefaultMssBytes;

  CacheCapacity resolve(Scheme scheme, std::uint64_t catalog_chunks) const;
};

struct SimConfig {
  Graph graph;
  PlacementPolicy placement = PlacementPolicy::Universal;
  Scheme scheme = Scheme::Opc;
  AllocatorMode allocator = AllocatorMode::DynamicLinked;
  AdmitPosition admit = AdmitPosition::LruHead;
  bool lookup_all_capable = true;  // non-storing cache-bearing nodes still answer lookups
  CacheSizing sizing;
  Catalog catalog;
  Trace trace;
  std::uint32_t receivers_per_access = 25;
  double link_delay_ms = 5.0;
  // Receiver r begins its stream at r * receiver_stagger_ms. Zero starts
  // everyone simultaneously, which phase-locks same-path receivers into
  // issuing identical requests in the same instant — a degenerate alignment
  // no asynchronous deployment exhibits.
  double receiver_stagger_ms = 5.0;
  std::uint64_t snapshot_every_events = 0;  // 0 = off
  double snapshot_every_ms = 0.0;           // 0 = off
  bool record_chunk_log = false;
};

struct RouterCost {
  NodeId node = kNoNode;
  std::uint64_t lookups = 0;
  std::uint64_t hits = 0;
  CostModel cost;
};

/// One object's row in a periodic cache state log.
struct RouterObjectLog {
  ObjectId object;
  bool present = false;
  std::string ranks;  // "1-7" for a prefix, "2-4;9" for explicit ranks, "-" absent
  std::uint64_t chunk_count = 0;
  std::vector<std::pair<std::uint32_t, std::uint64_t>> hits_by_rank;  // cumulative
  std::uint64_t hits_total = 0;
};

struct RouterLog {
  NodeId node = kNoNode;
  std::vector<RouterObjectLog> objects;  // sorted by object name
};

struct CacheStateLog {
  double time_ms = 0.0;
  std::uint64_t event_index = 0;
  std::vector<RouterLog> routers;  // sorted by node id
};

struct ChunkLogEntry {
  std::uint32_t receiver = 0;
  std::uint32_t object_index = 0;
  std::uint32_t rank = 0;
  std::uint32_t responder_hops = 0;  // hops from the receiver to whoever answered
  double issued_ms = 0.0;
  double delivered_ms = 0.0;
};

struct MetricsReport {
  // run identity echoed into the flat text form; filled by the caller
  std::vector<std::pair<std::string, std::string>> labels;

  std::uint64_t network_load = 0;   // request-leg hops (data legs mirror them)
  // What network_load would have been with no caches anywhere: every request
  // walks its full path to the origin. The cache-free server load needs no
  // counter of its own — it is chunks_delivered.
  std::uint64_t network_load_nocache = 0;
  std::uint64_t server_load = 0;    // chunks served by the origin
  std::uint64_t cache_requests = 0;
  std::uint64_t cache_hits = 0;
  double hit_ratio = 0.0;

  std::uint32_t receivers = 0;
  std::uint64_t requests_total = 0;  // object requests in the trace
  std::uint64_t chunks_delivered = 0;

  std::vector<double> completion_ms;  // per receiver, propagation + memory
  double completion_ms_mean = 0.0;
  double completion_ms_max = 0.0;
  double completion_ms_total = 0.0;
  double completion_ms_nocache_mean = 0.0;  // cache-free propagation baseline
  double propagation_ms_total = 0.0;
  double memory_ns_total = 0.0;

  std::uint64_t l1_slots = 0;
  std::uint64_t l2_slots = 0;

  std::vector<RouterCost> router_costs;  // sorted by node id
  std::vector<CacheStateLog> snapshots;
  std::vector<ChunkLogEntry> chunk_log;

  std::uint64_t sram_total() const;
  std::uint64_t dram_total() const;
  std::uint64_t dram_insert_evict() const;

  /// Flat "key = value" lines: labels first, then metrics, keys sorted.
  std::string to_text() const;
  /// Per-router counter table.
  std::string routers_csv() const;
  /// All periodic state logs; empty string when none were taken.
  std::string snapshots_csv() const;
};

/// Deterministic discrete-event run: receivers fetch their request streams
/// chunk by chunk (stop-and-wait), requests walk the single shortest path
/// toward the origin until a cache answers, data walks back inserting per
/// the placement policy. Identical configs give identical reports.
MetricsReport run_simulation(const SimConfig& config);

/// Round-trip helpers for the state-log CSV (the CDF reports read these).
std::vector<CacheStateLog> parse_snapshots_csv(std::istream& in);

}  // namespace opcsim
