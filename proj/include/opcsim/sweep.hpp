#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "opcsim/simulator.hpp"

namespace opcsim {

/// Axes and shared settings for a comparison sweep. Every (placement,
/// fraction, ratio, seed) pairing runs both schemes on identical topology
/// and traffic; the chunk-level scheme pins its slot ratio to 1:1, so its
/// runs are shared across the ratio axis.
struct SweepSpec {
  std::size_t nodes = 20;
  std::size_t attach_m = 2;
  std::vector<std::uint64_t> topology_seeds = {1, 2, 3};
  double workload_scale = 50.0;
  std::uint64_t workload_seed = 7;
  std::uint32_t receivers_per_access = 25;
  std::uint32_t requests_per_receiver = 30;
  double link_delay_ms = 5.0;
  double receiver_stagger_ms = 5.0;
  AllocatorMode allocator = AllocatorMode::DynamicLinked;
  AdmitPosition admit = AdmitPosition::LruHead;
  bool lookup_all_capable = true;
  std::uint32_t mss_bytes = kDefaultMssBytes;
  std::uint64_t snapshot_every_events = 0;

  std::vector<double> fractions = {0.0001, 0.001, 0.01};
  std::vector<double> ratios = {11.0};
  std::vector<PlacementPolicy> placements = {PlacementPolicy::Universal, PlacementPolicy::Edge,
                                             PlacementPolicy::Betweenness};
  std::vector<Scheme> schemes = {Scheme::Lru, Scheme::Opc};
};

struct RunKey {
  PlacementPolicy placement = PlacementPolicy::Universal;
  Scheme scheme = Scheme::Opc;
  double fraction = 0.0;
  double ratio = 1.0;  // effective: always 1 for the chunk-level scheme
  std::uint64_t topo_seed = 0;
};

std::string run_id(const RunKey& key);

struct RunRow {
  RunKey key;
  std::uint64_t l1_slots = 0;
  std::uint64_t l2_slots = 0;
  std::uint64_t catalog_chunks = 0;
  std::uint64_t network_load = 0;
  std::uint64_t network_load_nocache = 0;
  std::uint64_t server_load = 0;
  std::uint64_t cache_requests = 0;
  std::uint64_t cache_hits = 0;
  double hit_ratio = 0.0;
  double completion_ms_mean = 0.0;
  double completion_ms_nocache_mean = 0.0;
  double propagation_ms_total = 0.0;
  double memory_ns_total = 0.0;
  std::uint64_t dram_insert_evict = 0;
  std::uint64_t dram_total = 0;
};

/// Seed-averaged scheme comparison for one (placement, fraction, ratio)
/// cell. Gains are percentages where bigger is better for the object-level
/// scheme and 100 means parity. Load and completion gains compare the
/// *reduction* each scheme achieves against the cache-free run of the same
/// traffic: 100 * (nocache - opc) / (nocache - lru). A raw load ratio would
/// sit at ~100% whenever hit ratios are a few percent, hiding a 3x
/// difference in absorbed traffic; the savings ratio is what the absolute
/// loads actually distinguish. Origin-load savings are the hits a cache
/// absorbs, so that gain is the hit-count ratio. The hit-ratio gain divides
/// opc by lru directly, and the slow-memory insert/evict gain divides lru
/// by opc (fewer accesses is better). A sweep with a single scheme compares
/// it to itself (100%).
struct GainRow {
  PlacementPolicy placement = PlacementPolicy::Universal;
  double fraction = 0.0;
  double ratio = 1.0;
  std::size_t seeds = 0;
  double lru_network_load = 0, opc_network_load = 0, network_load_gain_pct = 0;
  double lru_server_load = 0, opc_server_load = 0, server_load_gain_pct = 0;
  double lru_hit_ratio = 0, opc_hit_ratio = 0, hit_ratio_gain_pct = 0;
  double lru_completion_ms = 0, opc_completion_ms = 0, completion_gain_pct = 0;
  double lru_dram_insert_evict = 0, opc_dram_insert_evict = 0, dram_insert_evict_gain_pct = 0;
};

struct SweepResult {
  std::vector<RunRow> rows;
  std::vector<GainRow> gains;

  std::string rows_csv() const;
  std::string gains_csv() const;
};

RunRow run_row_from_report(const RunKey& key, const MetricsReport& report);
std::vector<GainRow> compute_gains(const std::vector<RunRow>& rows);

/// The full simulator configuration of one sweep cell, reproducible in
/// isolation (used by both the sweep runner and the run-level CLI).
SimConfig sweep_run_config(const SweepSpec& spec, const RunKey& key);

/// Runs every unique cell, optionally on a worker pool, and reports rows in
/// a fixed order regardless of thread count. `on_run` (if given) receives
/// every finished run under a lock, in completion order.
SweepResult run_sweep(const SweepSpec& spec, int threads = 0,
                      const std::function<void(const RunKey&, const MetricsReport&)>& on_run = {});

}  // namespace opcsim
