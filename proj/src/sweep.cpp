#include "opcsim/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <stdexcept>
#include <tuple>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "opcsim/graph_algorithms.hpp"

namespace opcsim {

namespace {

std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t trace_seed_for(const SweepSpec& spec, std::uint64_t topo_seed) {
  return spec.workload_seed * 1000003ull + topo_seed;
}

struct SeedInputs {
  Graph graph;
  Trace trace;
};

}  // namespace

std::string run_id(const RunKey& key) {
  return std::string(to_string(key.placement)) + "_" + to_string(key.scheme) + "_f" +
         fmt_g(key.fraction) + "_r" + fmt_g(key.ratio) + "_s" + std::to_string(key.topo_seed);
}

SimConfig sweep_run_config(const SweepSpec& spec, const RunKey& key) {
  SimConfig cfg;
  cfg.graph = generate_ba(spec.nodes, spec.attach_m, key.topo_seed);
  assign_roles(cfg.graph, key.topo_seed + 1);
  cfg.placement = key.placement;
  cfg.scheme = key.scheme;
  cfg.allocator = spec.allocator;
  cfg.admit = spec.admit;
  cfg.lookup_all_capable = spec.lookup_all_capable;
  cfg.sizing.mode = CacheSizing::Mode::Fraction;
  cfg.sizing.fraction = key.fraction;
  cfg.sizing.ratio = key.scheme == Scheme::Lru ? 1.0 : key.ratio;
  cfg.sizing.mss_bytes = spec.mss_bytes;
  cfg.receivers_per_access = spec.receivers_per_access;
  cfg.link_delay_ms = spec.link_delay_ms;
  cfg.receiver_stagger_ms = spec.receiver_stagger_ms;
  cfg.snapshot_every_events = spec.snapshot_every_events;

  const std::vector<TrafficClassParams> classes = table_defaults(spec.workload_scale);
  cfg.catalog = generate_catalog(classes, spec.workload_seed);
  const std::uint32_t receivers =
      static_cast<std::uint32_t>(cfg.graph.access_nodes().size()) * spec.receivers_per_access;
  cfg.trace = generate_requests(cfg.catalog, classes, receivers, spec.requests_per_receiver,
                                trace_seed_for(spec, key.topo_seed));
  return cfg;
}

RunRow run_row_from_report(const RunKey& key, const MetricsReport& report) {
  RunRow row;
  row.key = key;
  row.l1_slots = report.l1_slots;
  row.l2_slots = report.l2_slots;
  row.network_load = report.network_load;
  row.network_load_nocache = report.network_load_nocache;
  row.server_load = report.server_load;
  row.cache_requests = report.cache_requests;
  row.cache_hits = report.cache_hits;
  row.hit_ratio = report.hit_ratio;
  row.completion_ms_mean = report.completion_ms_mean;
  row.completion_ms_nocache_mean = report.completion_ms_nocache_mean;
  row.propagation_ms_total = report.propagation_ms_total;
  row.memory_ns_total = report.memory_ns_total;
  row.dram_insert_evict = report.dram_insert_evict();
  row.dram_total = report.dram_total();
  return row;
}

SweepResult run_sweep(const SweepSpec& spec, int threads,
                      const std::function<void(const RunKey&, const MetricsReport&)>& on_run) {
  if (spec.fractions.empty() || spec.placements.empty() || spec.schemes.empty() ||
      spec.topology_seeds.empty())
    throw std::invalid_argument("sweep needs at least one value on every axis");
  if (spec.ratios.empty()) throw std::invalid_argument("sweep needs at least one slot ratio");

  // Shared per-seed inputs, built once: the same topology and trace feed
  // every cell of a seed, and both schemes of a pairing see identical
  // traffic by construction.
  const std::vector<TrafficClassParams> classes = table_defaults(spec.workload_scale);
  const Catalog catalog = generate_catalog(classes, spec.workload_seed);
  std::map<std::uint64_t, SeedInputs> per_seed;
  for (std::uint64_t seed : spec.topology_seeds) {
    if (per_seed.count(seed)) continue;
    SeedInputs inputs;
    inputs.graph = generate_ba(spec.nodes, spec.attach_m, seed);
    assign_roles(inputs.graph, seed + 1);
    const std::uint32_t receivers =
        static_cast<std::uint32_t>(inputs.graph.access_nodes().size()) * spec.receivers_per_access;
    inputs.trace = generate_requests(catalog, classes, receivers, spec.requests_per_receiver,
                                     trace_seed_for(spec, seed));
    per_seed.emplace(seed, std::move(inputs));
  }

  // Unique cells in fixed enumeration order; the chunk-level scheme
  // collapses the ratio axis.
  std::vector<RunKey> keys;
  std::map<std::tuple<int, int, double, double, std::uint64_t>, bool> seen;
  for (PlacementPolicy placement : spec.placements) {
    for (Scheme scheme : spec.schemes) {
      for (double fraction : spec.fractions) {
        for (double ratio : spec.ratios) {
          RunKey key;
          key.placement = placement;
          key.scheme = scheme;
          key.fraction = fraction;
          key.ratio = scheme == Scheme::Lru ? 1.0 : ratio;
          for (std::uint64_t seed : spec.topology_seeds) {
            key.topo_seed = seed;
            const auto dedupe = std::make_tuple(static_cast<int>(placement), static_cast<int>(scheme),
                                                fraction, key.ratio, seed);
            if (seen.emplace(dedupe, true).second) keys.push_back(key);
          }
        }
      }
    }
  }

  std::vector<RunRow> rows(keys.size());
  std::exception_ptr failure = nullptr;

#ifdef _OPENMP
  const int worker_count = threads > 0 ? threads : omp_get_max_threads();
#else
  const int worker_count = 1;
  (void)threads;
#endif

#pragma omp parallel for schedule(dynamic) num_threads(worker_count)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(keys.size()); ++i) {
    try {
      const RunKey& key = keys[i];
      const SeedInputs& inputs = per_seed.at(key.topo_seed);
      SimConfig cfg;
      cfg.graph = inputs.graph;
      cfg.placement = key.placement;
      cfg.scheme = key.scheme;
      cfg.allocator = spec.allocator;
      cfg.admit = spec.admit;
      cfg.lookup_all_capable = spec.lookup_all_capable;
      cfg.sizing.mode = CacheSizing::Mode::Fraction;
      cfg.sizing.fraction = key.fraction;
      cfg.sizing.ratio = key.ratio;
      cfg.sizing.mss_bytes = spec.mss_bytes;
      cfg.catalog = catalog;
      cfg.trace = inputs.trace;
      cfg.receivers_per_access = spec.receivers_per_access;
      cfg.link_delay_ms = spec.link_delay_ms;
      cfg.receiver_stagger_ms = spec.receiver_stagger_ms;
      cfg.snapshot_every_events = spec.snapshot_every_events;

      MetricsReport report = run_simulation(cfg);
      report.labels = {{"placement", to_string(key.placement)},
                       {"scheme", to_string(key.scheme)},
                       {"fraction", fmt_g(key.fraction)},
                       {"ratio", fmt_g(key.ratio)},
                       {"topology_seed", std::to_string(key.topo_seed)},
                       {"catalog_chunks", std::to_string(catalog.total_chunks())}};
      RunRow row = run_row_from_report(key, report);
      row.catalog_chunks = catalog.total_chunks();
      rows[i] = row;
      if (on_run) {
#pragma omp critical(sweep_on_run)
        on_run(key, report);
      }
    } catch (...) {
#pragma omp critical(sweep_failure)
      if (!failure) failure = std::current_exception();
    }
  }

  if (failure) std::rethrow_exception(failure);

  SweepResult result;
  result.rows = std::move(rows);
  result.gains = compute_gains(result.rows);
  return result;
}

std::vector<GainRow> compute_gains(const std::vector<RunRow>& rows) {
  struct Mean {
    double network_load = 0, network_nocache = 0, server_load = 0, cache_hits = 0, hit_ratio = 0,
           completion = 0, completion_nocache = 0, dram_ie = 0;
    std::size_t count = 0;

    void add(const RunRow& r) {
      network_load += static_cast<double>(r.network_load);
      network_nocache += static_cast<double>(r.network_load_nocache);
      server_load += static_cast<double>(r.server_load);
      cache_hits += static_cast<double>(r.cache_hits);
      hit_ratio += r.hit_ratio;
      completion += r.completion_ms_mean;
      completion_nocache += r.completion_ms_nocache_mean;
      dram_ie += static_cast<double>(r.dram_insert_evict);
      ++count;
    }
    void finish() {
      if (count == 0) return;
      const double n = static_cast<double>(count);
      network_load /= n;
      network_nocache /= n;
      server_load /= n;
      cache_hits /= n;
      hit_ratio /= n;
      completion /= n;
      completion_nocache /= n;
      dram_ie /= n;
    }
  };

  // Cell key: placement + fraction + ratio. The chunk-level rows live at
  // ratio 1 and serve as the baseline for every ratio of the same fraction.
  using CellKey = std::tuple<int, double, double>;
  std::map<CellKey, Mean> opc_cells, lru_cells;
  for (const RunRow& r : rows) {
    const CellKey key{static_cast<int>(r.key.placement), r.key.fraction, r.key.ratio};
    if (r.key.scheme == Scheme::Opc)
      opc_cells[key].add(r);
    else
      lru_cells[key].add(r);
  }
  for (auto& [k, m] : opc_cells) m.finish();
  for (auto& [k, m] : lru_cells) m.finish();

  auto lru_baseline_for = [&](const CellKey& cell) -> const Mean* {
    const CellKey direct{std::get<0>(cell), std::get<1>(cell), 1.0};
    auto it = lru_cells.find(direct);
    if (it != lru_cells.end()) return &it->second;
    return nullptr;
  };

  // x over y as a percentage; 0/0 is parity, anything/0 is unbounded.
  auto pct_of = [](double x, double y) {
    if (y == 0.0) return x == 0.0 ? 100.0 : std::numeric_limits<double>::infinity();
    return x / y * 100.0;
  };

  std::vector<GainRow> gains;
  const auto& primary = opc_cells.empty() ? lru_cells : opc_cells;
  for (const auto& [cell, opc_mean] : primary) {
    const Mean* lru_mean = lru_cells.empty() ? &opc_mean : lru_baseline_for(cell);
    if (!lru_mean) continue;
    if (opc_cells.empty()) lru_mean = &opc_mean;  // single-scheme sweep: self-comparison

    GainRow g;
    g.placement = static_cast<PlacementPolicy>(std::get<0>(cell));
    g.fraction = std::get<1>(cell);
    g.ratio = std::get<2>(cell);
    g.seeds = opc_mean.count;
    g.lru_network_load = lru_mean->network_load;
    g.opc_network_load = opc_mean.network_load;
    g.network_load_gain_pct = pct_of(opc_mean.network_nocache - opc_mean.network_load,
                                     lru_mean->network_nocache - lru_mean->network_load);
    g.lru_server_load = lru_mean->server_load;
    g.opc_server_load = opc_mean.server_load;
    // Every hit is a chunk the origin did not serve, so hit counts are the
    // origin-load savings without needing a cache-free server counter.
    g.server_load_gain_pct = pct_of(opc_mean.cache_hits, lru_mean->cache_hits);
    g.lru_hit_ratio = lru_mean->hit_ratio;
    g.opc_hit_ratio = opc_mean.hit_ratio;
    g.hit_ratio_gain_pct = pct_of(opc_mean.hit_ratio, lru_mean->hit_ratio);
    g.lru_completion_ms = lru_mean->completion;
    g.opc_completion_ms = opc_mean.completion;
    g.completion_gain_pct = pct_of(opc_mean.completion_nocache - opc_mean.completion,
                                   lru_mean->completion_nocache - lru_mean->completion);
    g.lru_dram_insert_evict = lru_mean->dram_ie;
    g.opc_dram_insert_evict = opc_mean.dram_ie;
    g.dram_insert_evict_gain_pct = pct_of(lru_mean->dram_ie, opc_mean.dram_ie);
    gains.push_back(g);
  }
  return gains;
}

std::string SweepResult::rows_csv() const {
  std::string out =
      "placement,scheme,fraction,ratio,topo_seed,l1_slots,l2_slots,catalog_chunks,network_load,"
      "network_load_nocache,server_load,cache_requests,cache_hits,hit_ratio,completion_ms_mean,"
      "completion_ms_nocache_mean,propagation_ms_total,"
      "memory_ns_total,dram_insert_evict,dram_total\n";
  for (const RunRow& r : rows) {
    out += to_string(r.key.placement);
    out += ',';
    out += to_string(r.key.scheme);
    out += ',' + fmt_g(r.key.fraction);
    out += ',' + fmt_g(r.key.ratio);
    out += ',' + std::to_string(r.key.topo_seed);
    out += ',' + std::to_string(r.l1_slots);
    out += ',' + std::to_string(r.l2_slots);
    out += ',' + std::to_string(r.catalog_chunks);
    out += ',' + std::to_string(r.network_load);
    out += ',' + std::to_string(r.network_load_nocache);
    out += ',' + std::to_string(r.server_load);
    out += ',' + std::to_string(r.cache_requests);
    out += ',' + std::to_string(r.cache_hits);
    out += ',' + fmt_double(r.hit_ratio);
    out += ',' + fmt_double(r.completion_ms_mean);
    out += ',' + fmt_double(r.completion_ms_nocache_mean);
    out += ',' + fmt_double(r.propagation_ms_total);
    out += ',' + fmt_double(r.memory_ns_total);
    out += ',' + std::to_string(r.dram_insert_evict);
    out += ',' + std::to_string(r.dram_total);
    out += '\n';
  }
  return out;
}

std::string SweepResult::gains_csv() const {
  std::string out =
      "placement,fraction,ratio,seeds,lru_network_load,opc_network_load,"
      "network_load_reduction_gain_pct,lru_server_load,opc_server_load,"
      "server_load_reduction_gain_pct,lru_hit_ratio,opc_hit_ratio,"
      "hit_ratio_gain_pct_opc_over_lru,lru_completion_ms_mean,opc_completion_ms_mean,"
      "completion_reduction_gain_pct,lru_dram_insert_evict,opc_dram_insert_evict,"
      "dram_insert_evict_gain_pct_lru_over_opc\n";
  for (const GainRow& g : gains) {
    out += to_string(g.placement);
    out += ',' + fmt_g(g.fraction);
    out += ',' + fmt_g(g.ratio);
    out += ',' + std::to_string(g.seeds);
    for (double v : {g.lru_network_load, g.opc_network_load, g.network_load_gain_pct,
                     g.lru_server_load, g.opc_server_load, g.server_load_gain_pct, g.lru_hit_ratio,
                     g.opc_hit_ratio, g.hit_ratio_gain_pct, g.lru_completion_ms,
                     g.opc_completion_ms, g.completion_gain_pct, g.lru_dram_insert_evict,
                     g.opc_dram_insert_evict, g.dram_insert_evict_gain_pct})
      out += ',' + fmt_double(v);
    out += '\n';
  }
  return out;
}

}  // namespace opcsim
