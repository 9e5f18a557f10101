#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "opcsim/simulator.hpp"

using namespace opcsim;

TEST_SUITE_BEGIN("simulator");

namespace {

Graph graph_from_edges(std::size_t n, std::initializer_list<std::pair<NodeId, NodeId>> edges) {
  Graph g = make_graph(n);
  for (auto [u, v] : edges) g.add_edge(u, v);
  g.sort_adjacency();
  return g;
}

// Receiver at node 0, two hops to the origin at node 2, one two-chunk object
// requested twice. Small enough to trace by hand, rich enough to touch every
// counter.
SimConfig line_config(Scheme scheme) {
  SimConfig cfg;
  cfg.graph = graph_from_edges(3, {{0, 1}, {1, 2}});
  assign_roles(cfg.graph, 2, {0});
  cfg.catalog.add({make_object_id("pair"), TrafficClass::Other, 2});
  cfg.trace.per_receiver = {{0, 0}};
  cfg.scheme = scheme;
  cfg.sizing.mode = CacheSizing::Mode::Fraction;
  cfg.sizing.fraction = 1.0;
  cfg.sizing.ratio = 2.0;
  cfg.receivers_per_access = 1;
  cfg.link_delay_ms = 5.0;
  return cfg;
}

const RouterCost& cost_of(const MetricsReport& r, NodeId node) {
  for (const RouterCost& rc : r.router_costs)
    if (rc.node == node) return rc;
  FAIL("no router cost row for node ", node);
  return r.router_costs.front();
}

void check_same_logs(const std::vector<CacheStateLog>& a, const std::vector<CacheStateLog>& b) {
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].time_ms == b[i].time_ms);
    CHECK(a[i].event_index == b[i].event_index);
    REQUIRE(a[i].routers.size() == b[i].routers.size());
    for (std::size_t r = 0; r < a[i].routers.size(); ++r) {
      const RouterLog& ra = a[i].routers[r];
      const RouterLog& rb = b[i].routers[r];
      CHECK(ra.node == rb.node);
      REQUIRE(ra.objects.size() == rb.objects.size());
      for (std::size_t o = 0; o < ra.objects.size(); ++o) {
        CHECK(ra.objects[o].object.name == rb.objects[o].object.name);
        CHECK(ra.objects[o].present == rb.objects[o].present);
        CHECK(ra.objects[o].ranks == rb.objects[o].ranks);
        CHECK(ra.objects[o].chunk_count == rb.objects[o].chunk_count);
        CHECK(ra.objects[o].hits_by_rank == rb.objects[o].hits_by_rank);
        CHECK(ra.objects[o].hits_total == rb.objects[o].hits_total);
      }
    }
  }
}

}  // namespace

TEST_CASE("sizing resolves fraction and byte budgets") {
  CacheSizing s;
  s.mode = CacheSizing::Mode::Fraction;
  s.fraction = 0.001;
  s.ratio = 11.0;

  CacheCapacity opc = s.resolve(Scheme::Opc, 131280);
  CHECK(opc.l1_slots == 131);
  CHECK(opc.l2_slots == 1441);

  // The chunk scheme has no slot extension: one slot per index entry.
  CacheCapacity lru = s.resolve(Scheme::Lru, 131280);
  CHECK(lru.l1_slots == 131);
  CHECK(lru.l2_slots == 131);

  s.fraction = 0.0;
  CacheCapacity null = s.resolve(Scheme::Opc, 131280);
  CHECK(null.l1_slots == 0);
  CHECK(null.l2_slots == 0);

  s.fraction = -0.1;
  CHECK_THROWS_AS(s.resolve(Scheme::Opc, 100), std::invalid_argument);
  s.fraction = 0.5;
  s.ratio = 0.0;
  CHECK_THROWS_AS(s.resolve(Scheme::Opc, 100), std::invalid_argument);

  CacheSizing b;
  b.mode = CacheSizing::Mode::Bytes;
  b.sram_bytes = 27525120;      // 210 Mbit
  b.dram_bytes = 10737418240;   // 10 GiB
  b.mss_bytes = 1500;
  CacheCapacity opc_b = b.resolve(Scheme::Opc, 0);
  CHECK(opc_b.l1_slots == 655360);
  CHECK(opc_b.l2_slots == 7158278);
  CacheCapacity lru_b = b.resolve(Scheme::Lru, 0);
  CHECK(lru_b.l1_slots == 688128);
  CHECK(lru_b.l2_slots == 688128);
}

TEST_CASE("single receiver line fetch: every counter hand-checked") {
  const MetricsReport r = run_simulation(line_config(Scheme::Opc));

  CHECK(r.network_load == 8);
  CHECK(r.server_load == 2);
  CHECK(r.cache_requests == 6);
  CHECK(r.cache_hits == 2);
  CHECK(r.hit_ratio == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(r.chunks_delivered == 4);
  CHECK(r.requests_total == 2);
  CHECK(r.receivers == 1);
  CHECK(r.l1_slots == 2);
  CHECK(r.l2_slots == 4);

  CHECK(r.propagation_ms_total == 80.0);
  CHECK(r.network_load_nocache == 12);          // four chunks, full three-leg walk each
  CHECK(r.completion_ms_nocache_mean == 120.0);  // 2 * 5 ms * 12 legs
  CHECK(r.sram_total() == 10);
  CHECK(r.dram_total() == 7);
  CHECK(r.dram_insert_evict() == 4);
  CHECK(r.memory_ns_total == doctest::Approx(10 * 0.45 + 7 * 55.0).epsilon(1e-12));

  REQUIRE(r.completion_ms.size() == 1);
  CHECK(r.completion_ms[0] == doctest::Approx(80.0003895).epsilon(1e-12));
  CHECK(r.completion_ms_mean == doctest::Approx(80.0003895).epsilon(1e-12));
  CHECK(r.completion_ms_max == doctest::Approx(80.0003895).epsilon(1e-12));
  CHECK(r.completion_ms_total == doctest::Approx(80.0003895).epsilon(1e-12));

  REQUIRE(r.router_costs.size() == 2);
  const RouterCost& n0 = cost_of(r, 0);
  CHECK(n0.lookups == 4);
  CHECK(n0.hits == 2);
  CHECK(n0.cost.count(Tier::Sram, Cause::Insert) == 2);
  CHECK(n0.cost.count(Tier::Sram, Cause::Evict) == 0);
  CHECK(n0.cost.count(Tier::Sram, Cause::Hit) == 2);
  CHECK(n0.cost.count(Tier::Sram, Cause::MissLookup) == 2);
  CHECK(n0.cost.count(Tier::Dram, Cause::Insert) == 2);
  CHECK(n0.cost.count(Tier::Dram, Cause::Evict) == 0);
  // Hitting rank 1 of a two-chunk object costs the walk from the stored tail:
  // 1 + last - rank = 2 reads; rank 2 costs 1.
  CHECK(n0.cost.count(Tier::Dram, Cause::Hit) == 3);
  CHECK(n0.cost.count(Tier::Dram, Cause::MissLookup) == 0);

  const RouterCost& n1 = cost_of(r, 1);
  CHECK(n1.lookups == 2);
  CHECK(n1.hits == 0);
  CHECK(n1.cost.count(Tier::Sram, Cause::Insert) == 2);
  CHECK(n1.cost.count(Tier::Sram, Cause::MissLookup) == 2);
  CHECK(n1.cost.count(Tier::Dram, Cause::Insert) == 2);
  CHECK(n1.cost.count(Tier::Dram, Cause::Hit) == 0);

  CHECK(r.snapshots.empty());
  CHECK(r.chunk_log.empty());
}

TEST_CASE("chunk-level baseline on the same line") {
  const MetricsReport r = run_simulation(line_config(Scheme::Lru));

  // Chunk-for-chunk the walk matches the object scheme here; only the DRAM
  // hit charges differ (flat single reads) and the slot array is not extended.
  CHECK(r.l1_slots == 2);
  CHECK(r.l2_slots == 2);
  CHECK(r.network_load == 8);
  CHECK(r.server_load == 2);
  CHECK(r.cache_requests == 6);
  CHECK(r.cache_hits == 2);
  CHECK(r.propagation_ms_total == 80.0);
  CHECK(r.sram_total() == 10);
  CHECK(r.dram_total() == 6);
  CHECK(r.dram_insert_evict() == 4);
  CHECK(r.memory_ns_total == doctest::Approx(10 * 0.45 + 6 * 55.0).epsilon(1e-12));
  CHECK(r.completion_ms[0] == doctest::Approx(80.0003345).epsilon(1e-12));
}

TEST_CASE("fixed regions charge flat hit costs") {
  SimConfig cfg = line_config(Scheme::Opc);
  cfg.allocator = AllocatorMode::FixedContiguous;
  const MetricsReport r = run_simulation(cfg);

  CHECK(r.network_load == 8);
  CHECK(r.cache_hits == 2);
  CHECK(r.sram_total() == 10);
  // Region placement makes every rank directly addressable: both hits cost
  // one DRAM read instead of a walk.
  CHECK(r.dram_total() == 6);
  CHECK(cost_of(r, 0).cost.count(Tier::Dram, Cause::Hit) == 2);
  CHECK(r.completion_ms[0] == doctest::Approx(80.0003345).epsilon(1e-12));
}

TEST_CASE("edge placement caches only at the access router") {
  SimConfig cfg = line_config(Scheme::Opc);
  cfg.placement = PlacementPolicy::Edge;
  const MetricsReport r = run_simulation(cfg);

  REQUIRE(r.router_costs.size() == 1);
  CHECK(r.router_costs[0].node == 0);
  CHECK(r.network_load == 8);
  CHECK(r.server_load == 2);
  CHECK(r.cache_requests == 4);
  CHECK(r.cache_hits == 2);
  CHECK(r.hit_ratio == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r.sram_total() == 6);
  CHECK(r.dram_total() == 5);
  CHECK(r.memory_ns_total == doctest::Approx(6 * 0.45 + 5 * 55.0).epsilon(1e-12));
  CHECK(r.completion_ms[0] == doctest::Approx(80.0002777).epsilon(1e-12));
}

TEST_CASE("hub-only storing with and without all-capable lookups") {
  // Betweenness concentrates storage on the middle node; the access router
  // keeps an (always empty) cache.
  SimConfig cfg = line_config(Scheme::Opc);
  cfg.placement = PlacementPolicy::Betweenness;

  cfg.lookup_all_capable = true;
  const MetricsReport all = run_simulation(cfg);
  CHECK(all.network_load == 10);
  CHECK(all.server_load == 2);
  CHECK(all.cache_requests == 8);
  CHECK(all.cache_hits == 2);
  CHECK(all.hit_ratio == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(all.propagation_ms_total == 100.0);
  CHECK(cost_of(all, 0).lookups == 4);
  CHECK(cost_of(all, 0).hits == 0);
  CHECK(cost_of(all, 0).cost.count(Tier::Sram, Cause::Insert) == 0);
  CHECK(cost_of(all, 1).lookups == 4);
  CHECK(cost_of(all, 1).hits == 2);
  CHECK(all.memory_ns_total == doctest::Approx(10 * 0.45 + 5 * 55.0).epsilon(1e-12));
  CHECK(all.completion_ms[0] == doctest::Approx(100.0002795).epsilon(1e-12));

  cfg.lookup_all_capable = false;
  const MetricsReport only = run_simulation(cfg);
  CHECK(only.network_load == 10);
  CHECK(only.cache_requests == 4);
  CHECK(only.cache_hits == 2);
  CHECK(only.hit_ratio == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(only.propagation_ms_total == 100.0);
  CHECK(cost_of(only, 0).lookups == 0);
  CHECK(cost_of(only, 0).cost.total_ns() == 0.0);
  CHECK(cost_of(only, 1).lookups == 4);
  CHECK(only.memory_ns_total == doctest::Approx(6 * 0.45 + 5 * 55.0).epsilon(1e-12));
  CHECK(only.completion_ms[0] == doctest::Approx(100.0002777).epsilon(1e-12));
}

TEST_CASE("null cache when the fraction is zero") {
  SimConfig cfg = line_config(Scheme::Opc);
  cfg.sizing.fraction = 0.0;
  const MetricsReport r = run_simulation(cfg);

  CHECK(r.l1_slots == 0);
  CHECK(r.l2_slots == 0);
  CHECK(r.cache_hits == 0);
  CHECK(r.hit_ratio == 0.0);
  CHECK(r.cache_requests == 8);
  CHECK(r.server_load == 4);          // every chunk comes from the origin
  CHECK(r.network_load == 12);        // full three-leg walk, four times
  CHECK(r.network_load_nocache == 12);  // a null cache IS the no-cache baseline
  CHECK(r.propagation_ms_total == 120.0);
  CHECK(r.completion_ms_nocache_mean == 120.0);
  CHECK(r.sram_total() == 16);        // probes and refused inserts still pay the index read
  CHECK(r.dram_total() == 0);
  CHECK(r.chunks_delivered == 4);
}

TEST_CASE("concurrent receivers interleave deterministically by issue order") {
  // Two access routers; five receivers deal out round-robin in blocks of
  // two: r0, r1, r4 at node 0 and r2, r3 at node 2. All request the same
  // single-chunk object at t = 0, so the event order decides who seeds the
  // caches and who hits them.
  SimConfig cfg;
  cfg.graph = graph_from_edges(4, {{0, 1}, {1, 2}, {2, 3}});
  assign_roles(cfg.graph, 3, {0, 2});
  cfg.catalog.add({make_object_id("solo"), TrafficClass::Web, 1});
  cfg.trace.per_receiver = {{0}, {0}, {0}, {0}, {0}};
  cfg.sizing.fraction = 1.0;
  cfg.sizing.ratio = 2.0;
  cfg.receivers_per_access = 2;
  cfg.link_delay_ms = 5.0;
  cfg.receiver_stagger_ms = 0.0;  // force the simultaneous start this test is about

  const MetricsReport r = run_simulation(cfg);

  CHECK(r.receivers == 5);
  CHECK(r.requests_total == 5);
  CHECK(r.chunks_delivered == 5);
  CHECK(cost_of(r, 0).lookups == 3);
  CHECK(cost_of(r, 1).lookups == 3);
  CHECK(cost_of(r, 2).lookups == 5);
  CHECK(cost_of(r, 0).hits == 0);
  CHECK(cost_of(r, 1).hits == 0);
  // r2 seeds node 2 before r4's request walks past it.
  CHECK(cost_of(r, 2).hits == 1);
  CHECK(r.cache_requests == 11);
  CHECK(r.cache_hits == 1);
  CHECK(r.server_load == 4);
  CHECK(r.network_load == 15);
  CHECK(r.propagation_ms_total == 150.0);

  REQUIRE(r.completion_ms.size() == 5);
  // r2 pays a miss probe and a stored insert; r3 arrives one event later and
  // pays only refused work.
  CHECK(r.completion_ms[2] == doctest::Approx(20.0000559).epsilon(1e-12));
  CHECK(r.completion_ms[3] == doctest::Approx(20.0000009).epsilon(1e-12));
  CHECK(r.completion_ms_max == doctest::Approx(*std::max_element(r.completion_ms.begin(),
                                                                 r.completion_ms.end()))
                                   .epsilon(1e-15));
}

TEST_CASE("staggered starts let later receivers ride earlier fills") {
  // Two receivers behind the same access router want the same single-chunk
  // object. The second starts one full origin round trip later, so the first
  // has already seeded the path caches and the second is answered in one leg.
  // At stagger zero both requests fire in the same instant and neither can
  // profit from the other (the case the previous test pins down).
  SimConfig cfg;
  cfg.graph = graph_from_edges(3, {{0, 1}, {1, 2}});
  assign_roles(cfg.graph, 2, {0});
  cfg.catalog.add({make_object_id("solo"), TrafficClass::Web, 1});
  cfg.trace.per_receiver = {{0}, {0}};
  cfg.sizing.fraction = 1.0;
  cfg.sizing.ratio = 2.0;
  cfg.receivers_per_access = 2;
  cfg.link_delay_ms = 5.0;
  cfg.receiver_stagger_ms = 30.0;

  const MetricsReport r = run_simulation(cfg);
  CHECK(r.receivers == 2);
  CHECK(r.cache_hits == 1);
  CHECK(r.server_load == 1);
  CHECK(r.network_load == 4);  // three legs to the origin, one to the hit
  CHECK(r.network_load_nocache == 6);
  CHECK(r.propagation_ms_total == 40.0);
  CHECK(r.completion_ms_nocache_mean == 30.0);

  REQUIRE(r.completion_ms.size() == 2);
  // Completion clocks run from each receiver's own start: the second stream
  // is a one-leg round trip, not thirty idle milliseconds plus a fetch.
  CHECK(r.completion_ms[0] == doctest::Approx(30.0001118).epsilon(1e-12));
  CHECK(r.completion_ms[1] == doctest::Approx(10.00005545).epsilon(1e-12));

  // Neighbouring receivers sit five milliseconds apart unless asked otherwise.
  CHECK(SimConfig{}.receiver_stagger_ms == 5.0);
}

TEST_CASE("propagation equals twice the delay-weighted request legs") {
  for (Scheme scheme : {Scheme::Opc, Scheme::Lru}) {
    const MetricsReport r = run_simulation(line_config(scheme));
    CHECK(r.propagation_ms_total == 2.0 * 5.0 * static_cast<double>(r.network_load));
  }

  SimConfig cfg;
  cfg.graph = generate_ba(20, 2, 3);
  assign_roles(cfg.graph, 4);
  const auto classes = table_defaults(2000);
  cfg.catalog = generate_catalog(classes, 7);
  cfg.trace = generate_requests(cfg.catalog, classes, 6, 25, 9);
  cfg.sizing.fraction = 0.02;
  cfg.sizing.ratio = 5.0;
  cfg.receivers_per_access = 2;
  cfg.link_delay_ms = 5.0;

  const MetricsReport r = run_simulation(cfg);
  CHECK(r.propagation_ms_total == 2.0 * 5.0 * static_cast<double>(r.network_load));
  CHECK(r.chunks_delivered > 0);
  CHECK(r.cache_hits > 0);

  // Per-router bookkeeping stays internally consistent at scale.
  double ns = 0.0;
  for (const RouterCost& rc : r.router_costs) {
    CHECK(rc.lookups == rc.cost.count(Tier::Sram, Cause::Hit) +
                            rc.cost.count(Tier::Sram, Cause::MissLookup));
    CHECK(rc.hits == rc.cost.count(Tier::Sram, Cause::Hit));
    ns += rc.cost.total_ns();
  }
  CHECK(r.memory_ns_total == doctest::Approx(ns).epsilon(1e-12));

  double total = 0.0, max = 0.0;
  for (double c : r.completion_ms) {
    total += c;
    max = std::max(max, c);
  }
  CHECK(r.completion_ms_total == doctest::Approx(total).epsilon(1e-12));
  CHECK(r.completion_ms_max == max);
  CHECK(r.completion_ms_mean == doctest::Approx(total / r.receivers).epsilon(1e-12));
}

TEST_CASE("event-count snapshots capture occupancy and cumulative hits") {
  SimConfig cfg = line_config(Scheme::Opc);
  cfg.snapshot_every_events = 5;
  const MetricsReport r = run_simulation(cfg);

  // 16 events total: snapshots after events 5, 10, 15 plus the final state.
  REQUIRE(r.snapshots.size() == 4);
  CHECK(r.snapshots[0].time_ms == 25.0);
  CHECK(r.snapshots[0].event_index == 5);
  CHECK(r.snapshots[1].time_ms == 50.0);
  CHECK(r.snapshots[1].event_index == 10);
  CHECK(r.snapshots[2].time_ms == 75.0);
  CHECK(r.snapshots[2].event_index == 15);
  CHECK(r.snapshots[3].time_ms == 80.0);
  CHECK(r.snapshots[3].event_index == 16);

  const CacheStateLog& final_log = r.snapshots[3];
  REQUIRE(final_log.routers.size() == 2);
  CHECK(final_log.routers[0].node == 0);
  REQUIRE(final_log.routers[0].objects.size() == 1);
  const RouterObjectLog& row = final_log.routers[0].objects[0];
  CHECK(row.object.name == "pair");
  CHECK(row.present);
  CHECK(row.ranks == "1-2");
  CHECK(row.chunk_count == 2);
  CHECK(row.hits_by_rank == std::vector<std::pair<std::uint32_t, std::uint64_t>>{{1, 1}, {2, 1}});
  CHECK(row.hits_total == 2);
  CHECK(final_log.routers[1].objects[0].hits_total == 0);
  CHECK(final_log.routers[1].objects[0].hits_by_rank.empty());

  CHECK(r.snapshots_csv() ==
        "time_ms,event_index,router,object,last_or_ranks,hits\n"
        "25,5,0,pair,1,-\n"
        "25,5,1,pair,1,-\n"
        "50,10,0,pair,1,-\n"
        "50,10,1,pair,1-2,-\n"
        "75,15,0,pair,1-2,1:1;2:1\n"
        "75,15,1,pair,1-2,-\n"
        "80,16,0,pair,1-2,1:1;2:1\n"
        "80,16,1,pair,1-2,-\n");

  // A period of one logs every event and needs no trailing duplicate.
  cfg.snapshot_every_events = 1;
  const MetricsReport every = run_simulation(cfg);
  CHECK(every.snapshots.size() == 16);
  CHECK(every.snapshots.back().event_index == 16);
  CHECK(every.snapshots.back().time_ms == 80.0);
}

TEST_CASE("wall-clock snapshots fire between events") {
  SimConfig cfg = line_config(Scheme::Opc);
  cfg.snapshot_every_ms = 12.5;
  const MetricsReport r = run_simulation(cfg);

  const std::vector<double> expected = {12.5, 25.0, 37.5, 50.0, 62.5, 75.0, 80.0};
  REQUIRE(r.snapshots.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i)
    CHECK(r.snapshots[i].time_ms == expected[i]);
  for (std::size_t i = 1; i < r.snapshots.size(); ++i)
    CHECK(r.snapshots[i].event_index >= r.snapshots[i - 1].event_index);
  CHECK(r.snapshots.back().event_index == 16);
}

TEST_CASE("snapshot csv round trip") {
  SimConfig cfg = line_config(Scheme::Opc);
  cfg.snapshot_every_events = 5;
  const MetricsReport r = run_simulation(cfg);

  std::istringstream in(r.snapshots_csv());
  check_same_logs(parse_snapshots_csv(in), r.snapshots);

  // Scattered ranks and rows for objects that only left hit counters behind.
  std::istringstream crafted(
      "time_ms,event_index,router,object,last_or_ranks,hits\n"
      "1.5,3,2,foo,2-4;9,1:5;3:2\n"
      "1.5,3,2,gone,-,4:1\n");
  const auto logs = parse_snapshots_csv(crafted);
  REQUIRE(logs.size() == 1);
  CHECK(logs[0].time_ms == 1.5);
  CHECK(logs[0].event_index == 3);
  REQUIRE(logs[0].routers.size() == 1);
  CHECK(logs[0].routers[0].node == 2);
  REQUIRE(logs[0].routers[0].objects.size() == 2);
  const RouterObjectLog& foo = logs[0].routers[0].objects[0];
  CHECK(foo.present);
  CHECK(foo.chunk_count == 4);
  CHECK(foo.hits_total == 7);
  CHECK(foo.hits_by_rank == std::vector<std::pair<std::uint32_t, std::uint64_t>>{{1, 5}, {3, 2}});
  const RouterObjectLog& gone = logs[0].routers[0].objects[1];
  CHECK_FALSE(gone.present);
  CHECK(gone.chunk_count == 0);
  CHECK(gone.hits_total == 1);

  std::istringstream empty("");
  CHECK(parse_snapshots_csv(empty).empty());
  std::istringstream bad_header("nope\n");
  CHECK_THROWS_AS(parse_snapshots_csv(bad_header), std::runtime_error);
  std::istringstream short_line("time_ms,event_index,router,object,last_or_ranks,hits\n1,2,3\n");
  CHECK_THROWS_AS(parse_snapshots_csv(short_line), std::runtime_error);
  std::istringstream bad_range(
      "time_ms,event_index,router,object,last_or_ranks,hits\n1,2,3,foo,5-2,-\n");
  CHECK_THROWS_AS(parse_snapshots_csv(bad_range), std::runtime_error);
  std::istringstream bad_hits(
      "time_ms,event_index,router,object,last_or_ranks,hits\n1,2,3,foo,1,5\n");
  CHECK_THROWS_AS(parse_snapshots_csv(bad_hits), std::runtime_error);
}

TEST_CASE("chunk log records issue and delivery times") {
  SimConfig cfg = line_config(Scheme::Opc);
  cfg.record_chunk_log = true;
  const MetricsReport r = run_simulation(cfg);

  REQUIRE(r.chunk_log.size() == 4);
  const auto& log = r.chunk_log;
  CHECK(log[0].receiver == 0);
  CHECK(log[0].object_index == 0);
  CHECK(log[0].rank == 1);
  CHECK(log[0].responder_hops == 3);  // origin answered
  CHECK(log[0].issued_ms == 0.0);
  CHECK(log[0].delivered_ms == 30.0);
  CHECK(log[1].rank == 2);
  CHECK(log[1].responder_hops == 3);
  CHECK(log[1].issued_ms == 30.0);
  CHECK(log[1].delivered_ms == 60.0);
  CHECK(log[2].rank == 1);
  CHECK(log[2].responder_hops == 1);  // access-router hit
  CHECK(log[2].issued_ms == 60.0);
  CHECK(log[2].delivered_ms == 70.0);
  CHECK(log[3].rank == 2);
  CHECK(log[3].responder_hops == 1);
  CHECK(log[3].delivered_ms == 80.0);
}

TEST_CASE("identical configs give byte-identical reports") {
  SimConfig cfg;
  cfg.graph = generate_ba(20, 2, 3);
  assign_roles(cfg.graph, 4);
  const auto classes = table_defaults(2000);
  cfg.catalog = generate_catalog(classes, 7);
  cfg.trace = generate_requests(cfg.catalog, classes, 6, 25, 9);
  cfg.sizing.fraction = 0.02;
  cfg.sizing.ratio = 5.0;
  cfg.receivers_per_access = 2;
  cfg.link_delay_ms = 5.0;
  cfg.snapshot_every_events = 400;

  const MetricsReport a = run_simulation(cfg);
  const MetricsReport b = run_simulation(cfg);
  CHECK(a.to_text() == b.to_text());
  CHECK(a.routers_csv() == b.routers_csv());
  CHECK(a.snapshots_csv() == b.snapshots_csv());
  CHECK_FALSE(a.snapshots.empty());
}

TEST_CASE("report text pins the flat key order") {
  MetricsReport r;
  r.labels = {{"scheme", "opc"}, {"alpha", "1"}};
  r.completion_ms_total = 0.5;
  CHECK(r.to_text() ==
        "scheme = opc\n"
        "alpha = 1\n"
        "cache_hits = 0\n"
        "cache_requests = 0\n"
        "chunks_delivered = 0\n"
        "completion_ms_max = 0\n"
        "completion_ms_mean = 0\n"
        "completion_ms_nocache_mean = 0\n"
        "completion_ms_total = 0.5\n"
        "dram_insert_evict = 0\n"
        "dram_total = 0\n"
        "hit_ratio = 0\n"
        "l1_slots = 0\n"
        "l2_slots = 0\n"
        "memory_ns_total = 0\n"
        "network_load = 0\n"
        "network_load_nocache = 0\n"
        "propagation_ms_total = 0\n"
        "receivers = 0\n"
        "requests_total = 0\n"
        "server_load = 0\n"
        "sram_total = 0\n");

  CHECK(r.routers_csv() ==
        "router,lookups,hits,sram_insert,sram_evict,sram_hit,sram_miss,dram_insert,dram_evict,"
        "dram_hit,dram_miss,total_ns\n");
  CHECK(r.snapshots_csv() == "");
}

TEST_CASE("validation rejects degenerate setups") {
  SimConfig tiny;
  tiny.graph = make_graph(1);
  CHECK_THROWS_AS(run_simulation(tiny), std::invalid_argument);

  SimConfig split;
  split.graph = make_graph(2);
  assign_roles(split.graph, 1, {0});
  CHECK_THROWS_AS(run_simulation(split), std::invalid_argument);

  SimConfig no_origin = line_config(Scheme::Opc);
  no_origin.graph = graph_from_edges(3, {{0, 1}, {1, 2}});
  CHECK_THROWS_AS(run_simulation(no_origin), std::runtime_error);

  SimConfig no_access = line_config(Scheme::Opc);
  no_access.graph = graph_from_edges(3, {{0, 1}, {1, 2}});
  assign_roles(no_access.graph, 2, {});
  CHECK_THROWS_AS(run_simulation(no_access), std::invalid_argument);

  SimConfig bad_delay = line_config(Scheme::Opc);
  bad_delay.link_delay_ms = 0.0;
  CHECK_THROWS_AS(run_simulation(bad_delay), std::invalid_argument);

  SimConfig bad_stagger = line_config(Scheme::Opc);
  bad_stagger.receiver_stagger_ms = -1.0;
  CHECK_THROWS_AS(run_simulation(bad_stagger), std::invalid_argument);

  SimConfig bad_rpa = line_config(Scheme::Opc);
  bad_rpa.receivers_per_access = 0;
  CHECK_THROWS_AS(run_simulation(bad_rpa), std::invalid_argument);

  SimConfig bad_fraction = line_config(Scheme::Opc);
  bad_fraction.sizing.fraction = -1.0;
  CHECK_THROWS_AS(run_simulation(bad_fraction), std::invalid_argument);
}

TEST_SUITE_END();
