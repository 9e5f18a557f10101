#include "opcsim/simulator.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <memory>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "opcsim/graph_algorithms.hpp"
#include "opcsim/lru_cache.hpp"

namespace opcsim {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

enum class EventKind : std::uint8_t { Request, Data, Deliver };

struct Event {
  double t = 0.0;
  std::uint64_t seq = 0;
  std::uint32_t receiver = 0;
  std::uint16_t pos = 0;
  EventKind kind = EventKind::Request;
};

struct EventAfter {
  bool operator()(const Event& a, const Event& b) const {
    if (a.t != b.t) return a.t > b.t;
    return a.seq > b.seq;
  }
};

struct PathInfo {
  std::vector<NodeId> nodes;  // access ... origin
  std::vector<std::uint8_t> lookup_here;
  std::vector<std::uint8_t> insert_here;
};

struct ReceiverState {
  NodeId attach = kNoNode;
  const PathInfo* path = nullptr;
  std::uint32_t trace_idx = 0;
  std::uint32_t obj_idx = 0;
  std::uint32_t obj_size = 0;
  std::uint32_t rank = 0;
  std::uint16_t responder_pos = 0;
  bool active = false;
  double start_t = 0.0;
  double issue_t = 0.0;
  double last_delivery = 0.0;
  double memory_ns = 0.0;
  double nocache_ms = 0.0;
};

std::unique_ptr<ChunkCache> make_cache(Scheme scheme, const CacheCapacity& cap,
                                       AllocatorMode allocator, AdmitPosition admit) {
  if (scheme == Scheme::Lru) {
    LruChunkCache::Options o;
    o.l1_slots = cap.l1_slots;
    o.l2_slots = cap.l2_slots;
    return std::make_unique<LruChunkCache>(o);
  }
  OpcCache::Options o;
  o.l1_slots = cap.l1_slots;
  o.l2_slots = cap.l2_slots;
  o.allocator = allocator;
  o.admit = admit;
  return std::make_unique<OpcCache>(o);
}

std::string hits_repr(const std::vector<std::pair<std::uint32_t, std::uint64_t>>& hits) {
  if (hits.empty()) return "-";
  std::string out;
  for (const auto& [rank, count] : hits) {
    if (!out.empty()) out += ';';
    out += std::to_string(rank);
    out += ':';
    out += std::to_string(count);
  }
  return out;
}

}  // namespace

CacheCapacity CacheSizing::resolve(Scheme scheme, std::uint64_t catalog_chunks) const {
  if (mode == Mode::Bytes)
    return capacity_from_config(MemoryConfig::for_scheme(scheme, sram_bytes, dram_bytes, mss_bytes),
                                scheme);
  if (fraction < 0.0) throw std::invalid_argument("cache fraction must be non-negative");
  if (ratio <= 0.0) throw std::invalid_argument("slot ratio must be positive");
  CacheCapacity cap;
  cap.l1_slots = static_cast<std::uint64_t>(std::llround(fraction * static_cast<double>(catalog_chunks)));
  cap.l2_slots = scheme == Scheme::Lru
                     ? cap.l1_slots
                     : static_cast<std::uint64_t>(std::llround(ratio * static_cast<double>(cap.l1_slots)));
  return cap;
}

MetricsReport run_simulation(const SimConfig& config) {
  const Graph& g = config.graph;
  if (g.node_count() < 2) throw std::invalid_argument("simulation needs at least two nodes");
  if (!g.connected()) throw std::invalid_argument("topology must be connected");
  if (config.link_delay_ms <= 0.0) throw std::invalid_argument("link delay must be positive");
  if (config.receiver_stagger_ms < 0.0)
    throw std::invalid_argument("receiver stagger must be non-negative");
  if (config.receivers_per_access == 0)
    throw std::invalid_argument("receivers_per_access must be positive");

  const NodeId origin = g.origin();
  const std::vector<NodeId> access = g.access_nodes();
  if (access.empty()) throw std::invalid_argument("topology has no access nodes");

  const RoutingTable routes = RoutingTable::build(g);
  std::vector<double> scores;
  if (config.placement == PlacementPolicy::Betweenness) scores = betweenness_scores(g);

  const std::size_t n = g.node_count();
  std::vector<std::uint8_t> has_cache(n, 0);
  for (NodeId v = 0; v < n; ++v) {
    if (g.roles[v] == NodeRole::Origin) continue;
    if (config.placement == PlacementPolicy::Edge && g.roles[v] != NodeRole::Access) continue;
    has_cache[v] = 1;
  }

  const CacheCapacity cap = config.sizing.resolve(config.scheme, config.catalog.total_chunks());
  std::vector<std::unique_ptr<ChunkCache>> caches(n);
  for (NodeId v = 0; v < n; ++v)
    if (has_cache[v]) caches[v] = make_cache(config.scheme, cap, config.allocator, config.admit);

  // One shortest path per access node; storing and lookup roles per hop are
  // fixed for the whole run.
  std::vector<PathInfo> paths(n);
  for (NodeId a : access) {
    PathInfo info;
    info.nodes = routes.path(a, origin);
    const std::vector<NodeId> store_at =
        caching_nodes_for(config.placement, info.nodes, g, scores);
    info.lookup_here.resize(info.nodes.size(), 0);
    info.insert_here.resize(info.nodes.size(), 0);
    for (std::size_t pos = 0; pos < info.nodes.size(); ++pos) {
      const NodeId v = info.nodes[pos];
      const bool store_here =
          std::find(store_at.begin(), store_at.end(), v) != store_at.end() && has_cache[v];
      info.insert_here[pos] = store_here ? 1 : 0;
      info.lookup_here[pos] =
          has_cache[v] && (config.lookup_all_capable || store_here) ? 1 : 0;
    }
    paths[a] = std::move(info);
  }

  const std::uint32_t receiver_count = static_cast<std::uint32_t>(config.trace.per_receiver.size());
  std::vector<ReceiverState> recv(receiver_count);
  for (std::uint32_t r = 0; r < receiver_count; ++r) {
    recv[r].attach = access[(r / config.receivers_per_access) % access.size()];
    recv[r].path = &paths[recv[r].attach];
  }

  MetricsReport report;
  report.receivers = receiver_count;
  report.l1_slots = cap.l1_slots;
  report.l2_slots = cap.l2_slots;
  for (const auto& stream : config.trace.per_receiver) report.requests_total += stream.size();

  std::priority_queue<Event, std::vector<Event>, EventAfter> heap;
  std::uint64_t next_seq = 0;
  const double delay = config.link_delay_ms;

  auto issue_chunk = [&](std::uint32_t r, double t) {
    recv[r].issue_t = t;
    ++report.network_load;
    // the cache-free world walks this request all the way to the origin
    const double full_legs = static_cast<double>(recv[r].path->nodes.size());
    report.network_load_nocache += recv[r].path->nodes.size();
    recv[r].nocache_ms += 2.0 * delay * full_legs;
    heap.push(Event{t + delay, next_seq++, r, 0, EventKind::Request});
  };

  auto start_next_object = [&](std::uint32_t r, double t) {
    ReceiverState& st = recv[r];
    const auto& stream = config.trace.per_receiver[r];
    if (st.trace_idx >= stream.size()) {
      st.active = false;
      return;
    }
    st.obj_idx = stream[st.trace_idx];
    st.obj_size = config.catalog.at(st.obj_idx).size_chunks;
    st.rank = 1;
    st.active = true;
    issue_chunk(r, t);
  };

  for (std::uint32_t r = 0; r < receiver_count; ++r) {
    const double t0 = static_cast<double>(r) * config.receiver_stagger_ms;
    recv[r].start_t = t0;
    recv[r].last_delivery = t0;  // a receiver with an empty stream is busy for 0 ms
    start_next_object(r, t0);
  }

  // Per-router cumulative hit counters at chunk granularity, for state logs.
  std::vector<std::unordered_map<std::uint32_t, std::map<std::uint32_t, std::uint64_t>>> hits_fine(n);
  std::vector<std::uint64_t> node_lookups(n, 0), node_hits(n, 0);

  std::uint64_t events_processed = 0;
  double last_event_t = 0.0;
  const bool snaps_on = config.snapshot_every_events > 0 || config.snapshot_every_ms > 0.0;
  double next_snap_ms = config.snapshot_every_ms;

  auto take_snapshot = [&](double time_ms, std::uint64_t event_index) {
    CacheStateLog log;
    log.time_ms = time_ms;
    log.event_index = event_index;
    for (NodeId v = 0; v < n; ++v) {
      if (!caches[v]) continue;
      RouterLog rl;
      rl.node = v;
      std::map<std::string, RouterObjectLog> rows;
      for (const CachedObjectState& st : caches[v]->dump_objects()) {
        RouterObjectLog& row = rows[st.object.name];
        row.object = st.object;
        row.present = true;
        row.ranks = st.ranks_repr();
        row.chunk_count = st.chunk_count();
      }
      for (const auto& [obj_idx, per_rank] : hits_fine[v]) {
        const ObjectId& id = config.catalog.at(obj_idx).id;
        RouterObjectLog& row = rows[id.name];
        row.object = id;
        if (row.ranks.empty()) row.ranks = "-";
        row.hits_by_rank.assign(per_rank.begin(), per_rank.end());
        for (const auto& [rank, cnt] : per_rank) row.hits_total += cnt;
      }
      rl.objects.reserve(rows.size());
      for (auto& [name, row] : rows) {
        if (row.ranks.empty()) row.ranks = "-";
        rl.objects.push_back(std::move(row));
      }
      log.routers.push_back(std::move(rl));
    }
    report.snapshots.push_back(std::move(log));
  };

  auto push_data_down = [&](std::uint32_t r, std::uint16_t from_pos, double t) {
    if (from_pos == 0)
      heap.push(Event{t + delay, next_seq++, r, 0, EventKind::Deliver});
    else
      heap.push(Event{t + delay, next_seq++, r, static_cast<std::uint16_t>(from_pos - 1),
                      EventKind::Data});
  };

  auto current_chunk_id = [&](const ReceiverState& st) {
    return ChunkId{config.catalog.at(st.obj_idx).id, st.rank};
  };

  while (!heap.empty()) {
    const Event ev = heap.top();
    heap.pop();

    if (config.snapshot_every_ms > 0.0) {
      while (next_snap_ms <= ev.t) {
        take_snapshot(next_snap_ms, events_processed);
        next_snap_ms += config.snapshot_every_ms;
      }
    }

    ReceiverState& st = recv[ev.receiver];
    const PathInfo& path = *st.path;

    switch (ev.kind) {
      case EventKind::Request: {
        const NodeId node = path.nodes[ev.pos];
        bool answered = false;
        if (path.lookup_here[ev.pos]) {
          const LookupResult res = caches[node]->lookup(current_chunk_id(st));
          ++report.cache_requests;
          ++node_lookups[node];
          st.memory_ns += res.charge.ns();
          if (res.hit()) {
            ++report.cache_hits;
            ++node_hits[node];
            ++hits_fine[node][st.obj_idx][st.rank];
            st.responder_pos = ev.pos;
            push_data_down(ev.receiver, ev.pos, ev.t);
            answered = true;
          }
        }
        if (!answered) {
          if (ev.pos + 1 == path.nodes.size()) {  // the origin always answers
            ++report.server_load;
            st.responder_pos = ev.pos;
            push_data_down(ev.receiver, ev.pos, ev.t);
          } else {
            ++report.network_load;
            heap.push(Event{ev.t + delay, next_seq++, ev.receiver,
                            static_cast<std::uint16_t>(ev.pos + 1), EventKind::Request});
          }
        }
        break;
      }
      case EventKind::Data: {
        const NodeId node = path.nodes[ev.pos];
        if (path.insert_here[ev.pos]) {
          Chunk chunk;
          chunk.id = current_chunk_id(st);
          chunk.size_bytes = config.sizing.mss_bytes;
          const InsertReport rep = caches[node]->insert_chunk(chunk);
          st.memory_ns += rep.charge.ns();
        }
        push_data_down(ev.receiver, ev.pos, ev.t);
        break;
      }
      case EventKind::Deliver: {
        st.last_delivery = ev.t;
        ++report.chunks_delivered;
        if (config.record_chunk_log)
          report.chunk_log.push_back(ChunkLogEntry{ev.receiver, st.obj_idx, st.rank,
                                                   static_cast<std::uint32_t>(st.responder_pos + 1),
                                                   st.issue_t, ev.t});
        if (st.rank < st.obj_size) {
          ++st.rank;
          issue_chunk(ev.receiver, ev.t);
        } else {
          ++st.trace_idx;
          start_next_object(ev.receiver, ev.t);
        }
        break;
      }
    }

    ++events_processed;
    last_event_t = ev.t;
    if (config.snapshot_every_events > 0 && events_processed % config.snapshot_every_events == 0)
      take_snapshot(ev.t, events_processed);
  }

  if (snaps_on &&
      (report.snapshots.empty() || report.snapshots.back().event_index != events_processed))
    take_snapshot(last_event_t, events_processed);

  report.completion_ms.resize(receiver_count, 0.0);
  double nocache_ms_total = 0.0;
  for (std::uint32_t r = 0; r < receiver_count; ++r) {
    // completion is time busy, measured from the receiver's own start
    const double busy_ms = recv[r].last_delivery - recv[r].start_t;
    report.completion_ms[r] = busy_ms + recv[r].memory_ns * 1e-6;
    report.propagation_ms_total += busy_ms;
    report.completion_ms_total += report.completion_ms[r];
    report.completion_ms_max = std::max(report.completion_ms_max, report.completion_ms[r]);
    nocache_ms_total += recv[r].nocache_ms;
  }
  if (receiver_count > 0) {
    report.completion_ms_mean = report.completion_ms_total / receiver_count;
    report.completion_ms_nocache_mean = nocache_ms_total / receiver_count;
  }
  report.hit_ratio = report.cache_requests > 0
                         ? static_cast<double>(report.cache_hits) / static_cast<double>(report.cache_requests)
                         : 0.0;

  for (NodeId v = 0; v < n; ++v) {
    if (!caches[v]) continue;
    RouterCost rc;
    rc.node = v;
    rc.lookups = node_lookups[v];
    rc.hits = node_hits[v];
    rc.cost = caches[v]->cost();
    report.memory_ns_total += rc.cost.total_ns();
    report.router_costs.push_back(std::move(rc));
  }

  return report;
}

std::uint64_t MetricsReport::sram_total() const {
  std::uint64_t sum = 0;
  for (const RouterCost& rc : router_costs) sum += rc.cost.tier_total(Tier::Sram);
  return sum;
}

std::uint64_t MetricsReport::dram_total() const {
  std::uint64_t sum = 0;
  for (const RouterCost& rc : router_costs) sum += rc.cost.tier_total(Tier::Dram);
  return sum;
}

std::uint64_t MetricsReport::dram_insert_evict() const {
  std::uint64_t sum = 0;
  for (const RouterCost& rc : router_costs)
    sum += rc.cost.count(Tier::Dram, Cause::Insert) + rc.cost.count(Tier::Dram, Cause::Evict);
  return sum;
}

std::string MetricsReport::to_text() const {
  std::string out;
  for (const auto& [key, value] : labels) out += key + " = " + value + "\n";
  auto put_u = [&out](const char* key, std::uint64_t v) {
    out += key;
    out += " = ";
    out += std::to_string(v);
    out += '\n';
  };
  auto put_d = [&out](const char* key, double v) {
    out += key;
    out += " = ";
    out += fmt_double(v);
    out += '\n';
  };
  put_u("cache_hits", cache_hits);
  put_u("cache_requests", cache_requests);
  put_u("chunks_delivered", chunks_delivered);
  put_d("completion_ms_max", completion_ms_max);
  put_d("completion_ms_mean", completion_ms_mean);
  put_d("completion_ms_nocache_mean", completion_ms_nocache_mean);
  put_d("completion_ms_total", completion_ms_total);
  put_u("dram_insert_evict", dram_insert_evict());
  put_u("dram_total", dram_total());
  put_d("hit_ratio", hit_ratio);
  put_u("l1_slots", l1_slots);
  put_u("l2_slots", l2_slots);
  put_d("memory_ns_total", memory_ns_total);
  put_u("network_load", network_load);
  put_u("network_load_nocache", network_load_nocache);
  put_d("propagation_ms_total", propagation_ms_total);
  put_u("receivers", receivers);
  put_u("requests_total", requests_total);
  put_u("server_load", server_load);
  put_u("sram_total", sram_total());
  return out;
}

std::string MetricsReport::routers_csv() const {
  std::string out =
      "router,lookups,hits,sram_insert,sram_evict,sram_hit,sram_miss,dram_insert,dram_evict,"
      "dram_hit,dram_miss,total_ns\n";
  for (const RouterCost& rc : router_costs) {
    const CostModel& c = rc.cost;
    out += std::to_string(rc.node) + ',' + std::to_string(rc.lookups) + ',' + std::to_string(rc.hits);
    for (Tier t : {Tier::Sram, Tier::Dram})
      for (Cause cause : {Cause::Insert, Cause::Evict, Cause::Hit, Cause::MissLookup})
        out += ',' + std::to_string(c.count(t, cause));
    out += ',' + fmt_double(c.total_ns());
    out += '\n';
  }
  return out;
}

std::string MetricsReport::snapshots_csv() const {
  if (snapshots.empty()) return "";
  std::string out = "time_ms,event_index,router,object,last_or_ranks,hits\n";
  for (const CacheStateLog& log : snapshots) {
    for (const RouterLog& rl : log.routers) {
      for (const RouterObjectLog& row : rl.objects) {
        out += fmt_double(log.time_ms);
        out += ',' + std::to_string(log.event_index);
        out += ',' + std::to_string(rl.node);
        out += ',' + row.object.name;
        out += ',' + row.ranks;
        out += ',' + hits_repr(row.hits_by_rank);
        out += '\n';
      }
    }
  }
  return out;
}

std::vector<CacheStateLog> parse_snapshots_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) return {};
  if (line != "time_ms,event_index,router,object,last_or_ranks,hits")
    throw std::runtime_error("state log: unexpected header: " + line);

  std::vector<CacheStateLog> logs;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (int i = 0; i < 5; ++i) {
      const std::size_t comma = line.find(',', start);
      if (comma == std::string::npos)
        throw std::runtime_error("state log: malformed line " + std::to_string(line_no));
      fields.push_back(line.substr(start, comma - start));
      start = comma + 1;
    }
    fields.push_back(line.substr(start));

    const double time_ms = std::stod(fields[0]);
    const std::uint64_t event_index = std::stoull(fields[1]);
    const NodeId node = static_cast<NodeId>(std::stoul(fields[2]));

    if (logs.empty() || logs.back().time_ms != time_ms || logs.back().event_index != event_index) {
      CacheStateLog log;
      log.time_ms = time_ms;
      log.event_index = event_index;
      logs.push_back(std::move(log));
    }
    CacheStateLog& log = logs.back();
    if (log.routers.empty() || log.routers.back().node != node) {
      RouterLog rl;
      rl.node = node;
      log.routers.push_back(std::move(rl));
    }

    RouterObjectLog row;
    row.object = ObjectId{fields[3]};
    row.ranks = fields[4];
    row.present = fields[4] != "-";
    if (row.present) {
      std::stringstream ranges(fields[4]);
      std::string seg;
      while (std::getline(ranges, seg, ';')) {
        const std::size_t dash = seg.find('-');
        if (dash == std::string::npos) {
          row.chunk_count += 1;
        } else {
          const std::uint64_t lo = std::stoull(seg.substr(0, dash));
          const std::uint64_t hi = std::stoull(seg.substr(dash + 1));
          if (hi < lo) throw std::runtime_error("state log: bad rank range at line " + std::to_string(line_no));
          row.chunk_count += hi - lo + 1;
        }
      }
    }
    if (fields[5] != "-") {
      std::stringstream hits(fields[5]);
      std::string item;
      while (std::getline(hits, item, ';')) {
        const std::size_t colon = item.find(':');
        if (colon == std::string::npos)
          throw std::runtime_error("state log: bad hit counter at line " + std::to_string(line_no));
        const std::uint32_t rank = static_cast<std::uint32_t>(std::stoul(item.substr(0, colon)));
        const std::uint64_t count = std::stoull(item.substr(colon + 1));
        row.hits_by_rank.emplace_back(rank, count);
        row.hits_total += count;
      }
    }
    log.routers.back().objects.push_back(std::move(row));
  }
  return logs;
}

}  // namespace opcsim
