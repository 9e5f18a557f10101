#include "opcsim/stats.hpp"

#include <cstdio>
#include <map>
#include <stdexcept>

namespace opcsim {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::vector<std::pair<std::uint32_t, std::uint32_t>> parse_rank_ranges(const std::string& repr) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  if (repr.empty() || repr == "-") return out;
  std::size_t start = 0;
  while (start <= repr.size()) {
    std::size_t end = repr.find(';', start);
    if (end == std::string::npos) end = repr.size();
    const std::string seg = repr.substr(start, end - start);
    if (seg.empty()) throw std::invalid_argument("empty rank range segment in: " + repr);
    const std::size_t dash = seg.find('-');
    std::uint32_t lo, hi;
    if (dash == std::string::npos) {
      lo = hi = static_cast<std::uint32_t>(std::stoul(seg));
    } else {
      lo = static_cast<std::uint32_t>(std::stoul(seg.substr(0, dash)));
      hi = static_cast<std::uint32_t>(std::stoul(seg.substr(dash + 1)));
    }
    if (lo == 0 || hi < lo) throw std::invalid_argument("bad rank range segment: " + seg);
    out.emplace_back(lo, hi);
    start = end + 1;
    if (end == repr.size()) break;
  }
  return out;
}

BehavioralStats behavioral_stats(const std::vector<CacheStateLog>& logs, const Catalog* catalog) {
  BehavioralStats stats;

  struct PerObject {
    std::uint64_t logs_present = 0;
    std::uint64_t stored_occurrences = 0;
  };
  std::map<std::string, PerObject> objects;
  // Hit counters are cumulative per router; the latest value wins.
  std::map<std::pair<NodeId, std::string>, std::uint64_t> final_hits;
  std::map<std::pair<NodeId, std::string>, std::vector<std::pair<std::uint32_t, std::uint64_t>>>
      final_hits_by_rank;
  // Stored-per-rank mass accumulates over every log (difference array).
  std::map<std::uint32_t, std::int64_t> stored_rank_delta;

  for (const CacheStateLog& log : logs) {
    for (const RouterLog& rl : log.routers) {
      ++stats.log_count;
      for (const RouterObjectLog& row : rl.objects) {
        PerObject& po = objects[row.object.name];
        if (row.present) {
          ++po.logs_present;
          po.stored_occurrences += row.chunk_count;
          for (const auto& [lo, hi] : parse_rank_ranges(row.ranks)) {
            stored_rank_delta[lo] += 1;
            stored_rank_delta[hi + 1] -= 1;
          }
        }
        if (!row.hits_by_rank.empty()) {
          final_hits[{rl.node, row.object.name}] = row.hits_total;
          final_hits_by_rank[{rl.node, row.object.name}] = row.hits_by_rank;
        }
      }
    }
  }

  std::map<std::string, std::uint64_t> hits_per_object;
  std::map<std::uint32_t, std::uint64_t> hits_per_rank;
  for (const auto& [key, total] : final_hits) hits_per_object[key.second] += total;
  for (const auto& [key, by_rank] : final_hits_by_rank)
    for (const auto& [rank, count] : by_rank) hits_per_rank[rank] += count;

  for (const auto& [name, po] : objects) {
    ObjectBehavior ob;
    ob.object = ObjectId{name};
    ob.logs_present = po.logs_present;
    ob.caching_frequency =
        stats.log_count > 0 ? static_cast<double>(po.logs_present) / static_cast<double>(stats.log_count)
                            : 0.0;
    ob.stored_occurrences = po.stored_occurrences;
    auto hit_it = hits_per_object.find(name);
    ob.hits = hit_it != hits_per_object.end() ? hit_it->second : 0;
    ob.caching_efficiency = ob.stored_occurrences > 0
                                ? static_cast<double>(ob.hits) / static_cast<double>(ob.stored_occurrences)
                                : 0.0;
    if (catalog && catalog->has(ob.object)) ob.size_chunks = catalog->at(catalog->index_of(ob.object)).size_chunks;
    stats.per_object.push_back(std::move(ob));
  }

  std::uint64_t hit_mass = 0;
  for (const auto& [rank, count] : hits_per_rank) hit_mass += count;
  std::uint64_t acc = 0;
  for (const auto& [rank, count] : hits_per_rank) {
    acc += count;
    stats.hit_rank_cdf.push_back(
        CdfPoint{rank, static_cast<double>(acc) / static_cast<double>(hit_mass)});
  }

  // Prefix-sum the difference array into per-rank stored mass.
  std::map<std::uint32_t, std::uint64_t> stored_per_rank;
  std::int64_t level = 0;
  std::uint32_t prev_rank = 0;
  std::uint64_t stored_mass = 0;
  for (const auto& [rank, delta] : stored_rank_delta) {
    if (level > 0)
      for (std::uint32_t r = prev_rank; r < rank; ++r) {
        stored_per_rank[r] = static_cast<std::uint64_t>(level);
        stored_mass += static_cast<std::uint64_t>(level);
      }
    level += delta;
    prev_rank = rank;
  }
  acc = 0;
  for (const auto& [rank, count] : stored_per_rank) {
    acc += count;
    stats.stored_rank_cdf.push_back(
        CdfPoint{rank, static_cast<double>(acc) / static_cast<double>(stored_mass)});
  }

  return stats;
}

std::string cdf_csv(const std::vector<CdfPoint>& cdf) {
  std::string out = "rank,fraction\n";
  for (const CdfPoint& p : cdf) {
    out += std::to_string(p.rank);
    out += ',';
    out += fmt_double(p.fraction);
    out += '\n';
  }
  return out;
}

std::string objects_csv(const BehavioralStats& stats) {
  std::string out = "object,logs_present,caching_frequency,stored_occurrences,hits,caching_efficiency,size_chunks\n";
  for (const ObjectBehavior& ob : stats.per_object) {
    out += ob.object.name;
    out += ',' + std::to_string(ob.logs_present);
    out += ',' + fmt_double(ob.caching_frequency);
    out += ',' + std::to_string(ob.stored_occurrences);
    out += ',' + std::to_string(ob.hits);
    out += ',' + fmt_double(ob.caching_efficiency);
    out += ',' + std::to_string(ob.size_chunks);
    out += '\n';
  }
  return out;
}

}  // namespace opcsim
