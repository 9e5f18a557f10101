#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "opcsim/chunk.hpp"
#include "opcsim/cost_model.hpp"
#include "opcsim/memory_config.hpp"

namespace opcsim {

/// Snapshot of one object's footprint in a cache. Object-level caches report
/// a contiguous prefix (last_contiguous > 0, ranks empty); chunk-level caches
/// list the cached ranks explicitly (last_contiguous == 0).
struct CachedObjectState {
  ObjectId object;
  std::uint32_t last_contiguous = 0;
  std::vector<std::uint32_t> ranks;
  std::size_t lru_position = 0;

  bool holds_rank(std::uint32_t r) const {
    if (last_contiguous > 0) return r >= 1 && r <= last_contiguous;
    for (std::uint32_t have : ranks)
      if (have == r) return true;
    return false;
  }

  std::size_t chunk_count() const { return last_contiguous > 0 ? last_contiguous : ranks.size(); }

  /// Compact text form used in state logs: "7" for a prefix of 7,
  /// "1-3;5" for an explicit rank set.
  std::string ranks_repr() const;
};

/// Scheme-independent result of offering a chunk to a cache.
struct InsertReport {
  bool stored = false;
  OpCharge charge;
};

/// Behavioral contract shared by both cache schemes: packet arrivals are
/// offered chunk by chunk, lookups answer for a single (object, rank), and
/// every operation reports the memory accesses it cost.
class ChunkCache {
 public:
  virtual ~ChunkCache() = default;

  virtual Scheme scheme() const = 0;

  /// Answers whether the chunk can be served, promotes on hit, and charges
  /// the lookup. Misses never mutate.
  virtual LookupResult lookup(const ChunkId& id) = 0;

  /// Offers a passing chunk for storage; the cache decides and charges.
  virtual InsertReport insert_chunk(const Chunk& chunk) = 0;

  /// Pure query: would a lookup hit? No promotion, no charge.
  virtual bool contains(const ChunkId& id) const = 0;

  virtual std::size_t l1_capacity() const = 0;
  virtual std::size_t l2_capacity() const = 0;
  virtual std::size_t occupied_slots() const = 0;

  /// Per-object snapshot sorted by object name.
  virtual std::vector<CachedObjectState> dump_objects() const = 0;

  /// Human-readable dump, one record per line, eviction-order aware.
  virtual std::string dump_text() const = 0;

  virtual const CostModel& cost() const = 0;
};

}  // namespace opcsim
