#pragma once

#include <cstdint>
#include <list>
#include <string>
#include <unordered_map>
#include <vector>

#include "opcsim/chunk_cache.hpp"

namespace opcsim {

enum class LruInsertOutcome : std::uint8_t {
  Stored,
  StoredWithEviction,
  IgnoredDuplicate,
  IgnoredNoCapacity  // zero-capacity cache only
};

inline const char* to_string(LruInsertOutcome o) {
  switch (o) {
    case LruInsertOutcome::Stored: return "stored";
    case LruInsertOutcome::StoredWithEviction: return "stored_with_eviction";
    case LruInsertOutcome::IgnoredDuplicate: return "ignored_duplicate";
    default: return "ignored_no_capacity";
  }
}

struct LruInsertResult {
  LruInsertOutcome outcome = LruInsertOutcome::IgnoredNoCapacity;
  OpCharge charge;

  bool stored() const {
    return outcome == LruInsertOutcome::Stored || outcome == LruInsertOutcome::StoredWithEviction;
  }
};

/// Chunk-granular LRU baseline: every chunk is indexed individually, hits
/// and stores each cost one fast plus one slow access, recency is
/// per chunk. Effective capacity is min(l1_slots, l2_slots) because each
/// slot needs its own index entry.
class LruChunkCache final : public ChunkCache {
 public:
  struct Options {
    std::size_t l1_slots = 0;
    std::size_t l2_slots = 0;
  };

  explicit LruChunkCache(const Options& options);
  explicit LruChunkCache(const MemoryConfig& config);

  Scheme scheme() const override { return Scheme::Lru; }

  LookupResult lookup(const ChunkId& id) override;
  LruInsertResult insert(const Chunk& chunk);

  InsertReport insert_chunk(const Chunk& chunk) override {
    LruInsertResult r = insert(chunk);
    return InsertReport{r.stored(), r.charge};
  }

  bool contains(const ChunkId& id) const override;

  std::size_t l1_capacity() const override { return opt_.l1_slots; }
  std::size_t l2_capacity() const override { return opt_.l2_slots; }
  std::size_t capacity() const { return capacity_; }
  std::size_t occupied_slots() const override { return index_.size(); }

  /// Cached chunk ids, most recently used first.
  std::vector<ChunkId> lru_order() const;

  std::vector<CachedObjectState> dump_objects() const override;
  std::string dump_text() const override;

  const CostModel& cost() const override { return cost_; }
  CostModel& cost() { return cost_; }

 private:
  Options opt_;
  std::size_t capacity_ = 0;
  std::list<Chunk> list_;  // front = most recent
  std::unordered_map<ChunkId, std::list<Chunk>::iterator, ChunkIdHash> index_;
  CostModel cost_;
};

}  // namespace opcsim
