#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "opcsim/chunk_cache.hpp"

namespace opcsim {

/// How packet slots are assigned to objects.
/// DynamicLinked: any free slot, chained per object through per-slot prev
/// pointers, with a global free list. FixedContiguous: slow memory is split
/// into equal per-object regions and chunk addresses are computed, trading
/// slot utilization for single-access fetches.
enum class AllocatorMode : std::uint8_t { DynamicLinked, FixedContiguous };

/// Where a brand-new object enters the object-level eviction order.
enum class AdmitPosition : std::uint8_t { LruHead, LruTail };

enum class InsertOutcome : std::uint8_t {
  StoredNew,             // rank 1 of an unindexed object, entry created
  StoredAppend,          // rank == last + 1, chain extended
  IgnoredOutOfSequence,  // would leave a gap, not stored
  IgnoredDuplicate,      // rank <= last, already held
  IgnoredSelfVictim,     // only eviction candidate was the object itself
  IgnoredOutOfSpace      // no slot assignable (fixed region full or null cache)
};

inline const char* to_string(InsertOutcome o) {
  switch (o) {
    case InsertOutcome::StoredNew: return "stored_new";
    case InsertOutcome::StoredAppend: return "stored_append";
    case InsertOutcome::IgnoredOutOfSequence: return "ignored_out_of_sequence";
    case InsertOutcome::IgnoredDuplicate: return "ignored_duplicate";
    case InsertOutcome::IgnoredSelfVictim: return "ignored_self_victim";
    default: return "ignored_out_of_space";
  }
}

struct InsertResult {
  InsertOutcome outcome = InsertOutcome::IgnoredOutOfSpace;
  OpCharge charge;

  bool stored() const {
    return outcome == InsertOutcome::StoredNew || outcome == InsertOutcome::StoredAppend;
  }
};

using SlotIndex = std::uint32_t;
inline constexpr SlotIndex kNoSlot = ~SlotIndex{0};

struct IntegrityReport {
  std::vector<std::string> violations;
  std::size_t entries = 0;
  std::size_t occupied_slots = 0;
  std::size_t free_slots = 0;

  bool ok() const { return violations.empty(); }
};

/// Object-granular two-level chunk cache. The fast-memory index holds one
/// entry per object: the highest contiguously cached rank and a pointer to
/// that chunk's slot in slow memory. Because only in-order arrivals are
/// admitted, ranks 1..last are always all present and one entry indexes a
/// whole chain. Eviction is object-wise from the tail of an object LRU that
/// is reordered by hits only; single slots are reclaimed by shortening the
/// least-valuable object's chain from its tail.
class OpcCache final : public ChunkCache {
 public:
  struct Options {
    std::size_t l1_slots = 0;
    std::size_t l2_slots = 0;
    AllocatorMode allocator = AllocatorMode::DynamicLinked;
    AdmitPosition admit = AdmitPosition::LruHead;
  };

  explicit OpcCache(const Options& options);
  OpcCache(const MemoryConfig& config, AllocatorMode allocator = AllocatorMode::DynamicLinked,
           AdmitPosition admit = AdmitPosition::LruHead);

  Scheme scheme() const override { return Scheme::Opc; }

  /// Hit iff the object is indexed with last >= rank. A linked-allocation hit
  /// walks the chain from the tail pointer: 1 + (last - rank) slow accesses.
  /// A contiguous-allocation hit computes the address: one slow access.
  /// Hits promote the object; misses mutate nothing.
  LookupResult lookup(const ChunkId& id) override;

  /// In-order admission: rank 1 of an unknown object opens an entry
  /// (evicting the tail object first if the index is full), rank last+1
  /// extends the chain (stealing a slot from the LRU-tail object if slow
  /// memory is full), anything else is ignored for 1 fast access. The
  /// returned charge covers the whole call, induced evictions included.
  InsertResult insert(const Chunk& chunk);

  /// Reclaims one slot from the tail-most object whose id differs from
  /// exclude (pass nothing to consider every object). The freed slot is
  /// pushed onto the free list and its index returned. Empty candidate set
  /// yields nullopt.
  std::optional<SlotIndex> evict_tail_chunk();
  std::optional<SlotIndex> evict_tail_chunk(const ObjectId& exclude);

  /// Removes the LRU-tail object entirely, splicing its whole chain onto the
  /// free list in one pointer update plus per-slot bookkeeping. Returns the
  /// number of slots freed, or nullopt when the cache is empty.
  std::optional<std::size_t> evict_tail_object();

  /// Checks every structural invariant: chains are acyclic, gapless and
  /// consistent with the index, slot conservation holds, the free list and
  /// eviction list are well formed, and every entry is findable.
  IntegrityReport verify_integrity() const;

  std::optional<std::uint32_t> last_chunk_id(const ObjectId& object) const;
  bool contains(const ChunkId& id) const override;

  InsertReport insert_chunk(const Chunk& chunk) override {
    InsertResult r = insert(chunk);
    return InsertReport{r.stored(), r.charge};
  }

  std::size_t l1_capacity() const override { return opt_.l1_slots; }
  std::size_t l2_capacity() const override { return opt_.l2_slots; }
  std::size_t occupied_slots() const override { return occupied_; }
  std::size_t object_count() const { return entry_count_; }
  std::size_t free_slot_count() const;
  AllocatorMode allocator() const { return opt_.allocator; }

  /// Objects in eviction order, head (most valuable) first.
  std::vector<ObjectId> lru_order() const;

  std::vector<CachedObjectState> dump_objects() const override;
  std::string dump_text() const override;

  const CostModel& cost() const override { return cost_; }
  CostModel& cost() { return cost_; }

  /// Test hook: the chunk stored in a slot, or nullptr if the slot is free.
  const Chunk* chunk_at(SlotIndex slot) const;

 private:
  friend struct OpcCacheTestAccess;

  struct Entry {
    ObjectId object;
    std::size_t hash = 0;
    std::uint32_t last = 0;
    SlotIndex tail = kNoSlot;
    std::uint32_t lru_prev = kNoEntry;
    std::uint32_t lru_next = kNoEntry;
    bool used = false;
  };

  struct Slot {
    Chunk chunk;
    SlotIndex prev = kNoSlot;
    bool occupied = false;
  };

  static constexpr std::uint32_t kNoEntry = ~std::uint32_t{0};

  std::uint32_t find_entry(const ObjectId& object) const;
  std::uint32_t create_entry(const ObjectId& object);
  void remove_entry(std::uint32_t entry_index);
  void table_insert(std::uint32_t entry_index);
  void table_erase(const Entry& entry, std::uint32_t entry_index);

  void lru_unlink(std::uint32_t entry_index);
  void lru_push_head(std::uint32_t entry_index);
  void lru_push_tail(std::uint32_t entry_index);

  std::optional<SlotIndex> pop_free_slot();
  std::optional<SlotIndex> do_evict_tail_chunk(const ObjectId* exclude, OpCharge* charge_out);
  std::optional<std::size_t> do_evict_tail_object(OpCharge* charge_out);
  SlotIndex region_base(std::uint32_t entry_index) const;

  Options opt_;
  std::size_t region_size_ = 0;  // FixedContiguous slots per object

  std::vector<std::uint32_t> table_;  // bucket -> entry index or kNoEntry
  std::size_t bucket_mask_ = 0;
  std::vector<Entry> pool_;
  std::uint32_t entry_count_ = 0;
  std::uint32_t pool_free_ = kNoEntry;  // chained through lru_next
  std::uint32_t lru_head_ = kNoEntry;
  std::uint32_t lru_tail_ = kNoEntry;

  std::vector<Slot> slots_;
  SlotIndex free_head_ = kNoSlot;
  std::size_t occupied_ = 0;

  CostModel cost_;
};

}  // namespace opcsim
