#include "opcsim/opc_cache.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <stdexcept>

namespace opcsim {

namespace {

void validate_id(const ChunkId& id) {
  if (id.object.name.empty()) throw std::invalid_argument("chunk id has empty object id");
  if (id.rank == 0 || id.rank > kMaxChunkRank)
    throw std::invalid_argument("chunk rank out of range: " + std::to_string(id.rank));
}

std::size_t bucket_count_for(std::size_t entries) {
  if (entries == 0) return 0;
  // Spare buckets keep probe sequences short even when the entry pool is
  // full; capacity itself is still bounded by the pool.
  std::size_t want = (entries * 4 + 2) / 3;
  if (want < 4) want = 4;
  return std::bit_ceil(want);
}

}  // namespace

OpcCache::OpcCache(const Options& options) : opt_(options) {
  if (opt_.l1_slots > (std::size_t{1} << 31) || opt_.l2_slots > (std::size_t{1} << 31))
    throw std::invalid_argument("cache capacity out of supported range");
  if (opt_.allocator == AllocatorMode::FixedContiguous && opt_.l1_slots > 0 &&
      opt_.l2_slots < opt_.l1_slots)
    throw std::invalid_argument("contiguous allocation needs at least one slot per index entry");

  region_size_ = opt_.l1_slots > 0 ? opt_.l2_slots / opt_.l1_slots : 0;

  const std::size_t buckets = bucket_count_for(opt_.l1_slots);
  table_.assign(buckets, kNoEntry);
  bucket_mask_ = buckets > 0 ? buckets - 1 : 0;

  pool_.resize(opt_.l1_slots);
  for (std::size_t i = 0; i < pool_.size(); ++i)
    pool_[i].lru_next = i + 1 < pool_.size() ? static_cast<std::uint32_t>(i + 1) : kNoEntry;
  pool_free_ = pool_.empty() ? kNoEntry : 0;

  slots_.resize(opt_.l2_slots);
  if (opt_.allocator == AllocatorMode::DynamicLinked) {
    for (std::size_t i = 0; i < slots_.size(); ++i)
      slots_[i].prev = i + 1 < slots_.size() ? static_cast<SlotIndex>(i + 1) : kNoSlot;
    free_head_ = slots_.empty() ? kNoSlot : 0;
  } else {
    free_head_ = kNoSlot;
  }
}

OpcCache::OpcCache(const MemoryConfig& config, AllocatorMode allocator, AdmitPosition admit)
    : OpcCache([&] {
        const CacheCapacity cap = capacity_from_config(config, Scheme::Opc);
        Options o;
        o.l1_slots = cap.l1_slots;
        o.l2_slots = cap.l2_slots;
        o.allocator = allocator;
        o.admit = admit;
        return o;
      }()) {}

std::uint32_t OpcCache::find_entry(const ObjectId& object) const {
  if (table_.empty()) return kNoEntry;
  const std::size_t h = std::hash<std::string>{}(object.name);
  std::size_t b = h & bucket_mask_;
  while (table_[b] != kNoEntry) {
    const Entry& e = pool_[table_[b]];
    if (e.hash == h && e.object.name == object.name) return table_[b];
    b = (b + 1) & bucket_mask_;
  }
  return kNoEntry;
}

void OpcCache::table_insert(std::uint32_t entry_index) {
  std::size_t b = pool_[entry_index].hash & bucket_mask_;
  while (table_[b] != kNoEntry) b = (b + 1) & bucket_mask_;
  table_[b] = entry_index;
}

void OpcCache::table_erase(const Entry& entry, std::uint32_t entry_index) {
  std::size_t b = entry.hash & bucket_mask_;
  while (table_[b] != entry_index) b = (b + 1) & bucket_mask_;
  table_[b] = kNoEntry;
  // Backward-shift deletion: pull displaced entries toward the hole so every
  // remaining entry stays reachable from its home bucket.
  std::size_t hole = b;
  std::size_t k = (b + 1) & bucket_mask_;
  while (table_[k] != kNoEntry) {
    const std::size_t home = pool_[table_[k]].hash & bucket_mask_;
    if (((k - home) & bucket_mask_) >= ((k - hole) & bucket_mask_)) {
      table_[hole] = table_[k];
      table_[k] = kNoEntry;
      hole = k;
    }
    k = (k + 1) & bucket_mask_;
  }
}

std::uint32_t OpcCache::create_entry(const ObjectId& object) {
  assert(pool_free_ != kNoEntry);
  const std::uint32_t idx = pool_free_;
  pool_free_ = pool_[idx].lru_next;
  Entry& e = pool_[idx];
  e.object = object;
  e.hash = std::hash<std::string>{}(object.name);
  e.last = 0;
  e.tail = kNoSlot;
  e.lru_prev = kNoEntry;
  e.lru_next = kNoEntry;
  e.used = true;
  table_insert(idx);
  ++entry_count_;
  if (opt_.admit == AdmitPosition::LruHead)
    lru_push_head(idx);
  else
    lru_push_tail(idx);
  return idx;
}

void OpcCache::remove_entry(std::uint32_t entry_index) {
  Entry& e = pool_[entry_index];
  table_erase(e, entry_index);
  lru_unlink(entry_index);
  e.used = false;
  e.object = ObjectId{};
  e.tail = kNoSlot;
  e.last = 0;
  e.lru_next = pool_free_;
  pool_free_ = entry_index;
  --entry_count_;
}

void OpcCache::lru_unlink(std::uint32_t i) {
  Entry& e = pool_[i];
  if (e.lru_prev != kNoEntry)
    pool_[e.lru_prev].lru_next = e.lru_next;
  else
    lru_head_ = e.lru_next;
  if (e.lru_next != kNoEntry)
    pool_[e.lru_next].lru_prev = e.lru_prev;
  else
    lru_tail_ = e.lru_prev;
  e.lru_prev = kNoEntry;
  e.lru_next = kNoEntry;
}

void OpcCache::lru_push_head(std::uint32_t i) {
  Entry& e = pool_[i];
  e.lru_prev = kNoEntry;
  e.lru_next = lru_head_;
  if (lru_head_ != kNoEntry) pool_[lru_head_].lru_prev = i;
  lru_head_ = i;
  if (lru_tail_ == kNoEntry) lru_tail_ = i;
}

void OpcCache::lru_push_tail(std::uint32_t i) {
  Entry& e = pool_[i];
  e.lru_next = kNoEntry;
  e.lru_prev = lru_tail_;
  if (lru_tail_ != kNoEntry) pool_[lru_tail_].lru_next = i;
  lru_tail_ = i;
  if (lru_head_ == kNoEntry) lru_head_ = i;
}

LookupResult OpcCache::lookup(const ChunkId& id) {
  validate_id(id);
  const std::uint32_t idx = find_entry(id.object);
  if (idx != kNoEntry && pool_[idx].last >= id.rank) {
    const std::uint64_t dram = opt_.allocator == AllocatorMode::DynamicLinked
                                   ? 1 + static_cast<std::uint64_t>(pool_[idx].last - id.rank)
                                   : 1;
    const OpCharge charge{1, dram};
    cost_.record(Cause::Hit, charge);
    if (lru_head_ != idx) {
      lru_unlink(idx);
      lru_push_head(idx);
    }
    return LookupResult{LookupResult::Outcome::Hit, charge};
  }
  const OpCharge charge{1, 0};
  cost_.record(Cause::MissLookup, charge);
  return LookupResult{LookupResult::Outcome::Miss, charge};
}

bool OpcCache::contains(const ChunkId& id) const {
  if (id.object.name.empty() || id.rank == 0) return false;
  const std::uint32_t idx = find_entry(id.object);
  return idx != kNoEntry && pool_[idx].last >= id.rank;
}

std::optional<std::uint32_t> OpcCache::last_chunk_id(const ObjectId& object) const {
  const std::uint32_t idx = find_entry(object);
  if (idx == kNoEntry) return std::nullopt;
  return pool_[idx].last;
}

std::optional<SlotIndex> OpcCache::pop_free_slot() {
  if (free_head_ == kNoSlot) return std::nullopt;
  const SlotIndex s = free_head_;
  free_head_ = slots_[s].prev;
  return s;
}

std::optional<SlotIndex> OpcCache::do_evict_tail_chunk(const ObjectId* exclude,
                                                       OpCharge* charge_out) {
  std::uint32_t victim = lru_tail_;
  while (victim != kNoEntry && exclude && pool_[victim].object == *exclude)
    victim = pool_[victim].lru_prev;
  if (victim == kNoEntry) return std::nullopt;

  Entry& e = pool_[victim];
  const SlotIndex s = e.tail;
  e.tail = slots_[s].prev;
  e.last -= 1;
  slots_[s].occupied = false;
  --occupied_;
  if (opt_.allocator == AllocatorMode::DynamicLinked) {
    slots_[s].prev = free_head_;
    free_head_ = s;
  }
  if (e.last == 0) remove_entry(victim);
  cost_.record(Cause::Evict, OpCharge{1, 1});
  if (charge_out) *charge_out += OpCharge{1, 1};
  return s;
}

std::optional<SlotIndex> OpcCache::evict_tail_chunk() { return do_evict_tail_chunk(nullptr, nullptr); }

std::optional<SlotIndex> OpcCache::evict_tail_chunk(const ObjectId& exclude) {
  return do_evict_tail_chunk(&exclude, nullptr);
}

std::optional<std::size_t> OpcCache::evict_tail_object() { return do_evict_tail_object(nullptr); }

std::optional<std::size_t> OpcCache::do_evict_tail_object(OpCharge* charge_out) {
  if (lru_tail_ == kNoEntry) return std::nullopt;
  const std::uint32_t victim = lru_tail_;
  Entry& e = pool_[victim];

  std::size_t n = 0;
  SlotIndex s = e.tail;
  SlotIndex chain_head = kNoSlot;  // the rank-1 slot, end of the prev chain
  while (s != kNoSlot) {
    slots_[s].occupied = false;
    chain_head = s;
    ++n;
    s = slots_[s].prev;
  }
  occupied_ -= n;
  if (opt_.allocator == AllocatorMode::DynamicLinked && n > 0) {
    // One pointer write splices the whole chain onto the free list: the
    // chain already links tail -> ... -> rank 1, so only the rank-1 slot
    // needs to point at the old free head.
    slots_[chain_head].prev = free_head_;
    free_head_ = e.tail;
  }
  cost_.record(Tier::Sram, Cause::Evict, n);
  cost_.record(Tier::Dram, Cause::Evict, 1);
  if (charge_out) *charge_out += OpCharge{n, 1};
  remove_entry(victim);
  return n;
}

SlotIndex OpcCache::region_base(std::uint32_t entry_index) const {
  return static_cast<SlotIndex>(static_cast<std::size_t>(entry_index) * region_size_);
}

InsertResult OpcCache::insert(const Chunk& chunk) {
  validate_id(chunk.id);
  const OpCharge probe{1, 0};

  if (opt_.l1_slots == 0 || opt_.l2_slots == 0) {
    cost_.record(Cause::Insert, probe);
    return InsertResult{InsertOutcome::IgnoredOutOfSpace, probe};
  }

  const std::uint32_t idx = find_entry(chunk.id.object);
  if (idx != kNoEntry) {
    Entry& e = pool_[idx];
    if (chunk.id.rank <= e.last) {
      cost_.record(Cause::Insert, probe);
      return InsertResult{InsertOutcome::IgnoredDuplicate, probe};
    }
    if (chunk.id.rank != e.last + 1) {
      cost_.record(Cause::Insert, probe);
      return InsertResult{InsertOutcome::IgnoredOutOfSequence, probe};
    }

    SlotIndex slot = kNoSlot;
    OpCharge total{};  // the returned charge covers induced evictions too
    if (opt_.allocator == AllocatorMode::DynamicLinked) {
      if (auto s = pop_free_slot()) {
        slot = *s;
      } else if (do_evict_tail_chunk(&chunk.id.object, &total)) {
        slot = *pop_free_slot();
      } else {
        cost_.record(Cause::Insert, probe);
        return InsertResult{InsertOutcome::IgnoredSelfVictim, probe};
      }
      slots_[slot].prev = e.tail;
    } else {
      if (e.last >= region_size_) {
        cost_.record(Cause::Insert, probe);
        return InsertResult{InsertOutcome::IgnoredOutOfSpace, probe};
      }
      slot = region_base(idx) + e.last;
      slots_[slot].prev = e.last > 0 ? slot - 1 : kNoSlot;
    }
    slots_[slot].chunk = chunk;
    slots_[slot].occupied = true;
    ++occupied_;
    e.tail = slot;
    e.last += 1;
    const OpCharge stored{1, 1};
    cost_.record(Cause::Insert, stored);
    total += stored;
    return InsertResult{InsertOutcome::StoredAppend, total};
  }

  if (chunk.id.rank != 1) {
    cost_.record(Cause::Insert, probe);
    return InsertResult{InsertOutcome::IgnoredOutOfSequence, probe};
  }

  OpCharge total{};
  if (entry_count_ == opt_.l1_slots) do_evict_tail_object(&total);

  SlotIndex slot = kNoSlot;
  std::uint32_t entry = kNoEntry;
  if (opt_.allocator == AllocatorMode::DynamicLinked) {
    if (auto s = pop_free_slot()) {
      slot = *s;
    } else if (do_evict_tail_chunk(&chunk.id.object, &total)) {
      slot = *pop_free_slot();
    } else {
      cost_.record(Cause::Insert, probe);
      return InsertResult{InsertOutcome::IgnoredOutOfSpace, probe};
    }
    entry = create_entry(chunk.id.object);
  } else {
    entry = create_entry(chunk.id.object);
    slot = region_base(entry);
    assert(!slots_[slot].occupied);
  }
  slots_[slot].chunk = chunk;
  slots_[slot].prev = kNoSlot;
  slots_[slot].occupied = true;
  ++occupied_;
  pool_[entry].tail = slot;
  pool_[entry].last = 1;
  const OpCharge stored{1, 1};
  cost_.record(Cause::Insert, stored);
  total += stored;
  return InsertResult{InsertOutcome::StoredNew, total};
}

std::size_t OpcCache::free_slot_count() const { return opt_.l2_slots - occupied_; }

std::vector<ObjectId> OpcCache::lru_order() const {
  std::vector<ObjectId> out;
  out.reserve(entry_count_);
  for (std::uint32_t i = lru_head_; i != kNoEntry; i = pool_[i].lru_next) out.push_back(pool_[i].object);
  return out;
}

std::vector<CachedObjectState> OpcCache::dump_objects() const {
  std::vector<CachedObjectState> out;
  out.reserve(entry_count_);
  std::size_t pos = 0;
  for (std::uint32_t i = lru_head_; i != kNoEntry; i = pool_[i].lru_next, ++pos) {
    CachedObjectState st;
    st.object = pool_[i].object;
    st.last_contiguous = pool_[i].last;
    st.lru_position = pos;
    out.push_back(std::move(st));
  }
  std::sort(out.begin(), out.end(),
            [](const CachedObjectState& a, const CachedObjectState& b) { return a.object < b.object; });
  return out;
}

std::string OpcCache::dump_text() const {
  std::string out;
  std::size_t pos = 0;
  for (std::uint32_t i = lru_head_; i != kNoEntry; i = pool_[i].lru_next, ++pos) {
    out += pool_[i].object.name;
    out += ", ";
    out += std::to_string(pool_[i].last);
    out += ", ";
    out += std::to_string(pos);
    out += '\n';
  }
  return out;
}

const Chunk* OpcCache::chunk_at(SlotIndex slot) const {
  if (slot >= slots_.size() || !slots_[slot].occupied) return nullptr;
  return &slots_[slot].chunk;
}

IntegrityReport OpcCache::verify_integrity() const {
  IntegrityReport rep;
  rep.entries = entry_count_;
  rep.occupied_slots = occupied_;
  rep.free_slots = opt_.l2_slots - occupied_;
  auto fail = [&rep](std::string msg) { rep.violations.push_back(std::move(msg)); };

  std::vector<std::uint8_t> seen(slots_.size(), 0);
  std::size_t used_entries = 0;
  std::uint64_t rank_sum = 0;

  for (std::uint32_t i = 0; i < pool_.size(); ++i) {
    const Entry& e = pool_[i];
    if (!e.used) continue;
    ++used_entries;
    if (e.last == 0) {
      fail("entry '" + e.object.name + "' has an empty chain");
      continue;
    }
    rank_sum += e.last;
    if (find_entry(e.object) != i) fail("entry '" + e.object.name + "' not findable from its home bucket");

    std::uint32_t expected = e.last;
    SlotIndex s = e.tail;
    std::size_t steps = 0;
    while (s != kNoSlot && steps < static_cast<std::size_t>(e.last) + 1) {
      if (s >= slots_.size()) {
        fail("entry '" + e.object.name + "' chain leaves the slot array");
        break;
      }
      if (seen[s]) {
        fail("slot " + std::to_string(s) + " is on two chains or the chain cycles");
        break;
      }
      seen[s] = 1;
      const Slot& slot = slots_[s];
      if (!slot.occupied) fail("entry '" + e.object.name + "' chain passes a free slot");
      if (slot.chunk.id.object != e.object) fail("slot " + std::to_string(s) + " holds a foreign chunk");
      if (slot.chunk.id.rank != expected)
        fail("entry '" + e.object.name + "' expected rank " + std::to_string(expected) + " got " +
             std::to_string(slot.chunk.id.rank));
      --expected;
      ++steps;
      s = slots_[s].prev;
    }
    if (steps != e.last || expected != 0)
      fail("entry '" + e.object.name + "' chain length " + std::to_string(steps) +
           " != last_chunk_id " + std::to_string(e.last));
  }

  if (used_entries != entry_count_) fail("entry count mismatch");
  if (rank_sum != occupied_) fail("sum of last_chunk_id != occupied slots");

  std::size_t occupied_flags = 0;
  for (std::size_t s = 0; s < slots_.size(); ++s) {
    if (slots_[s].occupied) {
      ++occupied_flags;
      if (!seen[s]) fail("occupied slot " + std::to_string(s) + " belongs to no chain");
    }
  }
  if (occupied_flags != occupied_) fail("occupied flag accounting mismatch");

  if (opt_.allocator == AllocatorMode::DynamicLinked) {
    std::size_t free_count = 0;
    SlotIndex s = free_head_;
    while (s != kNoSlot && free_count <= slots_.size()) {
      if (s >= slots_.size()) {
        fail("free list leaves the slot array");
        break;
      }
      if (slots_[s].occupied) fail("occupied slot " + std::to_string(s) + " on the free list");
      if (seen[s] == 2) {
        fail("free list cycles at slot " + std::to_string(s));
        break;
      }
      if (seen[s] == 1) fail("slot " + std::to_string(s) + " on both a chain and the free list");
      seen[s] = 2;
      ++free_count;
      s = slots_[s].prev;
    }
    if (free_count != opt_.l2_slots - occupied_)
      fail("free list length " + std::to_string(free_count) + " != l2 - occupied " +
           std::to_string(opt_.l2_slots - occupied_));
  }

  std::size_t forward = 0;
  std::uint32_t prev = kNoEntry;
  for (std::uint32_t i = lru_head_; i != kNoEntry; i = pool_[i].lru_next) {
    if (forward > entry_count_) {
      fail("eviction list cycles");
      break;
    }
    if (!pool_[i].used) fail("eviction list references a free entry");
    if (pool_[i].lru_prev != prev) fail("eviction list prev link broken at entry " + std::to_string(i));
    prev = i;
    ++forward;
  }
  if (forward <= entry_count_ && prev != lru_tail_) fail("eviction list tail pointer stale");
  if (forward != entry_count_) fail("eviction list length != entry count");

  return rep;
}

}  // namespace opcsim
