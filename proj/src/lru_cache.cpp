#include "opcsim/lru_cache.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace opcsim {

namespace {

void validate_id(const ChunkId& id) {
  if (id.object.name.empty()) throw std::invalid_argument("chunk id has empty object id");
  if (id.rank == 0 || id.rank > kMaxChunkRank)
    throw std::invalid_argument("chunk rank out of range: " + std::to_string(id.rank));
}

}  // namespace

LruChunkCache::LruChunkCache(const Options& options)
    : opt_(options), capacity_(std::min(options.l1_slots, options.l2_slots)) {
  index_.reserve(capacity_);
}

LruChunkCache::LruChunkCache(const MemoryConfig& config)
    : LruChunkCache([&] {
        const CacheCapacity cap = capacity_from_config(config, Scheme::Lru);
        return Options{cap.l1_slots, cap.l2_slots};
      }()) {}

LookupResult LruChunkCache::lookup(const ChunkId& id) {
  validate_id(id);
  auto it = index_.find(id);
  if (it == index_.end()) {
    const OpCharge charge{1, 0};
    cost_.record(Cause::MissLookup, charge);
    return LookupResult{LookupResult::Outcome::Miss, charge};
  }
  list_.splice(list_.begin(), list_, it->second);
  const OpCharge charge{1, 1};
  cost_.record(Cause::Hit, charge);
  return LookupResult{LookupResult::Outcome::Hit, charge};
}

LruInsertResult LruChunkCache::insert(const Chunk& chunk) {
  validate_id(chunk.id);
  const OpCharge probe{1, 0};
  if (capacity_ == 0) {
    cost_.record(Cause::Insert, probe);
    return LruInsertResult{LruInsertOutcome::IgnoredNoCapacity, probe};
  }
  if (index_.count(chunk.id) != 0) {
    cost_.record(Cause::Insert, probe);
    return LruInsertResult{LruInsertOutcome::IgnoredDuplicate, probe};
  }
  bool evicted = false;
  if (index_.size() == capacity_) {
    index_.erase(list_.back().id);
    list_.pop_back();
    evicted = true;
  }
  list_.push_front(chunk);
  index_.emplace(chunk.id, list_.begin());
  const OpCharge stored{1, 1};
  cost_.record(Cause::Insert, stored);
  return LruInsertResult{evicted ? LruInsertOutcome::StoredWithEviction : LruInsertOutcome::Stored,
                         stored};
}

bool LruChunkCache::contains(const ChunkId& id) const {
  if (id.object.name.empty() || id.rank == 0) return false;
  return index_.count(id) != 0;
}

std::vector<ChunkId> LruChunkCache::lru_order() const {
  std::vector<ChunkId> out;
  out.reserve(list_.size());
  for (const Chunk& c : list_) out.push_back(c.id);
  return out;
}

std::vector<CachedObjectState> LruChunkCache::dump_objects() const {
  std::map<std::string, CachedObjectState> grouped;
  std::size_t pos = 0;
  for (const Chunk& c : list_) {
    auto [it, fresh] = grouped.try_emplace(c.id.object.name);
    if (fresh) {
      it->second.object = c.id.object;
      it->second.lru_position = pos;  // position of the object's freshest chunk
    }
    it->second.ranks.push_back(c.id.rank);
    ++pos;
  }
  std::vector<CachedObjectState> out;
  out.reserve(grouped.size());
  for (auto& [name, st] : grouped) {
    std::sort(st.ranks.begin(), st.ranks.end());
    out.push_back(std::move(st));
  }
  return out;
}

std::string LruChunkCache::dump_text() const {
  std::string out;
  std::size_t pos = 0;
  for (const Chunk& c : list_) {
    out += c.id.object.name;
    out += ", ";
    out += std::to_string(c.id.rank);
    out += ", ";
    out += std::to_string(pos);
    out += '\n';
    ++pos;
  }
  return out;
}

}  // namespace opcsim
