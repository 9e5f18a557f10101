#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace opcsim {

/// Chunk sequence numbers fit a two-byte counter: ranks run 1..65536.
inline constexpr std::uint32_t kMaxChunkRank = 1u << 16;

/// Maximum segment size: one chunk occupies one MSS-sized slot.
inline constexpr std::uint32_t kDefaultMssBytes = 1500;

/// Name of a content object. Non-empty by construction when made through
/// make_object_id; default-constructed ids are placeholders and rejected by
/// every cache operation.
struct ObjectId {
  std::string name;

  friend bool operator==(const ObjectId& a, const ObjectId& b) { return a.name == b.name; }
  friend bool operator!=(const ObjectId& a, const ObjectId& b) { return a.name != b.name; }
  friend bool operator<(const ObjectId& a, const ObjectId& b) { return a.name < b.name; }
};

inline ObjectId make_object_id(std::string name) {
  if (name.empty()) throw std::invalid_argument("object id must be non-empty");
  return ObjectId{std::move(name)};
}

struct ObjectIdHash {
  std::size_t operator()(const ObjectId& id) const { return std::hash<std::string>{}(id.name); }
};

/// Identifies one chunk of an object by its 1-based position in the byte
/// stream. Chunks of an object are interchangeable only with themselves:
/// (object, rank) is the cache key everywhere.
struct ChunkId {
  ObjectId object;
  std::uint32_t rank = 0;

  friend bool operator==(const ChunkId& a, const ChunkId& b) {
    return a.rank == b.rank && a.object == b.object;
  }
  friend bool operator!=(const ChunkId& a, const ChunkId& b) { return !(a == b); }
};

inline ChunkId make_chunk_id(ObjectId object, std::uint32_t rank) {
  if (object.name.empty()) throw std::invalid_argument("chunk id requires a non-empty object id");
  if (rank == 0 || rank > kMaxChunkRank)
    throw std::invalid_argument("chunk rank must be in [1, 65536], got " + std::to_string(rank));
  return ChunkId{std::move(object), rank};
}

struct ChunkIdHash {
  std::size_t operator()(const ChunkId& id) const {
    std::size_t h = std::hash<std::string>{}(id.object.name);
    return h ^ (static_cast<std::size_t>(id.rank) * 0x9e3779b97f4a7c15ull);
  }
};

/// A data packet as the caches see it: identity, wire size, and an optional
/// payload (the simulator moves metadata only).
struct Chunk {
  ChunkId id;
  std::uint32_t size_bytes = kDefaultMssBytes;
  std::optional<std::vector<std::uint8_t>> payload;
};

inline Chunk make_chunk(ChunkId id, std::uint32_t size_bytes = kDefaultMssBytes,
                        std::optional<std::vector<std::uint8_t>> payload = std::nullopt,
                        std::uint32_t mss_bytes = kDefaultMssBytes) {
  if (id.object.name.empty() || id.rank == 0 || id.rank > kMaxChunkRank)
    throw std::invalid_argument("invalid chunk id");
  if (size_bytes == 0 || size_bytes > mss_bytes)
    throw std::invalid_argument("chunk size must be in [1, MSS]");
  return Chunk{std::move(id), size_bytes, std::move(payload)};
}

}  // namespace opcsim
