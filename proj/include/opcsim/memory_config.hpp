#pragma once

#include <cstdint>

#include "opcsim/chunk.hpp"

namespace opcsim {

enum class Scheme : std::uint8_t { Lru, Opc };

inline const char* to_string(Scheme s) { return s == Scheme::Lru ? "lru" : "opc"; }

/// Index entry footprints in fast memory. The chunk-level scheme keys every
/// slot individually; the object-level scheme pays two extra bytes per entry
/// for the sequence counter.
inline constexpr std::uint32_t kLruEntryBytes = 40;
inline constexpr std::uint32_t kOpcEntryBytes = 42;

/// Physical sizing of one cache: fast memory for the index, slow memory for
/// packet slots of one MSS each.
struct MemoryConfig {
  std::uint64_t sram_bytes = 0;
  std::uint64_t dram_bytes = 0;
  std::uint32_t entry_bytes = kLruEntryBytes;
  std::uint32_t mss_bytes = kDefaultMssBytes;

  static MemoryConfig for_scheme(Scheme s, std::uint64_t sram_bytes, std::uint64_t dram_bytes,
                                 std::uint32_t mss_bytes = kDefaultMssBytes) {
    return MemoryConfig{sram_bytes, dram_bytes,
                        s == Scheme::Lru ? kLruEntryBytes : kOpcEntryBytes, mss_bytes};
  }
};

struct CacheCapacity {
  std::uint64_t l1_slots = 0;
  std::uint64_t l2_slots = 0;
};

/// Translates byte budgets into slot counts: l1 = floor(sram / entry),
/// l2 = floor(dram / mss). The chunk-level scheme cannot index more slots
/// than it has entries, so its l2 is clamped to l1. Zero capacity on either
/// level is a configuration error.
CacheCapacity capacity_from_config(const MemoryConfig& config, Scheme scheme);

}  // namespace opcsim
