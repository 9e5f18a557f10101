#include "opcsim/memory_config.hpp"

#include <stdexcept>
#include <string>

namespace opcsim {

CacheCapacity capacity_from_config(const MemoryConfig& config, Scheme scheme) {
  if (config.entry_bytes == 0) throw std::invalid_argument("entry_bytes must be positive");
  if (config.mss_bytes == 0) throw std::invalid_argument("mss_bytes must be positive");
  const std::uint32_t expected = scheme == Scheme::Lru ? kLruEntryBytes : kOpcEntryBytes;
  if (config.entry_bytes != expected)
    throw std::invalid_argument("entry_bytes " + std::to_string(config.entry_bytes) +
                                " does not match scheme (expected " + std::to_string(expected) + ")");

  CacheCapacity cap;
  cap.l1_slots = config.sram_bytes / config.entry_bytes;
  cap.l2_slots = config.dram_bytes / config.mss_bytes;
  if (scheme == Scheme::Lru && cap.l2_slots > cap.l1_slots) cap.l2_slots = cap.l1_slots;
  if (cap.l1_slots == 0)
    throw std::invalid_argument("sram_bytes " + std::to_string(config.sram_bytes) +
                                " yields zero index entries");
  if (cap.l2_slots == 0)
    throw std::invalid_argument("dram_bytes " + std::to_string(config.dram_bytes) +
                                " yields zero packet slots");
  return cap;
}

}  // namespace opcsim
