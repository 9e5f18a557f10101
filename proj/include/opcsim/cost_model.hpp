#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace opcsim {

/// Per-access latencies of the two memory tiers. Fast memory holds index
/// state, slow memory holds packet slots.
inline constexpr double kSramAccessNs = 0.45;
inline constexpr double kDramAccessNs = 55.0;

enum class Tier : std::uint8_t { Sram = 0, Dram = 1 };

/// Why an access happened. Every counted access carries exactly one cause so
/// per-cause totals partition the per-tier totals.
enum class Cause : std::uint8_t { Insert = 0, Evict = 1, Hit = 2, MissLookup = 3 };

inline const char* to_string(Tier t) { return t == Tier::Sram ? "sram" : "dram"; }

inline const char* to_string(Cause c) {
  switch (c) {
    case Cause::Insert: return "insert";
    case Cause::Evict: return "evict";
    case Cause::Hit: return "hit";
    default: return "miss_lookup";
  }
}

/// Accesses charged by a single cache operation.
struct OpCharge {
  std::uint64_t sram = 0;
  std::uint64_t dram = 0;

  double ns() const { return static_cast<double>(sram) * kSramAccessNs + static_cast<double>(dram) * kDramAccessNs; }

  OpCharge& operator+=(const OpCharge& o) {
    sram += o.sram;
    dram += o.dram;
    return *this;
  }
  friend OpCharge operator+(OpCharge a, const OpCharge& b) { return a += b; }
  friend bool operator==(const OpCharge& a, const OpCharge& b) { return a.sram == b.sram && a.dram == b.dram; }
};

/// Outcome of a cache lookup together with what it cost.
struct LookupResult {
  enum class Outcome : std::uint8_t { Hit, Miss } outcome = Outcome::Miss;
  OpCharge charge;

  bool hit() const { return outcome == Outcome::Hit; }
};

/// Monotone per-tier, per-cause access counters. Latency is always derived
/// from the counters, never accumulated separately, so the identity
/// total_ns == sram_total * 0.45 + dram_total * 55 holds by construction.
class CostModel {
 public:
  void record(Tier t, Cause c, std::uint64_t accesses) { counts_[index(t, c)] += accesses; }

  void record(Cause c, const OpCharge& charge) {
    counts_[index(Tier::Sram, c)] += charge.sram;
    counts_[index(Tier::Dram, c)] += charge.dram;
  }

  std::uint64_t count(Tier t, Cause c) const { return counts_[index(t, c)]; }

  std::uint64_t tier_total(Tier t) const {
    std::uint64_t sum = 0;
    for (int c = 0; c < 4; ++c) sum += counts_[index(t, static_cast<Cause>(c))];
    return sum;
  }

  double tier_ns(Tier t) const {
    return static_cast<double>(tier_total(t)) * (t == Tier::Sram ? kSramAccessNs : kDramAccessNs);
  }

  double total_ns() const { return tier_ns(Tier::Sram) + tier_ns(Tier::Dram); }

  CostModel& operator+=(const CostModel& o) {
    for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += o.counts_[i];
    return *this;
  }

 private:
  static std::size_t index(Tier t, Cause c) {
    return static_cast<std::size_t>(t) * 4 + static_cast<std::size_t>(c);
  }

  std::array<std::uint64_t, 8> counts_{};
};

}  // namespace opcsim
