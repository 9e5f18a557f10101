#include <string>
#include <vector>

#include "doctest.h"
#include "opcsim/lru_cache.hpp"
#include "opcsim/rng.hpp"
#include "reference_models.hpp"

using namespace opcsim;

namespace {

LruChunkCache make_lru(std::size_t l1, std::size_t l2) {
  return LruChunkCache(LruChunkCache::Options{l1, l2});
}

Chunk chunk_of(const std::string& name, std::uint32_t rank) {
  return make_chunk(make_chunk_id(make_object_id(name), rank));
}

ChunkId id_of(const std::string& name, std::uint32_t rank) {
  return make_chunk_id(make_object_id(name), rank);
}

OpCharge charge(std::uint64_t sram, std::uint64_t dram) { return OpCharge{sram, dram}; }

}  // namespace

TEST_SUITE("lru_cache") {

TEST_CASE("stores chunks independently, no order requirement") {
  LruChunkCache c = make_lru(8, 8);
  CHECK(c.insert(chunk_of("a", 5)).outcome == LruInsertOutcome::Stored);  // mid-stream is fine
  CHECK(c.insert(chunk_of("a", 2)).outcome == LruInsertOutcome::Stored);
  CHECK(c.insert(chunk_of("a", 5)).outcome == LruInsertOutcome::IgnoredDuplicate);
  CHECK(c.contains(id_of("a", 5)));
  CHECK_FALSE(c.contains(id_of("a", 1)));
  CHECK(c.occupied_slots() == 2);
}

TEST_CASE("evicts the least recently used chunk") {
  LruChunkCache c = make_lru(3, 3);
  CHECK(c.insert(chunk_of("a", 1)).outcome == LruInsertOutcome::Stored);
  CHECK(c.insert(chunk_of("b", 1)).outcome == LruInsertOutcome::Stored);
  CHECK(c.insert(chunk_of("c", 1)).outcome == LruInsertOutcome::Stored);

  CHECK(c.lookup(id_of("a", 1)).hit());  // refresh a; b is now the tail
  CHECK(c.insert(chunk_of("d", 1)).outcome == LruInsertOutcome::StoredWithEviction);
  CHECK_FALSE(c.contains(id_of("b", 1)));
  CHECK(c.contains(id_of("a", 1)));
  CHECK(c.contains(id_of("c", 1)));
  CHECK(c.contains(id_of("d", 1)));
}

TEST_CASE("charges: hit 1+1, store 1+1, ignore and miss 1+0, eviction free") {
  LruChunkCache c = make_lru(2, 2);
  CHECK(c.insert(chunk_of("a", 1)).charge == charge(1, 1));
  CHECK(c.insert(chunk_of("a", 1)).charge == charge(1, 0));
  CHECK(c.lookup(id_of("a", 1)).charge == charge(1, 1));
  CHECK(c.lookup(id_of("x", 1)).charge == charge(1, 0));

  c.insert(chunk_of("b", 1));
  const LruInsertResult r = c.insert(chunk_of("c", 1));  // evicts a
  CHECK(r.outcome == LruInsertOutcome::StoredWithEviction);
  CHECK(r.charge == charge(1, 1));  // discarding the tail costs nothing extra

  // totals follow the per-op charges; evictions never touch the counters
  CHECK(c.cost().count(Tier::Sram, Cause::Evict) == 0);
  CHECK(c.cost().count(Tier::Dram, Cause::Evict) == 0);
  CHECK(c.cost().tier_total(Tier::Sram) == 6);
  CHECK(c.cost().tier_total(Tier::Dram) == 4);
}

TEST_CASE("capacity is the smaller of the two levels") {
  CHECK(make_lru(4, 100).l1_capacity() == 4);

  LruChunkCache c = make_lru(4, 100);
  for (std::uint32_t r = 1; r <= 10; ++r) c.insert(chunk_of("a", r));
  CHECK(c.occupied_slots() == 4);

  LruChunkCache none = make_lru(0, 0);
  CHECK(none.insert(chunk_of("a", 1)).outcome == LruInsertOutcome::IgnoredNoCapacity);
  CHECK_FALSE(none.lookup(id_of("a", 1)).hit());
}

TEST_CASE("dump groups chunks per object with explicit ranks") {
  LruChunkCache c = make_lru(8, 8);
  c.insert(chunk_of("b", 9));
  c.insert(chunk_of("b", 2));
  c.insert(chunk_of("b", 3));
  c.insert(chunk_of("a", 1));

  const std::vector<CachedObjectState> objs = c.dump_objects();
  REQUIRE(objs.size() == 2);
  CHECK(objs[0].object.name == "a");
  CHECK(objs[0].ranks_repr() == "1");
  CHECK(objs[1].object.name == "b");
  CHECK(objs[1].ranks_repr() == "2-3;9");
  CHECK(objs[1].chunk_count() == 3);
  CHECK(objs[1].holds_rank(9));
  CHECK_FALSE(objs[1].holds_rank(4));
  CHECK(objs[1].lru_position == 1);  // freshest 'b' chunk sits behind 'a'
}

TEST_CASE("randomized parity with the naive model" * doctest::timeout(60)) {
  for (std::size_t cap : {1, 3, 16, 64}) {
    LruChunkCache real = make_lru(cap, cap);
    refmodel::NaiveChunkLru naive(cap);
    Rng rng(99 + cap);
    const std::string names[] = {"u", "v", "w"};

    for (int step = 0; step < 8000; ++step) {
      const std::string& name = names[rng() % 3];
      const std::uint32_t rank = 1 + rng() % 8;
      CAPTURE(step);
      if (rng() % 2 == 0) {
        const LruInsertResult got = real.insert(chunk_of(name, rank));
        const refmodel::Op want = naive.insert(name, rank);
        CHECK((got.outcome == LruInsertOutcome::Stored ||
               got.outcome == LruInsertOutcome::StoredWithEviction) == want.hit_or_stored);
        CHECK(got.charge.sram == want.sram);
        CHECK(got.charge.dram == want.dram);
      } else {
        const LookupResult got = real.lookup(id_of(name, rank));
        const refmodel::Op want = naive.lookup(name, rank);
        CHECK(got.hit() == want.hit_or_stored);
        CHECK(got.charge.sram == want.sram);
        CHECK(got.charge.dram == want.dram);
      }
      CHECK(real.occupied_slots() == naive.size());
      if (step % 509 == 0) {
        const std::vector<ChunkId> order = real.lru_order();
        const auto expect = naive.order();
        REQUIRE(order.size() == expect.size());
        for (std::size_t i = 0; i < order.size(); ++i) {
          CHECK(order[i].object.name == expect[i].first);
          CHECK(order[i].rank == expect[i].second);
        }
      }
    }
  }
}

}  // TEST_SUITE
