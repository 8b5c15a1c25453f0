#include <catch2/catch.hpp>

#include "bplab/xorshift.hpp"

using namespace bplab;

namespace {

// Independent evaluation of the recurrence: multiply/divide arithmetic in
// 64 bits instead of in-register shifts.
uint32_t oracle_step(uint32_t x) {
  uint64_t v = x;
  v = (v ^ ((v * 8192) & 0xFFFFFFFFull)) & 0xFFFFFFFFull;   // x ^= x << 13
  v = (v ^ (v / 131072)) & 0xFFFFFFFFull;                   // x ^= x >> 17
  v = (v ^ ((v * 32) & 0xFFFFFFFFull)) & 0xFFFFFFFFull;     // x ^= x << 5
  return static_cast<uint32_t>(v);
}

}  // namespace

TEST_CASE("first outputs match the directly evaluated recurrence") {
  for (const uint32_t seed : kPredictorRngSeeds) {
    Xorshift32 rng(seed);
    uint32_t x = seed;
    for (int i = 0; i < 100; ++i) {
      x = oracle_step(x);
      CAPTURE(seed, i);
      REQUIRE(rng.next() == x);
    }
  }
}

TEST_CASE("known first output of the default seed") {
  Xorshift32 rng(2463534242u);
  CHECK(rng.next() == 723471715u);
}

TEST_CASE("the five configured seeds") {
  REQUIRE(kPredictorRngSeeds.size() == 5);
  CHECK(kPredictorRngSeeds[0] == 2463534242u);
  CHECK(kPredictorRngSeeds[1] == 1850600128u);
  CHECK(kPredictorRngSeeds[2] == 3837179466u);
  CHECK(kPredictorRngSeeds[3] == 4290344314u);
  CHECK(kPredictorRngSeeds[4] == 614373416u);
}

TEST_CASE("state never reaches zero") {
  for (const uint32_t seed : kPredictorRngSeeds) {
    Xorshift32 rng(seed);
    for (int i = 0; i < 10000; ++i) REQUIRE(rng.next() != 0);
  }
}
