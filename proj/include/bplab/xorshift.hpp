#pragma once

#include <array>
#include <cstdint>

namespace bplab {

// Marsaglia xorshift, 32-bit, shift triple (13, 17, 5). Each step's output is
// the new state. State must never be seeded with 0 (0 is a fixed point).
struct Xorshift32 {
  uint32_t state;

  explicit constexpr Xorshift32(uint32_t seed) : state(seed) {}

  constexpr uint32_t next() {
    uint32_t x = state;
    x ^= x << 13;
    x ^= x >> 17;
    x ^= x << 5;
    state = x;
    return x;
  }
};

// Seeds of the predictor's five PRNG instances.
inline constexpr std::array<uint32_t, 5> kPredictorRngSeeds = {
    2463534242u, 1850600128u, 3837179466u, 4290344314u, 614373416u};

}  // namespace bplab
