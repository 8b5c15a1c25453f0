#pragma once

#include <cstdint>
#include <vector>

#include "bplab/assert.hpp"

namespace bplab {

// Circular return address stack. All operations are total: pushing past the
// capacity silently overwrites the oldest entry, popping an unwritten slot
// yields its zero-initialized content. Recovery is a single saved
// top-of-stack pointer; entries themselves are never rolled back, so only a
// pop followed by a push loses data.
class ReturnAddressStack {
 public:
  using Checkpoint = uint32_t;

  explicit ReturnAddressStack(uint32_t capacity = 16)
      : entries_(capacity, 0), mask_(capacity - 1) {
    BPLAB_ASSERT(capacity > 0 && (capacity & mask_) == 0,
                 "RAS capacity must be a power of two");
  }

  void push(uint32_t addr) {
    tos_ = (tos_ + 1) & mask_;
    entries_[tos_] = addr;
  }

  uint32_t pop() {
    const uint32_t v = entries_[tos_];
    tos_ = (tos_ - 1) & mask_;
    return v;
  }

  uint32_t top() const { return entries_[tos_]; }

  Checkpoint snapshot() const { return tos_; }
  void restore(Checkpoint cp) { tos_ = cp & mask_; }

  uint32_t capacity() const { return mask_ + 1; }

 private:
  std::vector<uint32_t> entries_;
  uint32_t mask_;
  uint32_t tos_ = 0;
};

}  // namespace bplab
