#pragma once

#include <cstdint>
#include <vector>

#include "bplab/assert.hpp"

namespace bplab {

// One folded register compresses the newest history_length outcome bits into
// output_width bits by XOR-ing width-sized chunks. Bit of age a (0 = newest)
// contributes at fold bit position a % output_width.
struct FoldSpec {
  unsigned history_length;
  unsigned output_width;
};

// Speculative global outcome history: a circular bit buffer plus a write
// pointer, with the folds maintained incrementally. Recovery restores the
// write pointer and the fold values; buffer bits behind the pointer are never
// erased, which is what makes the single-pointer scheme work.
//
// The buffer is sized to the next power of two >= max history length + 8 so
// that the handful of in-flight speculative writes of a short pipeline can
// never clobber live history (4 stages => at most 3 in flight).
class GlobalHistory {
 public:
  struct Checkpoint {
    uint32_t wptr = 0;
    uint64_t push_count = 0;
    std::vector<uint32_t> folds;
  };

  explicit GlobalHistory(std::vector<FoldSpec> specs, unsigned max_history = 1)
      : specs_(std::move(specs)), fold_vals_(specs_.size(), 0) {
    hmax_ = max_history;
    for (const auto& s : specs_) {
      BPLAB_ASSERT(s.history_length >= 1, "fold window must be nonempty");
      BPLAB_ASSERT(s.output_width >= 1 && s.output_width <= 32,
                   "fold width out of range");
      if (s.history_length > hmax_) hmax_ = s.history_length;
    }
    uint32_t size = 1;
    while (size < hmax_ + 8) size <<= 1;
    bits_.assign(size, 0);
  }

  // Jumps push 1, taken branches push 1, not-taken branches push 0.
  void push(bool outcome) {
    const uint32_t bmask = buffer_size() - 1;
    for (size_t i = 0; i < specs_.size(); ++i) {
      const FoldSpec& s = specs_[i];
      const uint32_t evicted = bits_[(wptr_ - s.history_length) & bmask];
      uint32_t f = rotl1(fold_vals_[i], s.output_width);
      f ^= static_cast<uint32_t>(evicted)
           << (s.history_length % s.output_width);
      f ^= static_cast<uint32_t>(outcome);
      fold_vals_[i] = f;
    }
    bits_[wptr_] = outcome ? 1 : 0;
    wptr_ = (wptr_ + 1) & bmask;
    ++pushes_;
  }

  // age 0 is the newest pushed bit. Bits never pushed read as 0.
  bool bit(unsigned age) const {
    BPLAB_ASSERT(age < hmax_, "history read beyond the configured window");
    return bits_[(wptr_ - 1 - age) & (buffer_size() - 1)] != 0;
  }

  uint32_t fold(size_t which) const { return fold_vals_[which]; }
  const std::vector<FoldSpec>& specs() const { return specs_; }

  Checkpoint checkpoint() const { return {wptr_, pushes_, fold_vals_}; }

  // Valid while at most buffer_size - max_history pushes have happened since
  // the checkpoint was taken; beyond that the checkpointed window has been
  // overwritten and the contract is broken.
  void restore(const Checkpoint& cp) {
    BPLAB_ASSERT(pushes_ - cp.push_count <= buffer_size() - hmax_,
                 "history checkpoint expired: speculative writes overran it");
    wptr_ = cp.wptr;
    fold_vals_ = cp.folds;
  }

  uint64_t push_count() const { return pushes_; }
  unsigned max_history() const { return hmax_; }
  uint32_t buffer_size() const { return static_cast<uint32_t>(bits_.size()); }

 private:
  static uint32_t rotl1(uint32_t v, unsigned w) {
    if (w == 1) return v & 1;
    const uint32_t mask = w == 32 ? 0xffffffffu : (1u << w) - 1;
    return ((v << 1) | (v >> (w - 1))) & mask;
  }

  std::vector<FoldSpec> specs_;
  std::vector<uint32_t> fold_vals_;
  std::vector<uint8_t> bits_;
  uint32_t wptr_ = 0;
  uint64_t pushes_ = 0;
  unsigned hmax_;
};

}  // namespace bplab
