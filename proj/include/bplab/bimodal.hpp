#pragma once

#include <cstdint>
#include <vector>

#include "bplab/assert.hpp"

namespace bplab {

// Table of 2-bit saturating counters indexed by the pc's word address.
// Counters start at 1 (weakly not-taken).
class BimodalTable {
 public:
  explicit BimodalTable(uint32_t entries = 4096) : counters_(entries, 1) {
    BPLAB_ASSERT(entries > 0 && (entries & (entries - 1)) == 0,
                 "bimodal table size must be a power of two");
  }

  bool predict(uint32_t pc) const { return counter_at(pc) >= 2; }

  void update(uint32_t pc, bool taken) {
    uint8_t& c = counters_[index(pc)];
    if (taken) {
      if (c < 3) ++c;
    } else {
      if (c > 0) --c;
    }
  }

  uint8_t counter_at(uint32_t pc) const { return counters_[index(pc)]; }
  uint32_t size() const { return static_cast<uint32_t>(counters_.size()); }

 private:
  uint32_t index(uint32_t pc) const {
    return (pc >> 2) & (static_cast<uint32_t>(counters_.size()) - 1);
  }

  std::vector<uint8_t> counters_;
};

}  // namespace bplab
