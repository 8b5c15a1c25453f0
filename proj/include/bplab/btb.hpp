#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bplab/assert.hpp"
#include "bplab/core.hpp"

namespace bplab {

struct BtbConfig {
  uint32_t jump_entries = 512;    // power of two
  uint32_t branch_entries = 512;  // power of two
  unsigned tag_bits = 12;
  // Whether indirect non-return jumps are inserted with their last observed
  // target. Off leaves them unpredicted; exposed as an ablation knob.
  bool store_indirect_targets = true;
};

enum class BtbKind : uint8_t { Branch, Jump, Return };

// target: for Branch it is reconstructed as pc + stored offset; for Jump the
// full stored target; for Return it is meaningless (the frontend consults the
// RAS instead).
struct BtbHit {
  BtbKind kind;
  uint32_t target;
};

// Direct-mapped BTB, partitioned: branches store only a 12-bit offset
// (half-word units, the B-immediate range), jumps and returns store a full
// entry in their own memory. Only retired, taken transfers are inserted.
class Btb {
 public:
  explicit Btb(BtbConfig cfg = {}) : cfg_(cfg) {
    BPLAB_ASSERT(is_pow2(cfg.jump_entries) && is_pow2(cfg.branch_entries),
                 "BTB partition sizes must be powers of two");
    BPLAB_ASSERT(cfg.tag_bits >= 1 && cfg.tag_bits <= 20, "bad tag width");
    jumps_.resize(cfg.jump_entries);
    branches_.resize(cfg.branch_entries);
  }

  std::optional<BtbHit> lookup(uint32_t pc) const {
    const uint32_t word = pc >> 2;
    std::optional<BtbHit> hit;

    const BranchEntry& be = branches_[word & (cfg_.branch_entries - 1)];
    if (be.valid && be.tag == tag_of(word, cfg_.branch_entries))
      hit = BtbHit{BtbKind::Branch,
                   pc + static_cast<uint32_t>(static_cast<int32_t>(be.offset) * 2)};

    // On a stale alias hitting both partitions, the jump partition wins.
    const JumpEntry& je = jumps_[word & (cfg_.jump_entries - 1)];
    if (je.valid && je.tag == tag_of(word, cfg_.jump_entries))
      hit = BtbHit{je.is_return ? BtbKind::Return : BtbKind::Jump, je.target};

    return hit;
  }

  // Retirement-only insertion policy: taken branches, jumps and returns are
  // added; a not-taken branch leaves the BTB untouched.
  void insert_on_retire(const RetireEvent& ev) {
    BPLAB_ASSERT(ev.ct.has_value(), "insert_on_retire needs a control transfer");
    const DecodedCt& ct = *ev.ct;
    const uint32_t word = ev.pc >> 2;

    if (ct.kind == CtKind::CondBranch) {
      if (!ev.taken) return;
      const int32_t off = ct.imm / 2;  // B-immediate is even, 13 bits
      BPLAB_ASSERT(off >= -2048 && off <= 2047, "branch offset exceeds 12 bits");
      BranchEntry& be = branches_[word & (cfg_.branch_entries - 1)];
      be = {true, tag_of(word, cfg_.branch_entries),
            static_cast<int16_t>(off)};
      return;
    }
    if (ct.kind == CtKind::IndirectJump && !ct.is_return &&
        !cfg_.store_indirect_targets)
      return;
    JumpEntry& je = jumps_[word & (cfg_.jump_entries - 1)];
    je = {true, tag_of(word, cfg_.jump_entries), ct.is_return,
          ct.is_return ? 0 : ev.target};
  }

  // FNV-1a over the full table state; used by insertion-policy tests.
  uint64_t digest() const {
    uint64_t h = 0xcbf29ce484222325ull;
    auto mix = [&](uint64_t v) {
      h ^= v;
      h *= 0x100000001b3ull;
    };
    for (const auto& e : jumps_) {
      mix(e.valid);
      mix(e.tag);
      mix(e.is_return);
      mix(e.target);
    }
    for (const auto& e : branches_) {
      mix(e.valid);
      mix(e.tag);
      mix(static_cast<uint16_t>(e.offset));
    }
    return h;
  }

  const BtbConfig& config() const { return cfg_; }

 private:
  struct JumpEntry {
    bool valid = false;
    uint32_t tag = 0;
    bool is_return = false;
    uint32_t target = 0;
  };
  struct BranchEntry {
    bool valid = false;
    uint32_t tag = 0;
    int16_t offset = 0;
  };

  static bool is_pow2(uint32_t v) { return v && (v & (v - 1)) == 0; }

  uint32_t tag_of(uint32_t word, uint32_t entries) const {
    uint32_t idx_bits = 0;
    while ((1u << idx_bits) < entries) ++idx_bits;
    return (word >> idx_bits) & ((1u << cfg_.tag_bits) - 1);
  }

  BtbConfig cfg_;
  std::vector<JumpEntry> jumps_;
  std::vector<BranchEntry> branches_;
};

}  // namespace bplab
