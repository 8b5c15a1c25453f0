#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "bplab/assert.hpp"
#include "bplab/bimodal.hpp"
#include "bplab/global_history.hpp"
#include "bplab/xorshift.hpp"

namespace bplab {

struct BatageConfig {
  unsigned num_banks = 8;
  std::vector<unsigned> history_lengths;  // default: geometric 4..256
  uint32_t entries_per_bank = 1024;       // power of two
  unsigned tag_bits = 10;
  uint8_t counter_max = 7;   // saturation bound of each dual-counter half
  uint32_t cat_max = 255;    // allocation-throttle bound
  uint32_t base_entries = 4096;   // bimodal base table size, power of two
  bool tie_break_longest = true;  // equal confidence -> longer history wins

  // Interpolates strictly increasing lengths on a geometric ladder.
  static std::vector<unsigned> geometric_lengths(unsigned banks, unsigned lmin,
                                                 unsigned lmax) {
    std::vector<unsigned> m(banks);
    m[0] = lmin;
    for (unsigned i = 1; i < banks; ++i) {
      const double l = lmin * std::pow(double(lmax) / lmin,
                                       double(i) / (banks - 1));
      m[i] = std::max<unsigned>(static_cast<unsigned>(l + 0.5), m[i - 1] + 1);
    }
    return m;
  }

  void finalize() {
    if (history_lengths.empty())
      history_lengths = geometric_lengths(num_banks, 4, 256);
    BPLAB_ASSERT(history_lengths.size() == num_banks,
                 "one history length per bank");
    for (size_t i = 1; i < history_lengths.size(); ++i)
      BPLAB_ASSERT(history_lengths[i] > history_lengths[i - 1],
                   "history lengths must be strictly increasing");
    BPLAB_ASSERT(entries_per_bank > 0 &&
                     (entries_per_bank & (entries_per_bank - 1)) == 0,
                 "entries_per_bank must be a power of two");
    BPLAB_ASSERT(tag_bits >= 2 && tag_bits <= 16, "tag width out of range");
    BPLAB_ASSERT(counter_max >= 1, "counter_max out of range");
    BPLAB_ASSERT(cat_max >= 1, "cat_max out of range");
    BPLAB_ASSERT(base_entries > 0 && (base_entries & (base_entries - 1)) == 0,
                 "base_entries must be a power of two");
  }
};

// Dual counter: how often this entry's branch went each way. Updates touch a
// single half; incrementing a saturated half instead decrements the other one
// so recent behavior is never lost.
struct DualCounter {
  uint8_t t = 0;
  uint8_t nt = 0;

  bool operator==(const DualCounter&) const = default;
};

enum class Confidence : uint8_t { Low = 0, Medium = 1, High = 2 };

// Estimated miss probability p = (min+1)/(sum+2), classified against 1/6 and
// 1/3 in integer arithmetic.
inline Confidence classify(DualCounter c) {
  const unsigned m = std::min(c.t, c.nt);
  const unsigned s = unsigned(c.t) + unsigned(c.nt);
  if (6 * (m + 1) <= s + 2) return Confidence::High;
  if (3 * (m + 1) <= s + 2) return Confidence::Medium;
  return Confidence::Low;
}

struct TaggedEntry {
  uint16_t tag = 0;
  DualCounter ctr;
};

struct BankKeys {
  uint32_t index;
  uint16_t tag;
};

// Everything the retirement-time update needs from the prediction, so no
// lookup has to be redone: the keys of every bank, which banks hit, and which
// entry made the call.
struct PredictMeta {
  uint32_t pc = 0;
  std::vector<BankKeys> keys;
  uint32_t hit_mask = 0;
  int chosen = -1;  // bank index, or kBaseBank for the bimodal base
  Confidence chosen_conf = Confidence::Low;
  bool predicted_taken = false;
  uint64_t generation = 0;  // state generation the meta was computed against
};

// BATAGE: a bimodal base plus tagged banks indexed by geometrically longer
// slices of the global history. The most confident hitting entry predicts;
// ties go to the longer history. Training happens at retirement, allocation
// is randomized and throttled, stale high-confidence victims decay.
class Batage {
 public:
  static constexpr int kBaseBank = -1;

  explicit Batage(BatageConfig cfg = {})
      : cfg_(std::move(cfg)),
        rngs_{Xorshift32(kPredictorRngSeeds[0]), Xorshift32(kPredictorRngSeeds[1]),
              Xorshift32(kPredictorRngSeeds[2]), Xorshift32(kPredictorRngSeeds[3]),
              Xorshift32(kPredictorRngSeeds[4])},
        base_(1) {
    cfg_.finalize();
    base_ = BimodalTable(cfg_.base_entries);
    log2_entries_ = 0;
    while ((1u << log2_entries_) < cfg_.entries_per_bank) ++log2_entries_;
    banks_.assign(cfg_.num_banks, std::vector<TaggedEntry>(cfg_.entries_per_bank));
  }

  // History laid out as three folds per bank: index, tag, tag-1 wide.
  GlobalHistory make_history() const {
    std::vector<FoldSpec> specs;
    specs.reserve(cfg_.num_banks * 3);
    for (unsigned L : cfg_.history_lengths) {
      specs.push_back({L, log2_entries_});
      specs.push_back({L, cfg_.tag_bits});
      specs.push_back({L, cfg_.tag_bits - 1});
    }
    return GlobalHistory(std::move(specs));
  }

  BankKeys keys_for(unsigned bank, uint32_t pc, const GlobalHistory& h) const {
    const uint32_t word = pc >> 2;
    const uint32_t idx =
        (word ^ (word >> log2_entries_) ^ h.fold(3 * bank)) &
        (cfg_.entries_per_bank - 1);
    const uint32_t tag =
        (word ^ (word >> cfg_.tag_bits) ^ h.fold(3 * bank + 1) ^
         (h.fold(3 * bank + 2) << 1)) &
        ((1u << cfg_.tag_bits) - 1);
    return {idx, static_cast<uint16_t>(tag)};
  }

  std::pair<bool, PredictMeta> predict(uint32_t pc,
                                       const GlobalHistory& h) const {
    PredictMeta meta;
    meta.pc = pc;
    meta.generation = updates_;
    meta.keys.resize(cfg_.num_banks);

    for (unsigned b = 0; b < cfg_.num_banks; ++b) {
      meta.keys[b] = keys_for(b, pc, h);
      const TaggedEntry& e = banks_[b][meta.keys[b].index];
      // An all-zero dual counter marks a never-allocated entry; it never hits.
      if (e.tag == meta.keys[b].tag && !(e.ctr.t == 0 && e.ctr.nt == 0))
        meta.hit_mask |= 1u << b;
    }

    // Candidates in priority order: tagged hits from longest history down,
    // then the base (history length 0). Higher confidence wins; on a tie the
    // earlier candidate is kept (tie_break_longest=false inverts this, which
    // model checking uses as a deliberate mutation).
    auto displaces = [&](Confidence challenger, Confidence incumbent) {
      return cfg_.tie_break_longest ? challenger > incumbent
                                    : challenger >= incumbent;
    };
    bool have = false;
    int chosen = kBaseBank;
    DualCounter chosen_ctr{};
    Confidence chosen_conf = Confidence::Low;
    for (int b = static_cast<int>(cfg_.num_banks) - 1; b >= 0; --b) {
      if (!(meta.hit_mask & (1u << b))) continue;
      const DualCounter c = banks_[b][meta.keys[b].index].ctr;
      if (!have || displaces(classify(c), chosen_conf)) {
        have = true;
        chosen = b;
        chosen_ctr = c;
        chosen_conf = classify(c);
      }
    }
    const DualCounter bd = base_dual(base_.counter_at(pc));
    if (!have || displaces(classify(bd), chosen_conf)) {
      chosen = kBaseBank;
      chosen_ctr = bd;
      chosen_conf = classify(bd);
    }

    meta.chosen = chosen;
    meta.chosen_conf = chosen_conf;
    meta.predicted_taken = chosen_ctr.t > chosen_ctr.nt;  // tie -> not taken
    return {meta.predicted_taken, meta};
  }

  // Retirement-time training. meta must come from a predict() against the
  // current state, in retirement order.
  void update(const PredictMeta& meta, bool outcome) {
    BPLAB_ASSERT(meta.generation == updates_,
                 "BATAGE update out of retirement order");
    const bool mispredicted = meta.predicted_taken != outcome;

    if (meta.chosen == kBaseBank)
      base_.update(meta.pc, outcome);
    else
      bump(banks_[meta.chosen][meta.keys[meta.chosen].index].ctr, outcome);

    if (mispredicted || meta.chosen_conf != Confidence::High)
      allocate(meta, outcome);

    ++updates_;
  }

  // --- inspection (tests, model checking, the equivalence digest) ---
  const TaggedEntry& entry(unsigned bank, uint32_t idx) const {
    return banks_[bank][idx];
  }
  TaggedEntry& entry_mut(unsigned bank, uint32_t idx) { return banks_[bank][idx]; }
  const BimodalTable& base() const { return base_; }
  BimodalTable& base_mut() { return base_; }
  uint32_t cat() const { return cat_; }
  const std::array<Xorshift32, 5>& rngs() const { return rngs_; }
  uint64_t update_count() const { return updates_; }
  const BatageConfig& config() const { return cfg_; }

  // The base predictor's 2-bit counter viewed as a dual counter, so one
  // confidence rule covers every entry. Saturated counters classify medium
  // (p = 1/5), weak ones low; the base never outranks a confident tagged
  // entry and loses medium ties to them by the longest-history rule.
  static DualCounter base_dual(uint8_t c) {
    return {c, static_cast<uint8_t>(3 - c)};
  }

 private:
  // Increment the outcome half; when saturated, decrement the other half
  // instead (if it is nonzero).
  void bump(DualCounter& c, bool taken) {
    uint8_t& inc = taken ? c.t : c.nt;
    uint8_t& other = taken ? c.nt : c.t;
    if (inc < cfg_.counter_max)
      ++inc;
    else if (other > 0)
      --other;
  }

  // Allocation, in this order: no candidate banks -> failure; CAT throttle
  // draw (PRNG #2); start-bank draw among longer banks (PRNG #1); scan upward
  // replacing the first non-high-confidence victim; each skipped
  // high-confidence victim decays with probability 1/4 (PRNG #3). CAT counts
  // failures up and successes down. PRNGs #4 and #5 are reserved.
  void allocate(const PredictMeta& meta, bool outcome) {
    const unsigned first = static_cast<unsigned>(meta.chosen + 1);
    if (first >= cfg_.num_banks) {
      cat_up();
      return;
    }
    if (rngs_[1].next() % cfg_.cat_max < cat_) return;  // throttled, no CAT change

    const unsigned span = cfg_.num_banks - first;
    const unsigned start = first + rngs_[0].next() % span;
    for (unsigned b = start; b < cfg_.num_banks; ++b) {
      TaggedEntry& victim = banks_[b][meta.keys[b].index];
      if (classify(victim.ctr) != Confidence::High) {
        victim.tag = meta.keys[b].tag;
        victim.ctr = outcome ? DualCounter{1, 0} : DualCounter{0, 1};
        cat_down();
        return;
      }
      if ((rngs_[2].next() & 3) == 0) decay(victim.ctr);
    }
    cat_up();
  }

  // Decay pulls the larger half down one step toward lower confidence.
  static void decay(DualCounter& c) {
    if (c.t >= c.nt && c.t > 0)
      --c.t;
    else if (c.nt > 0)
      --c.nt;
  }

  void cat_up() { cat_ = std::min(cat_ + 1, cfg_.cat_max); }
  void cat_down() { cat_ = cat_ > 0 ? cat_ - 1 : 0; }

  BatageConfig cfg_;
  unsigned log2_entries_ = 0;
  std::array<Xorshift32, 5> rngs_;
  BimodalTable base_;
  std::vector<std::vector<TaggedEntry>> banks_;
  uint32_t cat_ = 0;
  uint64_t updates_ = 0;
};

}  // namespace bplab
