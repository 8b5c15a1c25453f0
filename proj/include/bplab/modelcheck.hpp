#pragma once

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bplab/assert.hpp"
#include "bplab/batage.hpp"
#include "bplab/global_history.hpp"
#include "bplab/xorshift.hpp"

namespace bplab {

// Naive reference model of the BATAGE semantics: the history is a plain
// growing vector, every fold is recomputed from scratch at use, prediction
// and update follow the rules step by step with no shared machinery. Slow on
// purpose; it exists to disagree with the optimized implementation when one
// of them is wrong.
class ReferenceBatage {
 public:
  explicit ReferenceBatage(BatageConfig cfg)
      : cfg_(std::move(cfg)),
        rng0_(kPredictorRngSeeds[0]),
        rng1_(kPredictorRngSeeds[1]),
        rng2_(kPredictorRngSeeds[2]) {
    cfg_.finalize();
    log2_entries_ = 0;
    while ((1u << log2_entries_) < cfg_.entries_per_bank) ++log2_entries_;
    banks_.assign(cfg_.num_banks,
                  std::vector<TaggedEntry>(cfg_.entries_per_bank));
    base_counters_.assign(cfg_.base_entries, 1);
  }

  void push(bool outcome) { history_.push_back(outcome ? 1 : 0); }

  size_t history_checkpoint() const { return history_.size(); }
  void history_restore(size_t cp) { history_.resize(cp); }

  // One prediction followed by its retirement update.
  bool predict_update(uint32_t pc, bool outcome) {
    std::vector<uint32_t> idx(cfg_.num_banks), tag(cfg_.num_banks);
    std::vector<bool> hits(cfg_.num_banks);
    for (unsigned b = 0; b < cfg_.num_banks; ++b) {
      idx[b] = index_of(b, pc);
      tag[b] = tag_of(b, pc);
      const TaggedEntry& e = banks_[b][idx[b]];
      hits[b] = e.tag == tag[b] && !(e.ctr.t == 0 && e.ctr.nt == 0);
    }

    // Pick the most confident entry; longer history wins ties; the bimodal
    // base sits at the end of the priority order.
    int chosen = -1;
    bool any = false;
    Confidence best = Confidence::Low;
    for (int b = static_cast<int>(cfg_.num_banks) - 1; b >= 0; --b) {
      if (!hits[b]) continue;
      const Confidence c = classify(banks_[b][idx[b]].ctr);
      const bool wins = cfg_.tie_break_longest ? c > best : c >= best;
      if (!any || wins) {
        any = true;
        chosen = b;
        best = c;
      }
    }
    const DualCounter base_ctr = Batage::base_dual(base_counter(pc));
    {
      const Confidence c = classify(base_ctr);
      const bool wins = cfg_.tie_break_longest ? c > best : c >= best;
      if (!any || wins) {
        chosen = -1;
        best = c;
      }
    }

    const DualCounter decider =
        chosen < 0 ? base_ctr : banks_[chosen][idx[chosen]].ctr;
    const bool prediction = decider.t > decider.nt;

    // --- update ---
    if (chosen < 0) {
      uint8_t& c = base_counters_[(pc >> 2) & (base_counters_.size() - 1)];
      if (outcome && c < 3) ++c;
      if (!outcome && c > 0) --c;
    } else {
      DualCounter& c = banks_[chosen][idx[chosen]].ctr;
      uint8_t& inc = outcome ? c.t : c.nt;
      uint8_t& dec = outcome ? c.nt : c.t;
      if (inc < cfg_.counter_max)
        ++inc;
      else if (dec > 0)
        --dec;
    }

    const bool mispredicted = prediction != outcome;
    if (mispredicted || best != Confidence::High) {
      const unsigned first = static_cast<unsigned>(chosen + 1);
      if (first >= cfg_.num_banks) {
        cat_ = cat_ < cfg_.cat_max ? cat_ + 1 : cat_;
      } else if (rng1_.next() % cfg_.cat_max < cat_) {
        // allocation throttled; CAT unchanged
      } else {
        const unsigned start = first + rng0_.next() % (cfg_.num_banks - first);
        bool placed = false;
        for (unsigned b = start; b < cfg_.num_banks && !placed; ++b) {
          TaggedEntry& victim = banks_[b][idx[b]];
          if (classify(victim.ctr) != Confidence::High) {
            victim.tag = static_cast<uint16_t>(tag[b]);
            victim.ctr = outcome ? DualCounter{1, 0} : DualCounter{0, 1};
            placed = true;
          } else if ((rng2_.next() & 3) == 0) {
            if (victim.ctr.t >= victim.ctr.nt && victim.ctr.t > 0)
              --victim.ctr.t;
            else if (victim.ctr.nt > 0)
              --victim.ctr.nt;
          }
        }
        if (placed)
          cat_ = cat_ > 0 ? cat_ - 1 : 0;
        else
          cat_ = cat_ < cfg_.cat_max ? cat_ + 1 : cat_;
      }
    }
    return prediction;
  }

  // Canonical digest of all semantic state, comparable against digest_of().
  uint64_t digest() const {
    Fnv f;
    for (const auto& bank : banks_)
      for (const TaggedEntry& e : bank) {
        f.mix(e.tag);
        f.mix(e.ctr.t);
        f.mix(e.ctr.nt);
      }
    for (uint8_t c : base_counters_) f.mix(c);
    f.mix(cat_);
    f.mix(rng0_.state);
    f.mix(rng1_.state);
    f.mix(rng2_.state);
    const unsigned hmax = cfg_.history_lengths.back();
    for (unsigned a = 0; a < hmax; ++a) f.mix(hist_bit(a));
    return f.h;
  }

  const BatageConfig& config() const { return cfg_; }

 private:
  struct Fnv {
    uint64_t h = 0xcbf29ce484222325ull;
    void mix(uint64_t v) {
      h ^= v;
      h *= 0x100000001b3ull;
    }
  };

  uint8_t base_counter(uint32_t pc) const {
    return base_counters_[(pc >> 2) & (base_counters_.size() - 1)];
  }

  // age 0 = newest; bits older than anything pushed read as 0.
  uint8_t hist_bit(unsigned age) const {
    return age < history_.size() ? history_[history_.size() - 1 - age] : 0;
  }

  // From-scratch fold of the newest len bits into width bits.
  uint32_t scratch_fold(unsigned len, unsigned width) const {
    uint32_t f = 0;
    for (unsigned a = 0; a < len; ++a)
      f ^= static_cast<uint32_t>(hist_bit(a)) << (a % width);
    return f;
  }

  uint32_t index_of(unsigned bank, uint32_t pc) const {
    const uint32_t word = pc >> 2;
    return (word ^ (word >> log2_entries_) ^
            scratch_fold(cfg_.history_lengths[bank], log2_entries_)) &
           (cfg_.entries_per_bank - 1);
  }

  uint32_t tag_of(unsigned bank, uint32_t pc) const {
    const uint32_t word = pc >> 2;
    return (word ^ (word >> cfg_.tag_bits) ^
            scratch_fold(cfg_.history_lengths[bank], cfg_.tag_bits) ^
            (scratch_fold(cfg_.history_lengths[bank], cfg_.tag_bits - 1)
             << 1)) &
           ((1u << cfg_.tag_bits) - 1);
  }

  BatageConfig cfg_;
  unsigned log2_entries_ = 0;
  Xorshift32 rng0_, rng1_, rng2_;
  std::vector<std::vector<TaggedEntry>> banks_;
  std::vector<uint8_t> base_counters_;
  std::vector<uint8_t> history_;
  uint32_t cat_ = 0;
};

// Digest of the optimized implementation over the same canonical layout.
inline uint64_t digest_of(const Batage& b, const GlobalHistory& h) {
  uint64_t d = 0xcbf29ce484222325ull;
  auto mix = [&](uint64_t v) {
    d ^= v;
    d *= 0x100000001b3ull;
  };
  const BatageConfig& cfg = b.config();
  for (unsigned bank = 0; bank < cfg.num_banks; ++bank)
    for (uint32_t i = 0; i < cfg.entries_per_bank; ++i) {
      const TaggedEntry& e = b.entry(bank, i);
      mix(e.tag);
      mix(e.ctr.t);
      mix(e.ctr.nt);
    }
  for (uint32_t i = 0; i < b.base().size(); ++i)
    mix(b.base().counter_at(i << 2));
  mix(b.cat());
  mix(b.rngs()[0].state);
  mix(b.rngs()[1].state);
  mix(b.rngs()[2].state);
  const unsigned hmax = cfg.history_lengths.back();
  for (unsigned a = 0; a < hmax; ++a) mix(h.bit(a) ? 1 : 0);
  return d;
}

struct EquivalenceVerdict {
  bool passed = true;
  uint64_t steps_run = 0;
  uint64_t divergence_step = 0;
  std::string detail;
};

// Geometry used for equivalence runs: full history ladder, smaller tables so
// the every-step digest stays cheap and collisions are frequent.
inline BatageConfig modelcheck_config() {
  BatageConfig cfg;
  cfg.entries_per_bank = 128;
  cfg.tag_bits = 8;
  cfg.base_entries = 512;
  return cfg;
}

// Drives the optimized predictor and the reference with identical random
// stimuli (prediction/update steps, extra history pushes, checkpoint and
// restore), comparing every prediction and a full state digest each step.
// impl_override, when given, configures only the implementation side; the
// mutation tests use it to plant a deliberate rule change.
inline EquivalenceVerdict run_equivalence(
    uint64_t seed, uint64_t steps, BatageConfig cfg = modelcheck_config(),
    std::optional<BatageConfig> impl_override = {}) {
  BPLAB_ASSERT(steps >= 1, "run_equivalence: steps must be >= 1");
  cfg.finalize();

  Batage impl(impl_override.value_or(cfg));
  GlobalHistory hist = impl.make_history();
  ReferenceBatage ref(cfg);

  // Stimulus generator: splitmix64, unrelated to the predictors' xorshift.
  uint64_t s = seed ? seed : 0x9e3779b97f4a7c15ull;
  auto rnd = [&]() {
    s += 0x9e3779b97f4a7c15ull;
    uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  };

  // A small pc pool makes bank collisions and allocations frequent.
  std::vector<uint32_t> pool(48);
  for (auto& pc : pool) pc = static_cast<uint32_t>(rnd() & 0xffff) << 2;

  std::optional<GlobalHistory::Checkpoint> impl_cp;
  size_t ref_cp = 0;
  uint64_t pushes_since_cp = 0;
  const uint64_t margin = hist.buffer_size() - hist.max_history();

  EquivalenceVerdict verdict;
  for (uint64_t k = 0; k < steps; ++k) {
    const uint64_t roll = rnd() % 100;
    std::string op;
    if (roll < 70) {
      const uint32_t pc = pool[rnd() % pool.size()];
      const bool outcome = rnd() & 1;
      const auto [pred, meta] = impl.predict(pc, hist);
      impl.update(meta, outcome);
      const bool ref_pred = ref.predict_update(pc, outcome);
      {
        std::ostringstream os;
        os << "predict_update pc=0x" << std::hex << pc << std::dec
           << " outcome=" << outcome;
        op = os.str();
      }
      if (pred != ref_pred) {
        verdict.passed = false;
        verdict.divergence_step = k;
        std::ostringstream os;
        os << "prediction mismatch at step " << k << " (" << op
           << "): impl=" << pred << " ref=" << ref_pred;
        verdict.detail = os.str();
        return verdict;
      }
    } else if (roll < 85) {
      const bool bit = rnd() & 1;
      hist.push(bit);
      ref.push(bit);
      ++pushes_since_cp;
      op = "push";
    } else if (roll < 92 || !impl_cp || pushes_since_cp + 2 > margin) {
      impl_cp = hist.checkpoint();
      ref_cp = ref.history_checkpoint();
      pushes_since_cp = 0;
      op = "checkpoint";
    } else {
      hist.restore(*impl_cp);
      ref.history_restore(ref_cp);
      op = "restore";
    }

    const uint64_t di = digest_of(impl, hist);
    const uint64_t dr = ref.digest();
    if (di != dr) {
      verdict.passed = false;
      verdict.divergence_step = k;
      std::ostringstream os;
      os << "state digest mismatch at step " << k << " (" << op
         << "): impl=0x" << std::hex << di << " ref=0x" << dr;
      verdict.detail = os.str();
      return verdict;
    }
    verdict.steps_run = k + 1;
  }
  return verdict;
}

}  // namespace bplab
