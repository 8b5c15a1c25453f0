#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>

#include "bplab/assert.hpp"
#include "bplab/batage.hpp"
#include "bplab/bimodal.hpp"
#include "bplab/btb.hpp"
#include "bplab/core.hpp"
#include "bplab/ras.hpp"
#include "bplab/static_predictor.hpp"

namespace bplab {

// Cumulative ablation ladder matching the evaluation: each level keeps
// everything below it.
enum class PredictLevel : uint8_t {
  None,
  Static,
  StaticRas,
  StaticRasBtb,
  Bimodal,  // static+ras+btb+bimodal
  Batage,   // static+ras+btb+batage
};

inline constexpr std::array<PredictLevel, 6> kAllLevels = {
    PredictLevel::None,         PredictLevel::Static,
    PredictLevel::StaticRas,    PredictLevel::StaticRasBtb,
    PredictLevel::Bimodal,      PredictLevel::Batage,
};

inline std::string_view level_name(PredictLevel l) {
  switch (l) {
    case PredictLevel::None: return "none";
    case PredictLevel::Static: return "static";
    case PredictLevel::StaticRas: return "static+ras";
    case PredictLevel::StaticRasBtb: return "static+ras+btb";
    case PredictLevel::Bimodal: return "static+ras+btb+bimodal";
    case PredictLevel::Batage: return "static+ras+btb+batage";
  }
  return "?";
}

inline std::optional<PredictLevel> parse_level(std::string_view s) {
  if (s == "none") return PredictLevel::None;
  if (s == "static") return PredictLevel::Static;
  if (s == "static+ras" || s == "ras") return PredictLevel::StaticRas;
  if (s == "static+ras+btb" || s == "btb") return PredictLevel::StaticRasBtb;
  if (s == "static+ras+btb+bimodal" || s == "+bimodal" || s == "bimodal")
    return PredictLevel::Bimodal;
  if (s == "static+ras+btb+batage" || s == "+batage" || s == "batage")
    return PredictLevel::Batage;
  return std::nullopt;
}

struct TimingConfig {
  unsigned decode_redirect_bubbles = 1;
  unsigned execute_mispredict_bubbles = 2;
  // Test hook: after every misprediction recovery, re-derive each fold from
  // the raw buffer and compare. Costly, off by default.
  bool verify_recovery = false;
};

enum class CtClass : uint8_t { CondBranch, DirectJump, IndirectJump, Return };

inline CtClass classify_event(const DecodedCt& ct) {
  switch (ct.kind) {
    case CtKind::CondBranch: return CtClass::CondBranch;
    case CtKind::DirectJump: return CtClass::DirectJump;
    case CtKind::IndirectJump:
      return ct.is_return ? CtClass::Return : CtClass::IndirectJump;
  }
  return CtClass::CondBranch;
}

struct ClassStats {
  uint64_t count = 0;
  uint64_t mispredicts = 0;
};

struct SimStats {
  uint64_t retired = 0;
  uint64_t cycles = 0;
  uint64_t penalty_cycles = 0;
  uint64_t decode_redirects = 0;
  std::array<ClassStats, 4> classes{};  // indexed by CtClass

  ClassStats& cls(CtClass c) { return classes[static_cast<size_t>(c)]; }
  const ClassStats& cls(CtClass c) const {
    return classes[static_cast<size_t>(c)];
  }

  double ipc() const { return cycles ? double(retired) / double(cycles) : 0.0; }

  // IPC if all cycles lost to mispredictions were avoided.
  double perfect_ipc() const {
    const uint64_t useful = cycles - penalty_cycles;
    return useful ? double(retired) / double(useful) : 0.0;
  }
};

struct FrontendConfig {
  PredictLevel level = PredictLevel::Batage;
  uint32_t ras_capacity = 16;
  BtbConfig btb;
  uint32_t bimodal_entries = 4096;
  BatageConfig batage;
};

// The predictor structures owned by one simulation.
struct Frontend {
  PredictLevel level;
  std::optional<ReturnAddressStack> ras;
  std::optional<Btb> btb;
  std::optional<BimodalTable> bimodal;  // standalone dynamic predictor
  std::optional<Batage> batage;
  std::optional<GlobalHistory> history;

  explicit Frontend(const FrontendConfig& cfg) : level(cfg.level) {
    if (level >= PredictLevel::StaticRas)
      ras.emplace(cfg.ras_capacity);
    if (level >= PredictLevel::StaticRasBtb) btb.emplace(cfg.btb);
    if (level == PredictLevel::Bimodal) bimodal.emplace(cfg.bimodal_entries);
    if (level == PredictLevel::Batage) {
      batage.emplace(cfg.batage);
      history.emplace(batage->make_history());
    }
  }

  bool has_static() const { return level >= PredictLevel::Static; }
};

// Per-event view handed to an observer; used by the harness and tests to
// track individual branches.
struct RetireObservation {
  const RetireEvent& ev;
  uint32_t predicted_next;
  bool mispredicted;
  bool decode_redirected;
};
using RetireObserver = std::function<void(const RetireObservation&)>;

// Recomputes every fold from the raw bits; recovery must leave them exact.
inline void verify_folds(const GlobalHistory& h) {
  for (size_t i = 0; i < h.specs().size(); ++i) {
    const FoldSpec& s = h.specs()[i];
    uint32_t f = 0;
    for (unsigned a = 0; a < s.history_length; ++a)
      f ^= static_cast<uint32_t>(h.bit(a)) << (a % s.output_width);
    BPLAB_ASSERT(f == h.fold(i), "fold diverged from scratch recomputation");
  }
}

// Trace-driven 4-stage in-order model. For each retired instruction the
// frontend's next-pc decision is reconstructed:
//
//   fetch:   BTB hit -> jump target / RAS top for returns / dynamic direction
//            for branches (always taken when no dynamic predictor is present)
//   decode:  static rules when fetch had no knowledge of the instruction;
//            RAS pop redirects returns; a BTB-miss branch whose BATAGE
//            prediction came from a tagged bank uses that prediction. Any
//            decode change of the next pc costs decode_redirect_bubbles.
//   execute: final prediction checked against the trace; a mismatch costs
//            execute_mispredict_bubbles and restores the RAS pointer and the
//            history checkpoint taken when this instruction predicted, then
//            replays this instruction's own (correct) speculative effects.
//
// Speculative state: RAS push on call / pop on return at decode; one history
// bit per control transfer, pushed with the predicted direction. Training and
// BTB insertion happen at retirement only. Wrong-path instructions are not in
// the trace; their cost is the charged bubbles.
inline SimStats simulate(std::span<const RetireEvent> trace, Frontend& fe,
                         const TimingConfig& cfg = {},
                         uint64_t retired_override = 0,
                         const RetireObserver& observer = {}) {
  SimStats stats;
  uint64_t last_index = 0;
  bool first = true;

  for (const RetireEvent& ev : trace) {
    BPLAB_ASSERT(first || ev.retire_index > last_index,
                 "trace not in retirement order");
    first = false;
    last_index = ev.retire_index;

    const uint32_t fall = ev.pc + 4;
    const uint32_t true_next = ev.target;

    // Checkpoints at prediction time, before this instruction's own
    // speculative updates.
    GlobalHistory::Checkpoint hist_cp;
    if (fe.history) hist_cp = fe.history->checkpoint();
    ReturnAddressStack::Checkpoint ras_cp = fe.ras ? fe.ras->snapshot() : 0;

    // Dynamic predictor consulted for every conditional branch so it can be
    // trained at retirement whether or not its answer steers the fetch.
    bool dyn_taken = false;
    std::optional<PredictMeta> meta;
    if (ev.ct && ev.ct->kind == CtKind::CondBranch) {
      if (fe.batage) {
        auto [p, m] = fe.batage->predict(ev.pc, *fe.history);
        dyn_taken = p;
        meta = std::move(m);
      } else if (fe.bimodal) {
        dyn_taken = fe.bimodal->predict(ev.pc);
      }
    }

    // --- fetch ---
    uint32_t fetch_next = fall;
    std::optional<BtbHit> hit;
    bool branch_pred_taken = false;  // direction actually predicted for a branch
    if (fe.btb) {
      hit = fe.btb->lookup(ev.pc);
      if (hit) {
        switch (hit->kind) {
          case BtbKind::Jump:
            fetch_next = hit->target;
            break;
          case BtbKind::Return:
            if (fe.ras) fetch_next = fe.ras->top();  // peek; pop at decode
            break;
          case BtbKind::Branch: {
            // With no dynamic predictor the BTB acts as always-taken.
            const bool taken =
                (fe.batage || fe.bimodal) ? dyn_taken : true;
            branch_pred_taken = taken;
            if (taken) fetch_next = hit->target;
            break;
          }
        }
      }
    }

    // --- decode ---
    uint32_t decode_next = fetch_next;
    if (!ev.ct) {
      // A stale BTB alias may have redirected a non-transfer; decode squashes.
      decode_next = fall;
    } else if (fe.has_static()) {
      const DecodedCt& ct = *ev.ct;
      switch (ct.kind) {
        case CtKind::DirectJump:
          decode_next = ev.pc + static_cast<uint32_t>(ct.imm);
          break;
        case CtKind::IndirectJump: {
          uint32_t pred = fall;
          if (ct.is_return && fe.ras) {
            pred = fe.ras->pop();
          } else if (!ct.is_return && hit && hit->kind == BtbKind::Jump) {
            pred = hit->target;  // last observed target
          }
          decode_next = pred;
          break;
        }
        case CtKind::CondBranch: {
          if (hit && hit->kind == BtbKind::Branch) {
            // Fetch already used the dynamic (or always-taken) direction.
          } else if (meta && meta->chosen != Batage::kBaseBank) {
            // BTB miss, but a tagged bank knows this branch: its prediction
            // substitutes for the static rule.
            branch_pred_taken = dyn_taken;
            decode_next =
                dyn_taken ? ev.pc + static_cast<uint32_t>(ct.imm) : fall;
          } else {
            const StaticPrediction sp = predict_at_decode(ct, ev.pc);
            branch_pred_taken = sp.predicted_taken;
            decode_next = sp.redirect.value_or(fall);
          }
          break;
        }
      }
      // Calls push the fall-through address; for a pop-then-push link swap
      // the pop above already happened.
      if (ct.is_call && fe.ras) fe.ras->push(ev.pc + 4);
    }

    const bool decode_redirected = decode_next != fetch_next;
    if (decode_redirected) {
      stats.penalty_cycles += cfg.decode_redirect_bubbles;
      ++stats.decode_redirects;
    }

    // Speculative history bit, pushed with the predicted direction.
    if (fe.history && ev.ct) {
      const bool bit = ev.ct->kind == CtKind::CondBranch ? branch_pred_taken
                                                         : true;
      fe.history->push(bit);
    }

    // --- execute ---
    const uint32_t predicted_next = decode_next;
    const bool mispredict = predicted_next != true_next;
    if (mispredict) {
      BPLAB_ASSERT(ev.ct.has_value(),
                   "non-transfer events cannot mispredict");
      stats.penalty_cycles += cfg.execute_mispredict_bubbles;
      stats.cls(classify_event(*ev.ct)).mispredicts++;

      // Recover speculative state, then replay this instruction's own
      // correct-path effects (it retires; only younger state is squashed).
      if (fe.history) {
        fe.history->restore(hist_cp);
        if (cfg.verify_recovery) verify_folds(*fe.history);
        const bool bit =
            ev.ct->kind == CtKind::CondBranch ? ev.taken : true;
        fe.history->push(bit);
      }
      if (fe.ras) {
        fe.ras->restore(ras_cp);
        if (ev.ct->is_return) fe.ras->pop();
        if (ev.ct->is_call) fe.ras->push(ev.pc + 4);
      }
    }

    // --- retirement: training with the true outcome ---
    if (ev.ct) {
      stats.cls(classify_event(*ev.ct)).count++;
      if (ev.ct->kind == CtKind::CondBranch) {
        if (fe.batage)
          fe.batage->update(*meta, ev.taken);
        else if (fe.bimodal)
          fe.bimodal->update(ev.pc, ev.taken);
      }
      if (fe.btb) fe.btb->insert_on_retire(ev);
    }

    if (observer)
      observer(RetireObservation{ev, predicted_next, mispredict,
                                 decode_redirected});
  }

  stats.retired = retired_override ? retired_override
                                   : static_cast<uint64_t>(trace.size());
  BPLAB_ASSERT(stats.retired >= trace.size(),
               "retired count below listed events");
  stats.cycles = stats.retired + stats.penalty_cycles;
  return stats;
}

}  // namespace bplab
