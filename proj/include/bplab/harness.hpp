#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "bplab/core.hpp"
#include "bplab/pipeline.hpp"
#include "bplab/trace.hpp"

namespace bplab {

struct RunConfig {
  FrontendConfig frontend;
  TimingConfig timing;
  uint64_t max_steps = 10'000'000;
};

// Applies a JSON config document. Keys mirror the structure fields:
//   batage.{num_banks,history_lengths,entries_per_bank,tag_bits,counter_max,
//           cat_max,base_entries}
//   btb.{jump_entries,branch_entries,tag_bits}
//   bimodal.entries          ras.capacity
//   timing.{decode_redirect_bubbles,execute_mispredict_bubbles}
inline void apply_config_json(RunConfig& rc, const nlohmann::json& j) {
  if (j.contains("batage")) {
    const auto& b = j.at("batage");
    BatageConfig& cfg = rc.frontend.batage;
    if (b.contains("num_banks")) cfg.num_banks = b.at("num_banks");
    if (b.contains("history_lengths"))
      cfg.history_lengths = b.at("history_lengths").get<std::vector<unsigned>>();
    if (b.contains("entries_per_bank"))
      cfg.entries_per_bank = b.at("entries_per_bank");
    if (b.contains("tag_bits")) cfg.tag_bits = b.at("tag_bits");
    if (b.contains("counter_max")) cfg.counter_max = b.at("counter_max");
    if (b.contains("cat_max")) cfg.cat_max = b.at("cat_max");
    if (b.contains("base_entries")) cfg.base_entries = b.at("base_entries");
    if (b.contains("tie_break_longest"))
      cfg.tie_break_longest = b.at("tie_break_longest");
  }
  if (j.contains("btb")) {
    const auto& b = j.at("btb");
    if (b.contains("jump_entries")) rc.frontend.btb.jump_entries = b.at("jump_entries");
    if (b.contains("branch_entries"))
      rc.frontend.btb.branch_entries = b.at("branch_entries");
    if (b.contains("tag_bits")) rc.frontend.btb.tag_bits = b.at("tag_bits");
    if (b.contains("store_indirect_targets"))
      rc.frontend.btb.store_indirect_targets = b.at("store_indirect_targets");
  }
  if (j.contains("bimodal") && j.at("bimodal").contains("entries"))
    rc.frontend.bimodal_entries = j.at("bimodal").at("entries");
  if (j.contains("ras") && j.at("ras").contains("capacity"))
    rc.frontend.ras_capacity = j.at("ras").at("capacity");
  if (j.contains("timing")) {
    const auto& t = j.at("timing");
    if (t.contains("decode_redirect_bubbles"))
      rc.timing.decode_redirect_bubbles = t.at("decode_redirect_bubbles");
    if (t.contains("execute_mispredict_bubbles"))
      rc.timing.execute_mispredict_bubbles = t.at("execute_mispredict_bubbles");
  }
}

struct BenchResult {
  SimStats stats;
  MachineState final_state;
  bool truncated = false;
};

// Executes a memory image on the functional core and feeds the retirement
// trace through the timing model at the requested ablation level.
inline BenchResult run_bench(const MemoryImage& img, PredictLevel level,
                             const RunConfig& rc = {},
                             std::optional<uint32_t> entry_override = {},
                             const RetireObserver& observer = {}) {
  BenchResult res;
  res.final_state = MachineState::from_image(img, entry_override);
  RunResult rr = run(res.final_state, rc.max_steps);
  res.truncated = rr.truncated;

  FrontendConfig fcfg = rc.frontend;
  fcfg.level = level;
  Frontend fe(fcfg);
  res.stats = simulate(rr.trace, fe, rc.timing, 0, observer);
  return res;
}

// Replays an externally produced control-transfer trace.
inline SimStats run_trace(const TraceDoc& doc, PredictLevel level,
                          const RunConfig& rc = {}) {
  FrontendConfig fcfg = rc.frontend;
  fcfg.level = level;
  Frontend fe(fcfg);
  return simulate(doc.events, fe, rc.timing, doc.retired);
}

}  // namespace bplab
