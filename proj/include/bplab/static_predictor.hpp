#pragma once

#include <cstdint>
#include <optional>

#include "bplab/isa.hpp"

namespace bplab {

// Decode-stage static prediction. redirect is present exactly when the
// transfer is predicted taken.
struct StaticPrediction {
  std::optional<uint32_t> redirect;
  bool predicted_taken = false;
};

// Static rules for a never-seen instruction stream:
//   direct jump   -> taken, target pc+imm (exact)
//   branch        -> backward taken, forward not taken (imm == 0 counts as
//                    forward)
//   indirect jump -> no prediction, fall through
inline StaticPrediction predict_at_decode(const DecodedCt& ct, uint32_t pc) {
  switch (ct.kind) {
    case CtKind::DirectJump:
      return {pc + static_cast<uint32_t>(ct.imm), true};
    case CtKind::CondBranch:
      if (ct.imm < 0) return {pc + static_cast<uint32_t>(ct.imm), true};
      return {std::nullopt, false};
    case CtKind::IndirectJump:
      return {std::nullopt, false};
  }
  return {std::nullopt, false};
}

}  // namespace bplab
