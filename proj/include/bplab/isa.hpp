#pragma once

#include <cstdint>
#include <optional>

namespace bplab {

enum class CtKind : uint8_t { CondBranch, DirectJump, IndirectJump };

// Control-transfer view of one instruction word. imm is the sign-extended
// B/J/I immediate depending on kind; it is even for branches and direct jumps
// (bit 0 is implicit zero in the encoding).
struct DecodedCt {
  CtKind kind;
  int32_t imm;
  uint8_t rd;
  uint8_t rs1;
  bool is_call;
  bool is_return;
};

namespace detail {

inline constexpr int32_t sign_extend(uint32_t v, unsigned bits) {
  const uint32_t m = 1u << (bits - 1);
  return static_cast<int32_t>((v ^ m) - m);
}

inline constexpr int32_t b_immediate(uint32_t w) {
  const uint32_t imm = ((w >> 31) & 0x1u) << 12 | ((w >> 7) & 0x1u) << 11 |
                       ((w >> 25) & 0x3fu) << 5 | ((w >> 8) & 0xfu) << 1;
  return sign_extend(imm, 13);
}

inline constexpr int32_t j_immediate(uint32_t w) {
  const uint32_t imm = ((w >> 31) & 0x1u) << 20 | ((w >> 12) & 0xffu) << 12 |
                       ((w >> 20) & 0x1u) << 11 | ((w >> 21) & 0x3ffu) << 1;
  return sign_extend(imm, 21);
}

inline constexpr int32_t i_immediate(uint32_t w) {
  return sign_extend(w >> 20, 12);
}

}  // namespace detail

// x1 (ra) and x5 (t0) are the ABI link registers honored for call/return
// classification.
inline constexpr bool is_link_reg(uint8_t r) { return r == 1 || r == 5; }

// Classifies a 32-bit instruction word as a control transfer. Total: any word
// that is not a valid BRANCH/JAL/JALR encoding maps to nullopt.
//
// Call/return roles follow the ISA's return-address-stack hint table:
//   JAL  rd=link                    -> call
//   JALR rd=link, rs1 non-link      -> call
//   JALR rd non-link, rs1=link      -> return
//   JALR rd=link, rs1=link, rd!=rs1 -> return then call (link swap)
//   JALR rd=link, rs1=link, rd==rs1 -> call only
inline std::optional<DecodedCt> decode_control_transfer(uint32_t word) {
  if ((word & 0x3u) != 0x3u) return std::nullopt;  // 16-bit encoding space
  const uint32_t opcode = word & 0x7fu;
  const uint8_t rd = (word >> 7) & 0x1fu;
  const uint8_t funct3 = (word >> 12) & 0x7u;
  const uint8_t rs1 = (word >> 15) & 0x1fu;

  switch (opcode) {
    case 0x63: {  // BRANCH
      if (funct3 == 2 || funct3 == 3) return std::nullopt;  // reserved
      return DecodedCt{CtKind::CondBranch, detail::b_immediate(word),
                       0, rs1, false, false};
    }
    case 0x6f: {  // JAL
      return DecodedCt{CtKind::DirectJump, detail::j_immediate(word),
                       rd, 0, is_link_reg(rd), false};
    }
    case 0x67: {  // JALR
      if (funct3 != 0) return std::nullopt;
      const bool rd_link = is_link_reg(rd);
      const bool rs1_link = is_link_reg(rs1);
      const bool ret = rs1_link && !(rd_link && rd == rs1);
      return DecodedCt{CtKind::IndirectJump, detail::i_immediate(word),
                       rd, rs1, rd_link, ret};
    }
    default:
      return std::nullopt;
  }
}

}  // namespace bplab
