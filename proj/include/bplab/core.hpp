#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "bplab/assert.hpp"
#include "bplab/isa.hpp"
#include "bplab/memory_image.hpp"

namespace bplab {

// MMIO map. UART_TX takes byte writes; a word store to HALT_ADDR stops the
// machine with that word as the exit code.
inline constexpr uint32_t kUartTxAddr = 0x1000'0000;
inline constexpr uint32_t kHaltAddr = 0x1000'0008;

enum class TrapKind : uint8_t {
  IllegalInstruction,
  MisalignedPc,
  MisalignedAccess,
  AccessFault,
};

struct Trap {
  TrapKind kind;
  uint32_t pc;      // pc of the faulting instruction
  uint32_t detail;  // offending word or address
};

inline const char* trap_name(TrapKind k) {
  switch (k) {
    case TrapKind::IllegalInstruction: return "illegal instruction";
    case TrapKind::MisalignedPc: return "misaligned pc";
    case TrapKind::MisalignedAccess: return "misaligned access";
    case TrapKind::AccessFault: return "access fault";
  }
  return "?";
}

// Sparse byte-addressable memory in 4 KiB pages. Only pages populated by the
// image loader exist; accesses elsewhere fault (MMIO is handled one level up).
class SparseMemory {
 public:
  static constexpr uint32_t kPageBytes = 4096;

  void populate_word(uint32_t addr, uint32_t value) {
    auto& pg = pages_[addr / kPageBytes];  // creates the page
    for (int i = 0; i < 4; ++i)
      pg[addr % kPageBytes + i] = static_cast<uint8_t>(value >> (8 * i));
  }

  bool populated(uint32_t addr) const {
    return pages_.count(addr / kPageBytes) != 0;
  }

  // Callers check alignment first, so an access never crosses a page.
  std::optional<uint32_t> read(uint32_t addr, unsigned bytes) const {
    const auto it = pages_.find(addr / kPageBytes);
    if (it == pages_.end()) return std::nullopt;
    uint32_t v = 0;
    for (unsigned i = 0; i < bytes; ++i)
      v |= static_cast<uint32_t>(it->second[addr % kPageBytes + i]) << (8 * i);
    return v;
  }

  bool write(uint32_t addr, uint32_t value, unsigned bytes) {
    const auto it = pages_.find(addr / kPageBytes);
    if (it == pages_.end()) return false;
    for (unsigned i = 0; i < bytes; ++i)
      it->second[addr % kPageBytes + i] = static_cast<uint8_t>(value >> (8 * i));
    return true;
  }

 private:
  std::unordered_map<uint32_t, std::array<uint8_t, kPageBytes>> pages_;
};

// One retired instruction's control-transfer facts. For non-transfers ct is
// absent, taken is false and target is pc+4. target is always the next pc
// actually taken.
struct RetireEvent {
  uint64_t retire_index;
  uint32_t pc;
  std::optional<DecodedCt> ct;
  bool taken;
  uint32_t target;
};

struct MachineState {
  uint32_t pc = 0;
  std::array<uint32_t, 32> regs{};  // x0 hardwired to zero
  SparseMemory mem;
  bool halted = false;
  uint32_t exit_code = 0;
  std::vector<uint8_t> uart_out;
  std::optional<Trap> trap;

  static MachineState from_image(const MemoryImage& img,
                                 std::optional<uint32_t> entry_override = {}) {
    MachineState st;
    for (const auto& [addr, value] : img.words) st.mem.populate_word(addr, value);
    st.pc = entry_override.value_or(img.entry);
    return st;
  }
};

inline MachineState load_image(std::string_view text,
                               std::optional<uint32_t> entry_override = {}) {
  return MachineState::from_image(MemoryImage::parse(text), entry_override);
}

namespace detail {

inline uint32_t mulh_ss(uint32_t a, uint32_t b) {
  const int64_t p = static_cast<int64_t>(static_cast<int32_t>(a)) *
                    static_cast<int64_t>(static_cast<int32_t>(b));
  return static_cast<uint32_t>(static_cast<uint64_t>(p) >> 32);
}

inline uint32_t mulh_su(uint32_t a, uint32_t b) {
  const int64_t p = static_cast<int64_t>(static_cast<int32_t>(a)) *
                    static_cast<int64_t>(static_cast<uint64_t>(b));
  return static_cast<uint32_t>(static_cast<uint64_t>(p) >> 32);
}

inline uint32_t mulh_uu(uint32_t a, uint32_t b) {
  const uint64_t p = static_cast<uint64_t>(a) * static_cast<uint64_t>(b);
  return static_cast<uint32_t>(p >> 32);
}

}  // namespace detail

// Executes one instruction. Returns the retirement event, or nullopt when the
// instruction trapped (a trapped instruction does not retire; the machine
// halts with the trap recorded as the diagnostic).
inline std::optional<RetireEvent> step(MachineState& st,
                                       uint64_t retire_index = 0) {
  auto fail = [&](TrapKind k, uint32_t detail) -> std::optional<RetireEvent> {
    st.trap = Trap{k, st.pc, detail};
    st.halted = true;
    return std::nullopt;
  };

  if (st.pc % 4 != 0) return fail(TrapKind::MisalignedPc, st.pc);
  const auto fetched = st.mem.read(st.pc, 4);
  if (!fetched) return fail(TrapKind::AccessFault, st.pc);
  const uint32_t w = *fetched;

  const uint32_t opcode = w & 0x7f;
  const uint8_t rd = (w >> 7) & 0x1f;
  const uint8_t funct3 = (w >> 12) & 0x7;
  const uint8_t rs1 = (w >> 15) & 0x1f;
  const uint8_t rs2 = (w >> 20) & 0x1f;
  const uint8_t funct7 = (w >> 25) & 0x7f;
  const uint32_t a = st.regs[rs1];
  const uint32_t b = st.regs[rs2];

  auto wr = [&](uint8_t r, uint32_t v) {
    if (r != 0) st.regs[r] = v;
  };
  auto sext = [](uint32_t v, unsigned bits) {
    const uint32_t m = 1u << (bits - 1);
    return (v ^ m) - m;
  };

  uint32_t next_pc = st.pc + 4;
  bool taken = false;

  switch (opcode) {
    case 0x37:  // LUI
      wr(rd, w & 0xfffff000u);
      break;
    case 0x17:  // AUIPC
      wr(rd, st.pc + (w & 0xfffff000u));
      break;
    case 0x6f: {  // JAL
      const uint32_t target = st.pc + static_cast<uint32_t>(detail::j_immediate(w));
      if (target % 4 != 0) return fail(TrapKind::MisalignedPc, target);
      wr(rd, st.pc + 4);
      next_pc = target;
      taken = true;
      break;
    }
    case 0x67: {  // JALR
      if (funct3 != 0) return fail(TrapKind::IllegalInstruction, w);
      const uint32_t target =
          (a + static_cast<uint32_t>(detail::i_immediate(w))) & ~1u;
      if (target % 4 != 0) return fail(TrapKind::MisalignedPc, target);
      wr(rd, st.pc + 4);
      next_pc = target;
      taken = true;
      break;
    }
    case 0x63: {  // BRANCH
      bool t;
      switch (funct3) {
        case 0: t = a == b; break;
        case 1: t = a != b; break;
        case 4: t = static_cast<int32_t>(a) < static_cast<int32_t>(b); break;
        case 5: t = static_cast<int32_t>(a) >= static_cast<int32_t>(b); break;
        case 6: t = a < b; break;
        case 7: t = a >= b; break;
        default: return fail(TrapKind::IllegalInstruction, w);
      }
      if (t) {
        const uint32_t target =
            st.pc + static_cast<uint32_t>(detail::b_immediate(w));
        if (target % 4 != 0) return fail(TrapKind::MisalignedPc, target);
        next_pc = target;
        taken = true;
      }
      break;
    }
    case 0x03: {  // LOAD
      const uint32_t addr = a + static_cast<uint32_t>(detail::i_immediate(w));
      unsigned bytes;
      switch (funct3) {
        case 0: case 4: bytes = 1; break;
        case 1: case 5: bytes = 2; break;
        case 2: bytes = 4; break;
        default: return fail(TrapKind::IllegalInstruction, w);
      }
      if (addr % bytes != 0) return fail(TrapKind::MisalignedAccess, addr);
      const auto v = st.mem.read(addr, bytes);
      if (!v) return fail(TrapKind::AccessFault, addr);
      uint32_t val = *v;
      if (funct3 == 0) val = sext(val, 8);
      if (funct3 == 1) val = sext(val, 16);
      wr(rd, val);
      break;
    }
    case 0x23: {  // STORE
      const uint32_t imm = ((w >> 25) << 5) | rd;
      const uint32_t addr = a + sext(imm, 12);
      unsigned bytes;
      switch (funct3) {
        case 0: bytes = 1; break;
        case 1: bytes = 2; break;
        case 2: bytes = 4; break;
        default: return fail(TrapKind::IllegalInstruction, w);
      }
      if (addr % bytes != 0) return fail(TrapKind::MisalignedAccess, addr);
      const uint32_t stored =
          bytes == 4 ? b : b & ((1u << (8 * bytes)) - 1);
      if (addr == kUartTxAddr) {
        st.uart_out.push_back(static_cast<uint8_t>(b));
      } else if (addr == kHaltAddr) {
        st.exit_code = stored;
        st.halted = true;
      } else if (!st.mem.write(addr, b, bytes)) {
        return fail(TrapKind::AccessFault, addr);
      }
      break;
    }
    case 0x13: {  // OP-IMM
      const uint32_t imm = static_cast<uint32_t>(detail::i_immediate(w));
      const uint32_t shamt = rs2;
      switch (funct3) {
        case 0: wr(rd, a + imm); break;
        case 2: wr(rd, static_cast<int32_t>(a) < static_cast<int32_t>(imm)); break;
        case 3: wr(rd, a < imm); break;
        case 4: wr(rd, a ^ imm); break;
        case 6: wr(rd, a | imm); break;
        case 7: wr(rd, a & imm); break;
        case 1:
          if (funct7 != 0) return fail(TrapKind::IllegalInstruction, w);
          wr(rd, a << shamt);
          break;
        case 5:
          if (funct7 == 0x00) wr(rd, a >> shamt);
          else if (funct7 == 0x20)
            wr(rd, static_cast<uint32_t>(static_cast<int32_t>(a) >> shamt));
          else return fail(TrapKind::IllegalInstruction, w);
          break;
        default: return fail(TrapKind::IllegalInstruction, w);
      }
      break;
    }
    case 0x33: {  // OP (+ M extension under funct7 0x01)
      if (funct7 == 0x01) {
        const int32_t sa = static_cast<int32_t>(a);
        const int32_t sb = static_cast<int32_t>(b);
        switch (funct3) {
          case 0: wr(rd, a * b); break;
          case 1: wr(rd, detail::mulh_ss(a, b)); break;
          case 2: wr(rd, detail::mulh_su(a, b)); break;
          case 3: wr(rd, detail::mulh_uu(a, b)); break;
          case 4:  // DIV: x/0 = -1; INT_MIN/-1 = INT_MIN
            if (b == 0) wr(rd, 0xffffffffu);
            else if (sa == INT32_MIN && sb == -1) wr(rd, a);
            else wr(rd, static_cast<uint32_t>(sa / sb));
            break;
          case 5:  // DIVU: x/0 = all-ones
            wr(rd, b == 0 ? 0xffffffffu : a / b);
            break;
          case 6:  // REM: x%0 = x; INT_MIN%-1 = 0
            if (b == 0) wr(rd, a);
            else if (sa == INT32_MIN && sb == -1) wr(rd, 0);
            else wr(rd, static_cast<uint32_t>(sa % sb));
            break;
          case 7:  // REMU: x%0 = x
            wr(rd, b == 0 ? a : a % b);
            break;
        }
        break;
      }
      if (funct7 != 0x00 && funct7 != 0x20)
        return fail(TrapKind::IllegalInstruction, w);
      const bool alt = funct7 == 0x20;
      switch (funct3) {
        case 0: wr(rd, alt ? a - b : a + b); break;
        case 1:
          if (alt) return fail(TrapKind::IllegalInstruction, w);
          wr(rd, a << (b & 31));
          break;
        case 2:
          if (alt) return fail(TrapKind::IllegalInstruction, w);
          wr(rd, static_cast<int32_t>(a) < static_cast<int32_t>(b));
          break;
        case 3:
          if (alt) return fail(TrapKind::IllegalInstruction, w);
          wr(rd, a < b);
          break;
        case 4:
          if (alt) return fail(TrapKind::IllegalInstruction, w);
          wr(rd, a ^ b);
          break;
        case 5:
          wr(rd, alt ? static_cast<uint32_t>(static_cast<int32_t>(a) >>
                                             (b & 31))
                     : a >> (b & 31));
          break;
        case 6:
          if (alt) return fail(TrapKind::IllegalInstruction, w);
          wr(rd, a | b);
          break;
        case 7:
          if (alt) return fail(TrapKind::IllegalInstruction, w);
          wr(rd, a & b);
          break;
      }
      break;
    }
    case 0x0f:  // FENCE: no-op on this machine
      break;
    default:
      return fail(TrapKind::IllegalInstruction, w);
  }

  RetireEvent ev{retire_index, st.pc, decode_control_transfer(w), taken,
                 next_pc};
  st.pc = next_pc;
  st.regs[0] = 0;
  return ev;
}

struct RunResult {
  std::vector<RetireEvent> trace;
  bool truncated = false;  // budget ran out before halt
};

// Steps until halt (store to HALT_ADDR or trap) or until max_steps retire.
inline RunResult run(MachineState& st, uint64_t max_steps) {
  BPLAB_ASSERT(max_steps > 0, "run: max_steps must be positive");
  RunResult res;
  uint64_t idx = 0;
  while (!st.halted && idx < max_steps) {
    auto ev = step(st, idx);
    if (!ev) break;  // trap: halted with diagnostic, nothing retired
    res.trace.push_back(*ev);
    ++idx;
  }
  res.truncated = !st.halted;
  return res;
}

}  // namespace bplab
