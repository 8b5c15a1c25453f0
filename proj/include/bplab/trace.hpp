#pragma once

#include <charconv>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bplab/core.hpp"

namespace bplab {

struct TraceError : std::runtime_error {
  int line;
  TraceError(int line_, const std::string& what_)
      : std::runtime_error("line " + std::to_string(line_) + ": " + what_),
        line(line_) {}
};

// Control-transfer trace document. Only transfers are listed; the header's
// retired count covers the instructions in between.
//
// Format: a `retired,N` header, then one record per transfer:
//   retire_index,pc_hex,kind,taken,target_hex     kind in {B,J,I,R}
//
// Limitations inherent to the format: branch offsets are only recoverable for
// taken records (not-taken branches are treated as forward by the static
// rule) and jumps carry no call marker (the RAS only pops on R records).
struct TraceDoc {
  uint64_t retired = 0;
  std::vector<RetireEvent> events;

  static TraceDoc parse(std::string_view text) {
    TraceDoc doc;
    int line_no = 0;
    bool have_header = false;
    uint64_t prev_index = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
      const size_t eol = text.find('\n', pos);
      std::string_view line =
          text.substr(pos, eol == std::string_view::npos ? text.size() - pos
                                                         : eol - pos);
      ++line_no;
      pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
      if (const size_t hash = line.find('#'); hash != std::string_view::npos)
        line = line.substr(0, hash);
      while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
        line.remove_suffix(1);
      if (line.empty()) continue;

      std::vector<std::string_view> f = split(line);
      if (!have_header) {
        if (f.size() != 2 || f[0] != "retired")
          throw TraceError(line_no, "expected 'retired,N' header");
        doc.retired = parse_u64(f[1], line_no);
        have_header = true;
        continue;
      }
      if (f.size() != 5) throw TraceError(line_no, "expected 5 fields");

      RetireEvent ev{};
      ev.retire_index = parse_u64(f[0], line_no);
      ev.pc = parse_hex(f[1], line_no);
      ev.taken = parse_bit(f[3], line_no);
      ev.target = parse_hex(f[4], line_no);
      if (!doc.events.empty() && ev.retire_index <= prev_index)
        throw TraceError(line_no, "retire_index not increasing");
      prev_index = ev.retire_index;

      DecodedCt ct{};
      if (f[2] == "B") {
        ct.kind = CtKind::CondBranch;
        if (ev.taken) {
          const int64_t off = static_cast<int64_t>(ev.target) -
                              static_cast<int64_t>(ev.pc);
          if (off < -4096 || off > 4094 || off % 2 != 0)
            throw TraceError(line_no, "branch target out of B-immediate range");
          ct.imm = static_cast<int32_t>(off);
        } else {
          if (ev.target != ev.pc + 4)
            throw TraceError(line_no, "not-taken branch must fall through");
          // The offset of a never-taken branch is not recoverable from the
          // trace. Stand in a forward offset distinct from the fall-through
          // so a taken prediction still shows up as a misprediction.
          ct.imm = 8;
        }
      } else if (f[2] == "J") {
        ct.kind = CtKind::DirectJump;
        ct.imm = static_cast<int32_t>(ev.target - ev.pc);
        if (!ev.taken) throw TraceError(line_no, "jumps are always taken");
      } else if (f[2] == "I") {
        ct.kind = CtKind::IndirectJump;
        if (!ev.taken) throw TraceError(line_no, "jumps are always taken");
      } else if (f[2] == "R") {
        ct.kind = CtKind::IndirectJump;
        ct.is_return = true;
        ct.rs1 = 1;
        if (!ev.taken) throw TraceError(line_no, "jumps are always taken");
      } else {
        throw TraceError(line_no, "unknown kind '" + std::string(f[2]) + "'");
      }
      ev.ct = ct;
      doc.events.push_back(ev);
    }
    if (!have_header) throw TraceError(line_no, "missing 'retired,N' header");
    if (doc.retired < doc.events.size())
      throw TraceError(line_no, "retired count below number of records");
    return doc;
  }

 private:
  static std::vector<std::string_view> split(std::string_view s) {
    std::vector<std::string_view> out;
    size_t start = 0;
    for (size_t i = 0; i <= s.size(); ++i) {
      if (i == s.size() || s[i] == ',') {
        std::string_view tok = s.substr(start, i - start);
        while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
        while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
        out.push_back(tok);
        start = i + 1;
      }
    }
    return out;
  }

  static uint64_t parse_u64(std::string_view s, int line_no) {
    uint64_t v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
      throw TraceError(line_no, "bad number '" + std::string(s) + "'");
    return v;
  }

  static uint32_t parse_hex(std::string_view s, int line_no) {
    if (s.size() >= 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X'))
      s.remove_prefix(2);
    uint32_t v = 0;
    const auto [p, ec] =
        std::from_chars(s.data(), s.data() + s.size(), v, 16);
    if (ec != std::errc() || p != s.data() + s.size())
      throw TraceError(line_no, "bad hex value '" + std::string(s) + "'");
    return v;
  }

  static bool parse_bit(std::string_view s, int line_no) {
    if (s == "0") return false;
    if (s == "1") return true;
    throw TraceError(line_no, "taken must be 0 or 1");
  }
};

// Writes the transfer records of a full retirement trace in the format above.
inline void write_trace_csv(std::ostream& os,
                            const std::vector<RetireEvent>& trace) {
  os << "retired," << trace.size() << "\n";
  for (const RetireEvent& ev : trace) {
    if (!ev.ct) continue;
    char kind = 'B';
    switch (ev.ct->kind) {
      case CtKind::CondBranch: kind = 'B'; break;
      case CtKind::DirectJump: kind = 'J'; break;
      case CtKind::IndirectJump: kind = ev.ct->is_return ? 'R' : 'I'; break;
    }
    os << ev.retire_index << ",0x" << MemoryImage::hex32(ev.pc) << "," << kind
       << "," << (ev.taken ? 1 : 0) << ",0x" << MemoryImage::hex32(ev.target)
       << "\n";
  }
}

}  // namespace bplab
