#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bplab/pipeline.hpp"

namespace bplab {

inline double mpki(uint64_t mispredicts, uint64_t retired) {
  return retired ? double(mispredicts) * 1000.0 / double(retired) : 0.0;
}

// Mispredictions of all unconditional transfers per kilo-instruction.
inline double jump_mpki(const SimStats& s) {
  const uint64_t m = s.cls(CtClass::DirectJump).mispredicts +
                     s.cls(CtClass::IndirectJump).mispredicts +
                     s.cls(CtClass::Return).mispredicts;
  return mpki(m, s.retired);
}

inline double branch_mpki(const SimStats& s) {
  return mpki(s.cls(CtClass::CondBranch).mispredicts, s.retired);
}

inline double branch_accuracy(const SimStats& s) {
  const ClassStats& b = s.cls(CtClass::CondBranch);
  return b.count ? 1.0 - double(b.mispredicts) / double(b.count) : 1.0;
}

inline nlohmann::json stats_to_json(const SimStats& s) {
  auto cls = [&](CtClass c) {
    const ClassStats& cs = s.cls(c);
    return nlohmann::json{{"count", cs.count},
                          {"mispredicts", cs.mispredicts},
                          {"mpki", mpki(cs.mispredicts, s.retired)}};
  };
  return nlohmann::json{
      {"retired", s.retired},
      {"cycles", s.cycles},
      {"penalty_cycles", s.penalty_cycles},
      {"ipc", s.ipc()},
      {"perfect_ipc", s.perfect_ipc()},
      {"classes",
       {{"cond_branch", cls(CtClass::CondBranch)},
        {"direct_jump", cls(CtClass::DirectJump)},
        {"indirect_jump", cls(CtClass::IndirectJump)},
        {"ret", cls(CtClass::Return)}}},
  };
}

struct ReportRow {
  std::string fixture;
  PredictLevel level;
  SimStats stats;
};

inline void write_report_csv(std::ostream& os,
                             const std::vector<ReportRow>& rows) {
  os << "fixture,level,ipc,jump_mpki,branch_mpki,branch_accuracy,perfect_ipc\n";
  const auto flags = os.flags();
  os.precision(6);
  os << std::fixed;
  for (const ReportRow& r : rows) {
    os << r.fixture << "," << level_name(r.level) << "," << r.stats.ipc()
       << "," << jump_mpki(r.stats) << "," << branch_mpki(r.stats) << ","
       << branch_accuracy(r.stats) << "," << r.stats.perfect_ipc() << "\n";
  }
  os.flags(flags);
}

}  // namespace bplab
