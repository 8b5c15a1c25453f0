// Branch-prediction lab harness.
//
//   bplab run --image F [--entry 0xADDR] --level L [--steps N] [--config C]
//             [--json|--csv] [--dump-trace T]
//   bplab trace --in T --level L [--config C] [--json|--csv]
//   bplab modelcheck --seed S --steps N
//
// --level accepts none, static, static+ras, static+ras+btb, +bimodal,
// +batage or all (run the whole ablation ladder).

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bplab/harness.hpp"
#include "bplab/modelcheck.hpp"
#include "bplab/report.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<bplab::PredictLevel> levels_for(const std::string& spec) {
  if (spec == "all")
    return {bplab::kAllLevels.begin(), bplab::kAllLevels.end()};
  const auto l = bplab::parse_level(spec);
  if (!l) throw CLI::ValidationError("--level", "unknown level '" + spec + "'");
  return {*l};
}

void print_human(const std::string& fixture, bplab::PredictLevel level,
                 const bplab::SimStats& s) {
  std::ostringstream os;
  os.precision(4);
  os << std::fixed;
  os << fixture << " @ " << bplab::level_name(level) << ": retired "
     << s.retired << ", cycles " << s.cycles << ", ipc " << s.ipc()
     << ", perfect_ipc " << s.perfect_ipc() << "\n"
     << "  branch: " << s.cls(bplab::CtClass::CondBranch).mispredicts << "/"
     << s.cls(bplab::CtClass::CondBranch).count << " mispredicted (accuracy "
     << bplab::branch_accuracy(s) << ", mpki " << bplab::branch_mpki(s)
     << ")\n"
     << "  jumps:  direct " << s.cls(bplab::CtClass::DirectJump).mispredicts
     << "/" << s.cls(bplab::CtClass::DirectJump).count << ", indirect "
     << s.cls(bplab::CtClass::IndirectJump).mispredicts << "/"
     << s.cls(bplab::CtClass::IndirectJump).count << ", returns "
     << s.cls(bplab::CtClass::Return).mispredicts << "/"
     << s.cls(bplab::CtClass::Return).count << " (jump mpki "
     << bplab::jump_mpki(s) << ")\n";
  std::cout << os.str();
}

void emit(const std::vector<bplab::ReportRow>& rows, bool json, bool csv) {
  if (csv) {
    bplab::write_report_csv(std::cout, rows);
    return;
  }
  if (json) {
    if (rows.size() == 1) {
      std::cout << bplab::stats_to_json(rows[0].stats).dump(2) << "\n";
    } else {
      nlohmann::json out;
      for (const auto& r : rows)
        out[std::string(bplab::level_name(r.level))] =
            bplab::stats_to_json(r.stats);
      std::cout << out.dump(2) << "\n";
    }
    return;
  }
  for (const auto& r : rows) print_human(r.fixture, r.level, r.stats);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"branch-prediction lab"};
  app.require_subcommand(1);

  // run
  auto* run_cmd = app.add_subcommand("run", "execute a memory image");
  std::string image_path, level_spec = "static+ras+btb+batage", config_path,
              dump_trace;
  std::string entry_str;
  uint64_t max_steps = 10'000'000;
  bool as_json = false, as_csv = false;
  run_cmd->add_option("--image", image_path, "memory image file")->required();
  run_cmd->add_option("--entry", entry_str, "entry pc override (hex)");
  run_cmd->add_option("--level", level_spec, "ablation level or 'all'");
  run_cmd->add_option("--steps", max_steps, "max instructions to execute");
  run_cmd->add_option("--config", config_path, "JSON config overrides");
  run_cmd->add_option("--dump-trace", dump_trace,
                      "write the control-transfer trace CSV here");
  run_cmd->add_flag("--json", as_json, "machine-readable stats");
  run_cmd->add_flag("--csv", as_csv, "report table CSV");

  // trace
  auto* trace_cmd = app.add_subcommand("trace", "replay a transfer trace");
  std::string trace_path, trace_level = "static+ras+btb+batage",
              trace_config;
  bool t_json = false, t_csv = false;
  trace_cmd->add_option("--in", trace_path, "trace CSV file")->required();
  trace_cmd->add_option("--level", trace_level, "ablation level or 'all'");
  trace_cmd->add_option("--config", trace_config, "JSON config overrides");
  trace_cmd->add_flag("--json", t_json, "machine-readable stats");
  trace_cmd->add_flag("--csv", t_csv, "report table CSV");

  // modelcheck
  auto* mc_cmd = app.add_subcommand(
      "modelcheck", "randomized equivalence vs. the reference model");
  uint64_t mc_seed = 1, mc_steps = 100000;
  mc_cmd->add_option("--seed", mc_seed, "stimulus seed");
  mc_cmd->add_option("--steps", mc_steps, "stimulus length (>= 1)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      const bplab::MemoryImage img = bplab::MemoryImage::parse(slurp(image_path));
      std::optional<uint32_t> entry;
      if (!entry_str.empty())
        entry = static_cast<uint32_t>(std::stoul(entry_str, nullptr, 16));

      bplab::RunConfig rc;
      rc.max_steps = max_steps;
      if (!config_path.empty())
        bplab::apply_config_json(rc, nlohmann::json::parse(slurp(config_path)));

      if (!dump_trace.empty()) {
        bplab::MachineState st = bplab::MachineState::from_image(img, entry);
        const bplab::RunResult rr = bplab::run(st, rc.max_steps);
        std::ofstream out(dump_trace, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + dump_trace);
        bplab::write_trace_csv(out, rr.trace);
      }

      std::vector<bplab::ReportRow> rows;
      for (const auto level : levels_for(level_spec)) {
        const bplab::BenchResult res = bplab::run_bench(img, level, rc, entry);
        if (res.truncated)
          std::cerr << "note: step budget exhausted before halt (trace "
                       "truncated at "
                    << res.stats.retired << " instructions)\n";
        if (res.final_state.trap)
          std::cerr << "note: program trapped: "
                    << bplab::trap_name(res.final_state.trap->kind)
                    << " at pc 0x"
                    << bplab::MemoryImage::hex32(res.final_state.trap->pc)
                    << "\n";
        rows.push_back({image_path, level, res.stats});
      }
      emit(rows, as_json, as_csv);
      return 0;
    }

    if (*trace_cmd) {
      const bplab::TraceDoc doc = bplab::TraceDoc::parse(slurp(trace_path));
      bplab::RunConfig rc;
      if (!trace_config.empty())
        bplab::apply_config_json(rc,
                                 nlohmann::json::parse(slurp(trace_config)));
      std::vector<bplab::ReportRow> rows;
      for (const auto level : levels_for(trace_level))
        rows.push_back({trace_path, level, bplab::run_trace(doc, level, rc)});
      emit(rows, t_json, t_csv);
      return 0;
    }

    if (*mc_cmd) {
      const auto v = bplab::run_equivalence(mc_seed, mc_steps);
      if (v.passed) {
        std::cout << "modelcheck: PASS (" << v.steps_run << " steps, seed "
                  << mc_seed << ")\n";
        return 0;
      }
      std::cout << "modelcheck: FAIL at step " << v.divergence_step << "\n"
                << v.detail << "\n";
      return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
