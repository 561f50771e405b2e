#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "pnsynth/json_io.hpp"
#include "pnsynth/pipeline.hpp"

namespace fs = std::filesystem;
using namespace pnsynth;

namespace {

struct CommonOptions {
  std::string net_path;
  uint64_t max_states = 1'000'000;
  bool exact_cover = false;
  std::string tie_break = "arcs";
  std::string out_dir;
  std::string format = "text";
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("net", opts.net_path, "net description (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--max-states", opts.max_states,
                  "abort exploration beyond this many states")
      ->capture_default_str();
  cmd->add_flag("--exact-cover", opts.exact_cover,
                "force the exhaustive minimal cover search");
  cmd->add_option("--tie-break", opts.tie_break,
                  "secondary objective between equally small covers")
      ->check(CLI::IsMember({"places", "arcs"}))
      ->capture_default_str();
  cmd->add_option("--out", opts.out_dir, "directory for report and artifact files");
  cmd->add_option("--format", opts.format, "stdout format")
      ->check(CLI::IsMember({"json", "text"}))
      ->capture_default_str();
}

PipelineOptions pipeline_options(const CommonOptions& opts) {
  PipelineOptions po;
  po.max_states = opts.max_states;
  po.exact_cover = opts.exact_cover;
  po.tie_break = opts.tie_break == "places" ? TieBreak::Places : TieBreak::Arcs;
  return po;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Internal, "cannot write '" + path.string() + "'");
  out << content;
}

void write_artifacts(const CommonOptions& opts, const Report& report) {
  if (opts.out_dir.empty()) return;
  fs::create_directories(opts.out_dir);
  const fs::path dir(opts.out_dir);
  write_file(dir / "report.json", report_json(report).dump(2) + "\n");
  write_file(dir / "report.txt", report_text(report));
  if (report.synthesis_ran && report.synthesis.controlled) {
    write_file(dir / "controlled_net.json",
               net_to_json(*report.synthesis.controlled).dump(2) + "\n");
  }
}

void print_report(const CommonOptions& opts, const Report& report) {
  if (opts.format == "json") {
    std::cout << report_json(report).dump(2) << "\n";
  } else {
    std::cout << report_text(report);
  }
}

std::map<uint32_t, StateClass> highlight_for(const ReachabilityGraph& rg,
                                             const ReachabilityGraph& quasi,
                                             const StateClassification& cls) {
  // Classification lives on the quasi graph; transfer by marking.
  std::map<uint32_t, StateClass> by_quasi_state;
  for (uint32_t s : cls.dangerous) by_quasi_state[s] = StateClass::Dangerous;
  for (uint32_t s : cls.forbidden) by_quasi_state[s] = StateClass::Forbidden;
  for (uint32_t s : cls.border) by_quasi_state[s] = StateClass::Border;
  for (uint32_t s : cls.admissible) by_quasi_state[s] = StateClass::Admissible;

  std::map<uint32_t, StateClass> out;
  for (uint32_t s = 0; s < rg.states.size(); ++s) {
    if (auto q = quasi.find_state(rg.states[s])) {
      auto it = by_quasi_state.find(*q);
      if (it != by_quasi_state.end()) out[s] = it->second;
    }
  }
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"supervisor synthesis for safe, conservative Petri nets"};
  app.require_subcommand(1);

  CommonOptions analyze_opts, synth_opts, verify_opts, dot_opts;
  CLI::App* analyze = app.add_subcommand(
      "analyze", "reachability, invariants and state classification");
  add_common(analyze, analyze_opts);
  CLI::App* synthesize = app.add_subcommand(
      "synthesize", "full supervisor synthesis with verification");
  add_common(synthesize, synth_opts);
  CLI::App* verify = app.add_subcommand(
      "verify", "synthesize, then report only the closed-loop verification");
  add_common(verify, verify_opts);
  CLI::App* export_dot_cmd = app.add_subcommand(
      "export-dot", "write the real and quasi reachability graphs as DOT");
  add_common(export_dot_cmd, dot_opts);

  CLI11_PARSE(app, argc, argv);

  if (analyze->parsed()) {
    Report report = run_analyze(load_net(analyze_opts.net_path),
                                pipeline_options(analyze_opts));
    print_report(analyze_opts, report);
    write_artifacts(analyze_opts, report);
    return 0;
  }

  if (synthesize->parsed()) {
    Report report = run_synthesize(load_net(synth_opts.net_path),
                                   pipeline_options(synth_opts));
    print_report(synth_opts, report);
    write_artifacts(synth_opts, report);
    return report.verification.ok ? 0 : 1;
  }

  if (verify->parsed()) {
    Report report = run_synthesize(load_net(verify_opts.net_path),
                                   pipeline_options(verify_opts));
    if (verify_opts.format == "json") {
      std::cout << report_json(report)["verification"].dump(2) << "\n";
    } else {
      std::cout << "verification: " << (report.verification.ok ? "PASS" : "FAIL") << " ("
                << report.verification.controlled_states << " controlled states)\n";
      for (const std::string& issue : report.verification.issues) {
        std::cout << "  issue: " << issue << "\n";
      }
    }
    write_artifacts(verify_opts, report);
    return report.verification.ok ? 0 : 1;
  }

  // export-dot
  PetriNet net = load_net(dot_opts.net_path);
  PipelineOptions po = pipeline_options(dot_opts);
  Report report = run_analyze(net, po);
  const fs::path dir(dot_opts.out_dir.empty() ? "." : dot_opts.out_dir);
  fs::create_directories(dir);
  const fs::path real_path = dir / "real.dot";
  const fs::path quasi_path = dir / "quasi.dot";
  write_file(real_path,
             export_dot(report.rg_real, net,
                        highlight_for(report.rg_real, report.rg_quasi, report.cls)));
  write_file(quasi_path,
             export_dot(report.rg_quasi, net,
                        highlight_for(report.rg_quasi, report.rg_quasi, report.cls)));
  std::cout << "wrote " << real_path.string() << "\n";
  std::cout << "wrote " << quasi_path.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::Parse:
      case ErrorKind::Validation:
      case ErrorKind::Safety:
      case ErrorKind::Partition:
        return 2;
      case ErrorKind::StateCap:
        return 3;
      case ErrorKind::Infeasible:
        return 4;
      case ErrorKind::InadmissibleSupervisor:
        return 5;
      case ErrorKind::Internal:
        return 70;
    }
    return 70;
  } catch (const std::exception& e) {
    std::cerr << "error (internal): " << e.what() << "\n";
    return 70;
  }
}
