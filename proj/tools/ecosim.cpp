#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "ecosim/config.hpp"
#include "ecosim/sim.hpp"

namespace {

// Every config key becomes a --key flag; the two the shell touches most also
// get dashed spellings.
void add_config_flags(CLI::App* cmd, std::map<std::string, std::string>& overrides) {
  for (const ecosim::ConfigField& field : ecosim::config_fields()) {
    std::string names = "--" + field.name;
    if (field.name == "master_seed") names += ",--master-seed";
    if (field.name == "output_dir") names += ",--output-dir";
    cmd->add_option_function<std::string>(
        names, [&overrides, name = field.name](const std::string& v) { overrides[name] = v; },
        "override config key " + field.name);
  }
}

ecosim::RunConfig make_config(const std::string& config_path,
                              const std::map<std::string, std::string>& overrides) {
  ecosim::RunConfig config;
  if (!config_path.empty()) config = ecosim::load_config_file(config_path);
  for (const auto& [key, value] : overrides) ecosim::apply_config_value(config, key, value);
  config.validate();
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"digital ecosystem simulator"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "simulate the ecosystem and write trace + snapshot");
  std::string run_config_path;
  std::string resume_path;
  std::uint64_t halt_after = 0;
  std::map<std::string, std::string> run_overrides;
  run->add_option("--config", run_config_path, "config file of key = value lines");
  run->add_option("--resume", resume_path, "resume from a snapshot file");
  run->add_option("--halt-after", halt_after,
                  "stop after this many total requests and snapshot (0 = run to the end)");
  add_config_flags(run, run_overrides);

  auto* analyze = app.add_subcommand("analyze", "compute ecology metrics from run artifacts");
  std::string snapshot_path, trace_path, analyze_out;
  analyze->add_option("--snapshot", snapshot_path, "snapshot.json from a run")->required();
  analyze->add_option("--trace", trace_path, "trace.csv from a run")->required();
  analyze->add_option("--out", analyze_out, "output directory for metric CSVs")->required();

  auto* report = app.add_subcommand("report", "plain-text summary of a run directory");
  std::string report_dir;
  report->add_option("--out", report_dir, "directory holding trace.csv and snapshot.json")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      ecosim::RunConfig config = make_config(run_config_path, run_overrides);
      std::optional<std::string> resume;
      if (!resume_path.empty()) resume = resume_path;
      return ecosim::run_command(config, resume, halt_after);
    }
    if (analyze->parsed()) return ecosim::analyze_command(snapshot_path, trace_path, analyze_out);
    if (report->parsed()) return ecosim::report_command(report_dir);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 0;
}
