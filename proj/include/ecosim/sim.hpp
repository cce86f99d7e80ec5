#ifndef ECOSIM_SIM_HPP
#define ECOSIM_SIM_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ecosim/config.hpp"
#include "ecosim/ecology.hpp"
#include "ecosim/network.hpp"
#include "ecosim/rng.hpp"
#include "ecosim/userbase.hpp"

namespace ecosim {

struct NetworkSeriesRow {
  std::uint64_t request_index = 0;
  NetworkStats stats;
};

// Complete mutable state of one run. A snapshot serializes everything here
// except `trace`, which lives in the trace CSV; resuming from a snapshot
// replays the remaining requests bit-identically.
struct SimState {
  RunConfig config;
  HabitatNetwork net;
  Scenario scenario;
  SplitMix64 request_stream;
  SplitMix64 migration_stream;
  SplitMix64 deployment_stream;
  std::vector<SuccessionRecord> trace;  // records produced by this process
  std::vector<NetworkSeriesRow> network_series;
  std::vector<std::uint32_t> best_lengths;  // delivered best length per request
};

// Builds the network, the scenario and the initial deployment (with
// neighbour copies), and samples the request-0 network statistics row.
SimState init_run(const RunConfig& config);

// One request: generate, evolve, record, resolve usage, migrate, expire,
// maybe deploy, prune/sample on cadence.
void step_request(SimState& state);

// Steps until the global request counter reaches `upto`.
void run_requests(SimState& state, std::uint64_t upto);

// CSV rendering. Formats are fixed so identical state yields identical bytes.
std::string trace_csv(const std::vector<SuccessionRecord>& records);
std::string network_csv(const std::vector<NetworkSeriesRow>& rows);
std::vector<SuccessionRecord> parse_trace_csv(const std::string& text,
                                              const std::string& source_name);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// Subcommand drivers; they print diagnostics to stderr and return an exit code.
int run_command(const RunConfig& config, const std::optional<std::string>& resume_path,
                std::uint64_t halt_after);
int analyze_command(const std::string& snapshot_path, const std::string& trace_path,
                    const std::string& out_dir);
int report_command(const std::string& dir);

}  // namespace ecosim

#endif  // ECOSIM_SIM_HPP
