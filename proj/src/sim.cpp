#include "ecosim/sim.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ecosim/evolve.hpp"
#include "ecosim/snapshot.hpp"

namespace ecosim {

SimState init_run(const RunConfig& config) {
  config.validate();
  SimState state;
  state.config = config;

  SplitMix64 net_rng = make_stream(config.master_seed, kStreamNetworkInit);
  state.net = init_network(config.num_users, config.mean_degree, config.p_init, net_rng);

  SplitMix64 scenario_rng = make_stream(config.master_seed, kStreamScenario);
  state.scenario =
      build_scenario(config.scenario_params(), state.net, config.pool_capacity, scenario_rng);

  state.request_stream = make_stream(config.master_seed, kStreamRequests);
  state.migration_stream = make_stream(config.master_seed, kStreamMigration);
  state.deployment_stream = make_stream(config.master_seed, kStreamDeployment);

  // Initial deployment also distributes each agent one hop along the owner's
  // connections, so neighbours start with overlapping pools.
  NetworkParams net_params = config.network_params();
  for (Habitat& hab : state.net.habitats) {
    std::vector<Agent> own;
    for (const PoolAgent& p : hab.agents)
      if (p.own_user) own.push_back(p.agent);
    for (const Agent& agent : own)
      deployment_copies(state.net, hab.habitat_id, agent, state.migration_stream, net_params);
  }

  state.network_series.push_back(
      {0, network_stats(state.net, config.stats_threshold)});
  return state;
}

void step_request(SimState& state) {
  const RunConfig& config = state.config;
  NetworkParams net_params = config.network_params();
  ScenarioParams scen_params = config.scenario_params();

  std::uint64_t r = ++state.net.request_counter;

  auto [user_id, request] = next_request(state.scenario, scen_params, state.request_stream);
  request.request_id = r;
  std::uint32_t habitat_id = state.scenario.users[user_id].habitat_id;
  Habitat& habitat = state.net.habitat(habitat_id);

  EvolutionResult result =
      evolve(habitat, request, config.evolution_params(),
             make_stream(config.master_seed, kStreamPopulationBase + r));
  habitat.requests_completed += 1;

  state.trace.push_back(
      {r, user_id, habitat_id, result.generations_run, result.best_raw_fitness});
  state.best_lengths.push_back(static_cast<std::uint32_t>(result.best.length()));

  auto lineage = resolve_usage(state.net, habitat_id, result.best, net_params);
  migrate(state.net, habitat_id, result.best, lineage, state.migration_stream, net_params);
  expire_events(state.net, net_params);

  auto deployed = maybe_deploy_agent(state.scenario, user_id, state.net, scen_params,
                                     config.pool_capacity, state.deployment_stream);
  if (deployed)
    deployment_copies(state.net, habitat_id, *deployed, state.migration_stream, net_params);

  if (r % config.prune_every == 0) prune_and_shortcut(state.net, net_params);
  if (r % config.stats_every == 0)
    state.network_series.push_back({r, network_stats(state.net, config.stats_threshold)});
}

void run_requests(SimState& state, std::uint64_t upto) {
  while (state.net.request_counter < upto) step_request(state);
}

namespace {

void append_double(std::string& out, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  out += buf;
}

}  // namespace

std::string trace_csv(const std::vector<SuccessionRecord>& records) {
  std::string out = "request_index,user_id,habitat_id,generations,effectiveness\n";
  char buf[128];
  for (const SuccessionRecord& rec : records) {
    std::snprintf(buf, sizeof(buf), "%" PRIu64 ",%u,%u,%u,%.6f\n", rec.request_index,
                  rec.user_id, rec.habitat_id, rec.generations, rec.effectiveness);
    out += buf;
  }
  return out;
}

std::string network_csv(const std::vector<NetworkSeriesRow>& rows) {
  std::string out = "request_index,clustering_coefficient,char_path_length,edge_count\n";
  char buf[160];
  for (const NetworkSeriesRow& row : rows) {
    std::snprintf(buf, sizeof(buf), "%" PRIu64 ",", row.request_index);
    out += buf;
    append_double(out, row.stats.clustering_coefficient);
    out += ',';
    if (row.stats.char_path_length)
      append_double(out, *row.stats.char_path_length);
    else
      out += "nan";
    std::snprintf(buf, sizeof(buf), ",%zu\n", row.stats.edge_count);
    out += buf;
  }
  return out;
}

std::vector<SuccessionRecord> parse_trace_csv(const std::string& text,
                                              const std::string& source_name) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::vector<SuccessionRecord> records;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1) {
      if (line != "request_index,user_id,habitat_id,generations,effectiveness")
        throw std::runtime_error(source_name + ":1: unexpected trace header");
      continue;
    }
    if (line.empty()) continue;
    SuccessionRecord rec;
    char trailing = 0;
    int matched = std::sscanf(line.c_str(), "%" SCNu64 ",%u,%u,%u,%lf%c", &rec.request_index,
                              &rec.user_id, &rec.habitat_id, &rec.generations,
                              &rec.effectiveness, &trailing);
    if (matched != 5)
      throw std::runtime_error(source_name + ":" + std::to_string(line_no) +
                               ": malformed trace row '" + line + "'");
    records.push_back(rec);
  }
  return records;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

int run_command(const RunConfig& config, const std::optional<std::string>& resume_path,
                std::uint64_t halt_after) {
  try {
    SimState state = resume_path ? load_snapshot_file(*resume_path) : init_run(config);
    if (resume_path) {
      // The resumed run keeps the snapshot's configuration except for where
      // output goes and how far to simulate.
      state.config.output_dir = config.output_dir;
      state.config.total_requests = config.total_requests;
      state.config.validate();
    }

    std::uint64_t upto = state.config.total_requests;
    if (halt_after > 0 && halt_after < upto) upto = halt_after;
    run_requests(state, upto);

    std::filesystem::create_directories(state.config.output_dir);
    std::string base = state.config.output_dir + "/";
    write_text_file(base + "trace.csv", trace_csv(state.trace));
    write_text_file(base + "network.csv", network_csv(state.network_series));
    write_snapshot_file(state, base + "snapshot.json");
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "run: " << e.what() << "\n";
    return 1;
  }
}

namespace {

std::string species_area_csv(const SpeciesAreaResult& area) {
  std::string out = "n,mean_species,log10_n,log10_mean\n";
  char buf[160];
  for (const SpeciesAreaPoint& pt : area.curve) {
    std::snprintf(buf, sizeof(buf), "%u,%.6f,%.6f,%.6f\n", pt.n, pt.mean_species,
                  std::log10(static_cast<double>(pt.n)), std::log10(pt.mean_species));
    out += buf;
  }
  return out;
}

std::string abundance_csv(const std::vector<std::pair<std::uint32_t, std::uint64_t>>& classes) {
  std::string out = "abundance_class,species_count\n";
  char buf[96];
  for (const auto& [k, count] : classes) {
    std::snprintf(buf, sizeof(buf), "%u,%" PRIu64 "\n", k, count);
    out += buf;
  }
  return out;
}

std::string fits_csv(const std::vector<FitResult>& fits) {
  std::string out = "model,param1,param2,r_squared\n";
  char buf[200];
  for (const FitResult& fit : fits) {
    std::snprintf(buf, sizeof(buf), "%s,%.9f,%.9f,%.6f\n", fit.model.c_str(), fit.param1,
                  fit.param2, fit.r_squared);
    out += buf;
  }
  return out;
}

}  // namespace

int analyze_command(const std::string& snapshot_path, const std::string& trace_path,
                    const std::string& out_dir) {
  try {
    SimState state = load_snapshot_file(snapshot_path);
    auto records = parse_trace_csv(read_text_file(trace_path), trace_path);

    std::filesystem::create_directories(out_dir);
    std::string base = out_dir + "/";

    write_text_file(base + "succession.csv", trace_csv(records));
    write_text_file(base + "network.csv", network_csv(state.network_series));

    auto partition =
        cluster_species(collect_organisms(state.net), state.config.species_theta);
    write_text_file(base + "abundance.csv", abundance_csv(relative_abundance(partition)));

    std::vector<FitResult> fits;
    std::vector<double> sizes;
    for (const SpeciesCluster& c : partition.clusters)
      sizes.push_back(static_cast<double>(c.multiplicity));
    if (sizes.size() >= 3) fits.push_back(log_normal_fit(sizes));

    SplitMix64 area_rng = make_stream(state.config.master_seed, kStreamAnalysis);
    auto n_max = std::min<std::uint32_t>(state.config.area_n_max,
                                         static_cast<std::uint32_t>(state.net.habitats.size()));
    auto area =
        species_area(state.net, partition, state.config.area_replicates, n_max, area_rng);
    fits.push_back(area.fit);
    write_text_file(base + "species_area.csv", species_area_csv(area));
    write_text_file(base + "fits.csv", fits_csv(fits));
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "analyze: " << e.what() << "\n";
    return 1;
  }
}

int report_command(const std::string& dir) {
  try {
    SimState state = load_snapshot_file(dir + "/snapshot.json");
    auto records = parse_trace_csv(read_text_file(dir + "/trace.csv"), dir + "/trace.csv");

    std::ostringstream out;
    out.setf(std::ios::fixed);
    out.precision(4);

    out << "requests completed: " << records.size() << "\n";
    if (!records.empty()) {
      std::size_t tail = std::min<std::size_t>(100, records.size());
      auto smooth = succession_curve(records, state.config.succession_window);
      double first = 0.0, last = 0.0, raw_last = 0.0;
      for (std::size_t i = 0; i < tail; ++i) {
        first += smooth[i];
        last += smooth[smooth.size() - tail + i];
        raw_last += records[records.size() - tail + i].effectiveness;
      }
      first /= static_cast<double>(tail);
      last /= static_cast<double>(tail);
      raw_last /= static_cast<double>(tail);
      out << "effectiveness, mean of final " << tail << " requests: " << raw_last << "\n";
      out << "smoothed effectiveness, first " << tail << " mean: " << first << "\n";
      out << "smoothed effectiveness, final " << tail << " mean: " << last << "\n";
      out << "succession improvement: " << (last - first) << "\n";

      double worst_drop = 0.0;
      for (std::size_t w = 50; w + 50 <= records.size(); w += 50) {
        double prev = 0.0, cur = 0.0;
        for (std::size_t i = 0; i < 50; ++i) {
          prev += records[w - 50 + i].effectiveness;
          cur += records[w + i].effectiveness;
        }
        worst_drop = std::max(worst_drop, (prev - cur) / 50.0);
      }
      out << "worst 50-request window drop: " << worst_drop << "\n";
    }
    if (!state.best_lengths.empty()) {
      std::size_t tail = std::min<std::size_t>(100, state.best_lengths.size());
      double mean_len = 0.0;
      for (std::size_t i = 0; i < tail; ++i)
        mean_len += state.best_lengths[state.best_lengths.size() - tail + i];
      out << "mean best-response length, final " << tail << ": " << mean_len / tail << "\n";
    }

    auto partition =
        cluster_species(collect_organisms(state.net), state.config.species_theta);
    out << "organisms: " << partition.organisms.size()
        << ", species: " << partition.clusters.size() << "\n";
    auto classes = relative_abundance(partition);
    if (!classes.empty()) {
      auto modal = classes.begin();
      for (auto it = classes.begin(); it != classes.end(); ++it)
        if (it->second > modal->second) modal = it;
      out << "abundance classes: " << classes.size() << ", modal class: " << modal->first
          << " (lowest class " << classes.front().first << ")\n";
    }

    SplitMix64 area_rng = make_stream(state.config.master_seed, kStreamAnalysis);
    auto n_max = std::min<std::uint32_t>(state.config.area_n_max,
                                         static_cast<std::uint32_t>(state.net.habitats.size()));
    auto area =
        species_area(state.net, partition, state.config.area_replicates, n_max, area_rng);
    out << "species-area: slope " << area.fit.param1 << ", intercept " << area.fit.param2
        << ", r^2 " << area.fit.r_squared << "\n";

    if (!state.network_series.empty()) {
      const auto& first = state.network_series.front();
      const auto& last = state.network_series.back();
      out << "clustering coefficient: initial " << first.stats.clustering_coefficient
          << ", final " << last.stats.clustering_coefficient << "\n";
      out << "edges above threshold: initial " << first.stats.edge_count << ", final "
          << last.stats.edge_count << "\n";
    }
    out << "connection probabilities in [0,1]: "
        << (probabilities_valid(state.net) ? "yes" : "NO") << "\n";

    write_text_file(dir + "/report.txt", out.str());
    std::cout << out.str();
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "report: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace ecosim
