#ifndef ECOSIM_CONFIG_HPP
#define ECOSIM_CONFIG_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "ecosim/evolve.hpp"
#include "ecosim/network.hpp"
#include "ecosim/userbase.hpp"

namespace ecosim {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Every tunable of the simulator, flat. Config files use `key = value` lines
// with `#` comments; each key is also available as a --key CLI flag.
struct RunConfig {
  std::uint64_t master_seed = 1;
  std::string output_dir = "out";

  // scenario
  std::uint32_t num_users = 100;
  std::uint32_t num_communities = 10;
  std::uint32_t initial_agents_per_user = 5;
  std::uint32_t requests_per_new_agent = 3;
  std::uint64_t total_requests = 1000;
  double initial_coverage = 0.70;
  std::uint32_t request_sets = 8;
  double noise_prob = 0.03;
  std::uint32_t attr_id_max = 100;
  std::int64_t value_max = 10;
  std::uint32_t agent_desc_max = 3;
  std::uint32_t set_size_min = 1;
  std::uint32_t set_size_max = 3;
  double gap_agent_prob = 0.8;

  // evolution
  double crossover_fraction = 0.10;
  double mutation_fraction = 0.10;
  double parsimony_beta = 0.1;
  std::uint32_t pop_base = 20;
  std::uint32_t pop_per_len = 5;
  std::uint32_t pop_min = 20;
  std::uint32_t pop_max = 200;
  std::uint32_t max_generations = 50;
  std::uint32_t stagnation_window = 10;
  double d_miss = 10.0;
  double stored_seed_prob = 0.3;
  std::uint32_t seed_len_min = 1;
  std::uint32_t seed_len_max = 4;

  // network
  double mean_degree = 4.0;
  double p_init = 0.5;
  double alpha_success = 0.1;
  double alpha_failure = 0.1;
  double p_prune = 0.01;
  bool shortcuts_enabled = true;
  std::uint64_t expiry_window = 10;
  std::uint64_t pool_capacity = 200;
  double stats_threshold = 0.5;

  // orchestration and analysis
  std::uint64_t prune_every = 50;
  std::uint64_t stats_every = 100;
  std::uint64_t succession_window = 50;
  double species_theta = 0.10;
  std::uint32_t area_replicates = 10;
  std::uint32_t area_n_max = 100;

  ScenarioParams scenario_params() const;
  EvolutionParams evolution_params() const;
  NetworkParams network_params() const;

  // Throws ConfigError naming the offending key.
  void validate() const;
};

using ConfigMember = std::variant<std::uint32_t RunConfig::*, std::uint64_t RunConfig::*,
                                  std::int64_t RunConfig::*, double RunConfig::*,
                                  bool RunConfig::*, std::string RunConfig::*>;

struct ConfigField {
  std::string name;
  ConfigMember member;
};

const std::vector<ConfigField>& config_fields();

// Assigns one key. Unknown keys and unparsable values raise ConfigError.
void apply_config_value(RunConfig& config, const std::string& key, const std::string& value);
std::string config_value_string(const RunConfig& config, const std::string& key);

// Parses a `key = value` file with `#` comments. Errors carry line numbers.
RunConfig load_config_file(const std::string& path);
void apply_config_text(RunConfig& config, const std::string& text, const std::string& source_name);

}  // namespace ecosim

#endif  // ECOSIM_CONFIG_HPP
