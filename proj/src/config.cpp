#include "ecosim/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace ecosim {

ScenarioParams RunConfig::scenario_params() const {
  ScenarioParams p;
  p.num_users = num_users;
  p.num_communities = num_communities;
  p.initial_agents_per_user = initial_agents_per_user;
  p.requests_per_new_agent = requests_per_new_agent;
  p.total_requests = total_requests;
  p.initial_coverage = initial_coverage;
  p.request_sets = request_sets;
  p.noise_prob = noise_prob;
  p.attr_id_max = attr_id_max;
  p.value_max = static_cast<std::int32_t>(value_max);
  p.agent_desc_max = agent_desc_max;
  p.set_size_min = set_size_min;
  p.set_size_max = set_size_max;
  p.gap_agent_prob = gap_agent_prob;
  return p;
}

EvolutionParams RunConfig::evolution_params() const {
  EvolutionParams p;
  p.crossover_fraction = crossover_fraction;
  p.mutation_fraction = mutation_fraction;
  p.beta = parsimony_beta;
  p.pop_base = pop_base;
  p.pop_per_len = pop_per_len;
  p.pop_min = pop_min;
  p.pop_max = pop_max;
  p.max_generations = max_generations;
  p.stagnation_window = stagnation_window;
  p.d_miss = d_miss;
  p.stored_seed_prob = stored_seed_prob;
  p.seed_len_min = seed_len_min;
  p.seed_len_max = seed_len_max;
  return p;
}

NetworkParams RunConfig::network_params() const {
  NetworkParams p;
  p.p_init = p_init;
  p.alpha_success = alpha_success;
  p.alpha_failure = alpha_failure;
  p.p_prune = p_prune;
  p.shortcuts_enabled = shortcuts_enabled;
  p.expiry_window = expiry_window;
  p.pool_capacity = pool_capacity;
  p.stats_threshold = stats_threshold;
  return p;
}

const std::vector<ConfigField>& config_fields() {
  static const std::vector<ConfigField> fields = {
      {"master_seed", &RunConfig::master_seed},
      {"output_dir", &RunConfig::output_dir},
      {"num_users", &RunConfig::num_users},
      {"num_communities", &RunConfig::num_communities},
      {"initial_agents_per_user", &RunConfig::initial_agents_per_user},
      {"requests_per_new_agent", &RunConfig::requests_per_new_agent},
      {"total_requests", &RunConfig::total_requests},
      {"initial_coverage", &RunConfig::initial_coverage},
      {"request_sets", &RunConfig::request_sets},
      {"noise_prob", &RunConfig::noise_prob},
      {"attr_id_max", &RunConfig::attr_id_max},
      {"value_max", &RunConfig::value_max},
      {"agent_desc_max", &RunConfig::agent_desc_max},
      {"set_size_min", &RunConfig::set_size_min},
      {"set_size_max", &RunConfig::set_size_max},
      {"gap_agent_prob", &RunConfig::gap_agent_prob},
      {"crossover_fraction", &RunConfig::crossover_fraction},
      {"mutation_fraction", &RunConfig::mutation_fraction},
      {"parsimony_beta", &RunConfig::parsimony_beta},
      {"pop_base", &RunConfig::pop_base},
      {"pop_per_len", &RunConfig::pop_per_len},
      {"pop_min", &RunConfig::pop_min},
      {"pop_max", &RunConfig::pop_max},
      {"max_generations", &RunConfig::max_generations},
      {"stagnation_window", &RunConfig::stagnation_window},
      {"d_miss", &RunConfig::d_miss},
      {"stored_seed_prob", &RunConfig::stored_seed_prob},
      {"seed_len_min", &RunConfig::seed_len_min},
      {"seed_len_max", &RunConfig::seed_len_max},
      {"mean_degree", &RunConfig::mean_degree},
      {"p_init", &RunConfig::p_init},
      {"alpha_success", &RunConfig::alpha_success},
      {"alpha_failure", &RunConfig::alpha_failure},
      {"p_prune", &RunConfig::p_prune},
      {"shortcuts_enabled", &RunConfig::shortcuts_enabled},
      {"expiry_window", &RunConfig::expiry_window},
      {"pool_capacity", &RunConfig::pool_capacity},
      {"stats_threshold", &RunConfig::stats_threshold},
      {"prune_every", &RunConfig::prune_every},
      {"stats_every", &RunConfig::stats_every},
      {"succession_window", &RunConfig::succession_window},
      {"species_theta", &RunConfig::species_theta},
      {"area_replicates", &RunConfig::area_replicates},
      {"area_n_max", &RunConfig::area_n_max},
  };
  return fields;
}

namespace {

const ConfigField& find_field(const std::string& key) {
  for (const ConfigField& f : config_fields())
    if (f.name == key) return f;
  throw ConfigError("unknown config key '" + key + "'");
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
  throw ConfigError("invalid value for config key '" + key + "': '" + value + "'");
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    if (value.empty() || value[0] == '-') bad_value(key, value);
    std::uint64_t v = std::stoull(value, &pos, 10);
    if (pos != value.size()) bad_value(key, value);
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (...) {
    bad_value(key, value);
  }
}

std::int64_t parse_i64(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    std::int64_t v = std::stoll(value, &pos, 10);
    if (pos != value.size()) bad_value(key, value);
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (...) {
    bad_value(key, value);
  }
}

double parse_f64(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    double v = std::stod(value, &pos);
    if (pos != value.size()) bad_value(key, value);
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (...) {
    bad_value(key, value);
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  bad_value(key, value);
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

void apply_config_value(RunConfig& config, const std::string& key, const std::string& value) {
  const ConfigField& field = find_field(key);
  std::visit(
      [&](auto member) {
        using T = std::remove_cvref_t<decltype(config.*member)>;
        if constexpr (std::is_same_v<T, std::uint32_t>) {
          std::uint64_t v = parse_u64(key, value);
          if (v > 0xFFFFFFFFull) bad_value(key, value);
          config.*member = static_cast<std::uint32_t>(v);
        } else if constexpr (std::is_same_v<T, std::uint64_t>) {
          config.*member = parse_u64(key, value);
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          config.*member = parse_i64(key, value);
        } else if constexpr (std::is_same_v<T, double>) {
          config.*member = parse_f64(key, value);
        } else if constexpr (std::is_same_v<T, bool>) {
          config.*member = parse_bool(key, value);
        } else {
          config.*member = value;
        }
      },
      field.member);
}

std::string config_value_string(const RunConfig& config, const std::string& key) {
  const ConfigField& field = find_field(key);
  return std::visit(
      [&](auto member) -> std::string {
        using T = std::remove_cvref_t<decltype(config.*member)>;
        if constexpr (std::is_same_v<T, double>) {
          char buf[64];
          std::snprintf(buf, sizeof(buf), "%.17g", config.*member);
          return buf;
        } else if constexpr (std::is_same_v<T, bool>) {
          return config.*member ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::string>) {
          return config.*member;
        } else {
          return std::to_string(config.*member);
        }
      },
      field.member);
}

void apply_config_text(RunConfig& config, const std::string& text,
                       const std::string& source_name) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(source_name + ":" + std::to_string(line_no) +
                        ": expected 'key = value', got '" + line + "'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    try {
      apply_config_value(config, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(source_name + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  RunConfig config;
  apply_config_text(config, buffer.str(), path);
  return config;
}

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

}  // namespace

void RunConfig::validate() const {
  require(num_users >= 2, "num_users: need at least 2");
  require(num_communities >= 1, "num_communities: need at least 1");
  require(num_users >= num_communities, "num_communities: cannot exceed num_users");
  require(initial_coverage > 0.0 && initial_coverage <= 1.0,
          "initial_coverage: must be in (0, 1]");
  require(requests_per_new_agent >= 1, "requests_per_new_agent: must be >= 1");
  require(request_sets >= 4 && request_sets <= 12, "request_sets: must be in [4, 12]");
  require(noise_prob >= 0.0 && noise_prob <= 1.0, "noise_prob: must be in [0, 1]");
  require(attr_id_max >= 1, "attr_id_max: must be >= 1");
  require(value_max >= 1, "value_max: must be >= 1");
  require(agent_desc_max >= 1, "agent_desc_max: must be >= 1");
  require(set_size_min >= 1 && set_size_min <= set_size_max,
          "set_size_min: must be in [1, set_size_max]");
  require(static_cast<std::uint64_t>(request_sets) * set_size_max <= attr_id_max,
          "set_size_max: template needs request_sets * set_size_max distinct ids <= attr_id_max");
  require(static_cast<std::uint64_t>(request_sets) * set_size_min > agent_desc_max,
          "request_sets: total request attributes must exceed agent_desc_max");
  require(crossover_fraction >= 0.0 && crossover_fraction <= 1.0,
          "crossover_fraction: must be in [0, 1]");
  require(mutation_fraction >= 0.0 && mutation_fraction <= 1.0,
          "mutation_fraction: must be in [0, 1]");
  require(parsimony_beta >= 0.0, "parsimony_beta: must be >= 0");
  require(pop_min >= 1, "pop_min: must be >= 1");
  require(pop_min <= pop_base && pop_base <= pop_max,
          "pop_base: need pop_min <= pop_base <= pop_max");
  require(max_generations >= 1, "max_generations: must be >= 1");
  require(d_miss >= 0.0, "d_miss: must be >= 0");
  require(stored_seed_prob >= 0.0 && stored_seed_prob <= 1.0,
          "stored_seed_prob: must be in [0, 1]");
  require(seed_len_min >= 1 && seed_len_min <= seed_len_max,
          "seed_len_min: must be in [1, seed_len_max]");
  require(mean_degree >= 1.0, "mean_degree: must be >= 1");
  require(p_init >= 0.0 && p_init <= 1.0, "p_init: must be in [0, 1]");
  require(alpha_success >= 0.0 && alpha_success <= 1.0, "alpha_success: must be in [0, 1]");
  require(alpha_failure >= 0.0 && alpha_failure <= 1.0, "alpha_failure: must be in [0, 1]");
  require(p_prune >= 0.0 && p_prune <= 1.0, "p_prune: must be in [0, 1]");
  require(pool_capacity >= initial_agents_per_user,
          "pool_capacity: must hold at least the initial agents of the owner");
  require(stats_threshold >= 0.0 && stats_threshold <= 1.0,
          "stats_threshold: must be in [0, 1]");
  require(prune_every >= 1, "prune_every: must be >= 1");
  require(stats_every >= 1, "stats_every: must be >= 1");
  require(succession_window >= 1, "succession_window: must be >= 1");
  require(species_theta >= 0.0 && species_theta <= 1.0, "species_theta: must be in [0, 1]");
  require(area_replicates >= 1, "area_replicates: must be >= 1");
  require(area_n_max >= 1, "area_n_max: must be >= 1");
}

}  // namespace ecosim
