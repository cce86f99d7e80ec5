#ifndef ECOSIM_EVOLVE_HPP
#define ECOSIM_EVOLVE_HPP

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "ecosim/core.hpp"
#include "ecosim/network.hpp"
#include "ecosim/rng.hpp"

namespace ecosim {

struct EvolutionParams {
  double crossover_fraction = 0.10;
  double mutation_fraction = 0.10;
  double beta = 0.1;  // parsimony pressure
  std::uint32_t pop_base = 20;
  std::uint32_t pop_per_len = 5;
  std::uint32_t pop_min = 20;
  std::uint32_t pop_max = 200;
  std::uint32_t max_generations = 50;
  std::uint32_t stagnation_window = 10;
  double d_miss = 10.0;
  double stored_seed_prob = 0.3;  // chance an individual is seeded from a stored sequence
  std::uint32_t seed_len_min = 1;
  std::uint32_t seed_len_max = 4;
};

// One evolving population, bound to a single request, with a private PRNG
// stream so populations are independent and the run stays deterministic.
struct Population {
  std::vector<AgentSequence> individuals;
  UserRequest request;
  std::uint32_t generation = 0;
  SplitMix64 rng;
  std::map<std::uint64_t, std::uint64_t> migrant_tags;  // agent_id -> migration event
};

struct EvolutionResult {
  AgentSequence best;
  double best_raw_fitness = 0.0;
  std::uint32_t generations_run = 0;
  std::set<std::uint64_t> migrant_events_used;
  // Per-generation best raw fitness of the *current* population (not the
  // best-ever tracker); used by the analysis of non-elitist dynamics.
  std::vector<double> generation_best_raw;
};

// Dynamic population size: pop_base + pop_per_len * average sequence length,
// clamped to [pop_min, pop_max]. Degenerate averages below one clamp to pop_min.
std::uint32_t target_size(double avg_len, const EvolutionParams& params);

// Seeds a population from the habitat pool: each individual is a copy of a
// stored sequence (probability stored_seed_prob, when any exist) or a fresh
// uniform draw of seed_len_min..seed_len_max pool agents. Throws when the
// pool holds no agents.
Population seed_population(const Habitat& pool, const UserRequest& req,
                           const EvolutionParams& params, SplitMix64 rng);

// Fitness-proportional roulette with replacement, no elitist slot.
std::vector<AgentSequence> select(const std::vector<AgentSequence>& individuals,
                                  const std::vector<double>& adjusted_fitness,
                                  std::uint32_t survivor_count, SplitMix64& rng);

// One-point crossover on floor(fraction * N) randomly chosen individuals,
// paired off in draw order (odd leftover passes through). Each parent is cut
// at an independent uniform interior point and the tails are exchanged; pairs
// with a length-1 parent pass through unchanged.
void crossover(std::vector<AgentSequence>& survivors, double fraction, SplitMix64& rng);

// Exactly one point mutation on each of floor(fraction * N) randomly chosen
// individuals: insertion, replacement or deletion with equal probability, at
// a uniform position; deletion of a length-1 individual becomes replacement.
void mutate(std::vector<AgentSequence>& survivors, double fraction,
            const std::vector<PoolAgent>& pool_agents, SplitMix64& rng);

enum class MutationKind : std::uint8_t { insertion, replacement, deletion };

// One point mutation at an explicit position (insertion positions are the
// len+1 gaps, replacement and deletion index an element). The agent argument
// is ignored for deletions.
void apply_point_mutation(AgentSequence& seq, MutationKind kind, std::size_t pos,
                          const Agent& agent);

// Crossover of one pair at explicit cut points; exposed for direct testing.
void crossover_pair(AgentSequence& a, AgentSequence& b, std::size_t cut_a, std::size_t cut_b);

// Full evolutionary run for one request: evaluate, select, crossover, mutate,
// until max_generations or stagnation_window generations without improvement
// of the best-ever raw fitness. The delivered best is tracked outside the
// non-elitist population so it cannot be lost to selection.
EvolutionResult evolve(const Habitat& habitat, const UserRequest& req,
                       const EvolutionParams& params, SplitMix64 rng);

}  // namespace ecosim

#endif  // ECOSIM_EVOLVE_HPP
