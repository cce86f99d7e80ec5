#include "ecosim/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ecosim {

std::uint32_t target_size(double avg_len, const EvolutionParams& params) {
  if (avg_len < 1.0) return params.pop_min;
  auto size = static_cast<std::int64_t>(
      std::llround(params.pop_base + params.pop_per_len * avg_len));
  size = std::max<std::int64_t>(size, params.pop_min);
  size = std::min<std::int64_t>(size, params.pop_max);
  return static_cast<std::uint32_t>(size);
}

Population seed_population(const Habitat& pool, const UserRequest& req,
                           const EvolutionParams& params, SplitMix64 rng) {
  if (pool.agents.empty()) throw std::runtime_error("habitat has no agents");

  Population pop;
  pop.request = req;
  pop.rng = rng;
  for (const PoolAgent& p : pool.agents)
    if (p.via_event != 0) pop.migrant_tags[p.agent.agent_id] = p.via_event;

  // Stored sequences are copied in proportion to their fitness against this
  // request, so relevant earlier responses dominate the seed over unrelated
  // migrants.
  const std::vector<Attribute> req_flat = req.flat();
  std::vector<double> stored_cumulative(pool.sequences.size());
  double stored_total = 0.0;
  for (std::size_t i = 0; i < pool.sequences.size(); ++i) {
    stored_total += fitness_flat(pool.sequences[i].seq.flat_description(), req_flat, params.d_miss);
    stored_cumulative[i] = stored_total;
  }

  // Fresh draws have expected length (min+max)/2; that expectation sizes the
  // seed population before any individual exists to average over.
  double expected_len = (params.seed_len_min + params.seed_len_max) / 2.0;
  std::uint32_t count = target_size(expected_len, params);

  pop.individuals.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    if (!pool.sequences.empty() && pop.rng.next_bernoulli(params.stored_seed_prob)) {
      double u = pop.rng.next_double() * stored_total;
      auto it = std::upper_bound(stored_cumulative.begin(), stored_cumulative.end(), u);
      if (it == stored_cumulative.end()) --it;
      pop.individuals.push_back(
          pool.sequences[static_cast<std::size_t>(it - stored_cumulative.begin())].seq);
      continue;
    }
    AgentSequence seq;
    auto len = static_cast<std::size_t>(
        pop.rng.next_range(params.seed_len_min, params.seed_len_max));
    seq.agents.reserve(len);
    for (std::size_t k = 0; k < len; ++k)
      seq.agents.push_back(pool.agents[pop.rng.next_below(pool.agents.size())].agent);
    pop.individuals.push_back(std::move(seq));
  }
  return pop;
}

std::vector<AgentSequence> select(const std::vector<AgentSequence>& individuals,
                                  const std::vector<double>& adjusted_fitness,
                                  std::uint32_t survivor_count, SplitMix64& rng) {
  std::vector<double> cumulative(adjusted_fitness.size());
  std::partial_sum(adjusted_fitness.begin(), adjusted_fitness.end(), cumulative.begin());
  double total = cumulative.back();

  std::vector<AgentSequence> survivors;
  survivors.reserve(survivor_count);
  for (std::uint32_t i = 0; i < survivor_count; ++i) {
    double u = rng.next_double() * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    survivors.push_back(individuals[static_cast<std::size_t>(it - cumulative.begin())]);
  }
  return survivors;
}

void crossover_pair(AgentSequence& a, AgentSequence& b, std::size_t cut_a, std::size_t cut_b) {
  AgentSequence child_a, child_b;
  child_a.agents.assign(a.agents.begin(), a.agents.begin() + static_cast<std::ptrdiff_t>(cut_a));
  child_a.agents.insert(child_a.agents.end(),
                        b.agents.begin() + static_cast<std::ptrdiff_t>(cut_b), b.agents.end());
  child_b.agents.assign(b.agents.begin(), b.agents.begin() + static_cast<std::ptrdiff_t>(cut_b));
  child_b.agents.insert(child_b.agents.end(),
                        a.agents.begin() + static_cast<std::ptrdiff_t>(cut_a), a.agents.end());
  a = std::move(child_a);
  b = std::move(child_b);
}

void crossover(std::vector<AgentSequence>& survivors, double fraction, SplitMix64& rng) {
  auto n = static_cast<std::uint32_t>(survivors.size());
  auto k = static_cast<std::uint32_t>(std::floor(fraction * n));
  if (k < 2) return;
  auto chosen = rng.sample_indices(n, k);
  for (std::size_t p = 0; p + 1 < chosen.size(); p += 2) {
    AgentSequence& a = survivors[chosen[p]];
    AgentSequence& b = survivors[chosen[p + 1]];
    if (a.length() < 2 || b.length() < 2) continue;  // no interior cut point
    auto cut_a = static_cast<std::size_t>(1 + rng.next_below(a.length() - 1));
    auto cut_b = static_cast<std::size_t>(1 + rng.next_below(b.length() - 1));
    crossover_pair(a, b, cut_a, cut_b);
  }
}

void apply_point_mutation(AgentSequence& seq, MutationKind kind, std::size_t pos,
                          const Agent& agent) {
  switch (kind) {
    case MutationKind::insertion:
      seq.agents.insert(seq.agents.begin() + static_cast<std::ptrdiff_t>(pos), agent);
      break;
    case MutationKind::replacement:
      seq.agents[pos] = agent;
      break;
    case MutationKind::deletion:
      seq.agents.erase(seq.agents.begin() + static_cast<std::ptrdiff_t>(pos));
      break;
  }
}

void mutate(std::vector<AgentSequence>& survivors, double fraction,
            const std::vector<PoolAgent>& pool_agents, SplitMix64& rng) {
  auto n = static_cast<std::uint32_t>(survivors.size());
  auto k = static_cast<std::uint32_t>(std::floor(fraction * n));
  if (k == 0 || pool_agents.empty()) return;
  auto chosen = rng.sample_indices(n, k);
  for (std::uint32_t idx : chosen) {
    AgentSequence& seq = survivors[idx];
    auto kind = static_cast<MutationKind>(rng.next_below(3));
    if (kind == MutationKind::deletion && seq.length() == 1) kind = MutationKind::replacement;
    if (kind == MutationKind::insertion) {
      auto pos = static_cast<std::size_t>(rng.next_below(seq.length() + 1));
      apply_point_mutation(seq, kind, pos, pool_agents[rng.next_below(pool_agents.size())].agent);
    } else if (kind == MutationKind::replacement) {
      auto pos = static_cast<std::size_t>(rng.next_below(seq.length()));
      apply_point_mutation(seq, kind, pos, pool_agents[rng.next_below(pool_agents.size())].agent);
    } else {
      auto pos = static_cast<std::size_t>(rng.next_below(seq.length()));
      apply_point_mutation(seq, kind, pos, seq.agents[0]);
    }
  }
}

EvolutionResult evolve(const Habitat& habitat, const UserRequest& req,
                       const EvolutionParams& params, SplitMix64 rng) {
  Population pop = seed_population(habitat, req, params, rng);
  const std::vector<Attribute> req_flat = req.flat();

  EvolutionResult result;
  std::size_t best_len = 0;
  std::uint32_t last_improvement = 0;
  std::uint32_t gen = 0;

  std::vector<double> raw, adjusted;
  while (true) {
    ++gen;
    std::size_t n = pop.individuals.size();
    raw.assign(n, 0.0);
    double len_sum = 0.0;
    double pop_best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const AgentSequence& ind = pop.individuals[i];
      raw[i] = fitness_flat(ind.flat_description(), req_flat, params.d_miss);
      len_sum += static_cast<double>(ind.length());
      if (raw[i] > pop_best) pop_best = raw[i];
      if (raw[i] > result.best_raw_fitness) {
        result.best = ind;
        result.best_raw_fitness = raw[i];
        best_len = ind.length();
        last_improvement = gen;
      } else if (raw[i] == result.best_raw_fitness && ind.length() < best_len) {
        result.best = ind;  // same fitness, shorter response; not an improvement
        best_len = ind.length();
      }
    }
    result.generation_best_raw.push_back(pop_best);

    if (gen >= params.max_generations) break;
    if (gen - last_improvement >= params.stagnation_window) break;

    double avg_len = len_sum / static_cast<double>(n);
    adjusted.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      adjusted[i] =
          parsimony_fitness(raw[i], pop.individuals[i].length(), avg_len, params.beta);

    std::uint32_t next_size = target_size(avg_len, params);
    pop.individuals = select(pop.individuals, adjusted, next_size, pop.rng);
    crossover(pop.individuals, params.crossover_fraction, pop.rng);
    mutate(pop.individuals, params.mutation_fraction, habitat.agents, pop.rng);
    pop.generation += 1;
  }

  result.generations_run = gen;
  for (std::uint64_t id : result.best.agent_ids()) {
    auto it = pop.migrant_tags.find(id);
    if (it != pop.migrant_tags.end()) result.migrant_events_used.insert(it->second);
  }
  return result;
}

}  // namespace ecosim
