#ifndef ECOSIM_NETWORK_HPP
#define ECOSIM_NETWORK_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "ecosim/core.hpp"
#include "ecosim/rng.hpp"

namespace ecosim {

// A pool entry. Agents deployed by the habitat's own user are pinned; agents
// that arrived by migration carry the event that delivered them so failed
// migrations can be rolled back.
struct PoolAgent {
  Agent agent;
  bool own_user = false;
  std::uint64_t via_event = 0;  // 0 = not a migrant copy
  std::uint32_t uses = 0;
  std::uint64_t last_used = 0;  // global request index
};

// An evolved agent-sequence kept for reuse, either stored by the habitat's
// own completed request or delivered by migration.
struct StoredSequence {
  AgentSequence seq;
  std::uint64_t via_event = 0;
  std::uint32_t uses = 0;
  std::uint64_t last_used = 0;
};

struct Habitat {
  std::uint32_t habitat_id = 0;
  std::uint32_t owner_user_id = 0;
  std::vector<PoolAgent> agents;
  std::vector<StoredSequence> sequences;
  std::map<std::uint32_t, double> outgoing;  // habitat_id -> directed probability
  std::uint64_t requests_completed = 0;

  std::size_t pool_size() const { return agents.size() + sequences.size(); }
  bool has_agent(std::uint64_t agent_id) const;
};

enum class EventStatus : std::uint8_t { pending, success, failure };

// One migration: a sequence copied across one directed connection. Resolves
// exactly once, to success (the migrant contributed to a best response at the
// destination) or failure (unused for `expiry_window` destination requests).
struct MigrationEvent {
  std::uint64_t event_id = 0;
  AgentSequence migrant;
  std::uint32_t origin_habitat = 0;
  std::uint32_t dest_habitat = 0;
  std::pair<std::uint32_t, std::uint32_t> via_connection;  // directed final hop
  std::vector<std::uint32_t> hop_path;  // habitat ids the lineage travelled
  std::uint64_t arrival_request_index = 0;        // global request counter
  std::uint64_t dest_completed_at_arrival = 0;    // destination's own counter
  EventStatus status = EventStatus::pending;
};

struct NetworkParams {
  double p_init = 0.5;
  double alpha_success = 0.1;
  double alpha_failure = 0.1;
  double p_prune = 0.01;
  bool shortcuts_enabled = true;
  std::uint64_t expiry_window = 10;  // destination requests without use
  std::size_t pool_capacity = 200;
  double stats_threshold = 0.5;
};

struct NetworkStats {
  double clustering_coefficient = 0.0;
  std::optional<double> char_path_length;  // empty when the largest component has < 3 nodes
  std::size_t edge_count = 0;              // undirected edges above threshold
};

struct HabitatNetwork {
  std::vector<Habitat> habitats;
  std::vector<MigrationEvent> events;
  // (origin, dest) pairs from successful multi-hop lineages, turned into
  // direct connections at the next prune/shortcut pass.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> shortcut_queue;
  std::uint64_t request_counter = 0;
  std::uint64_t next_agent_id = 1;
  std::uint64_t next_event_id = 1;

  Habitat& habitat(std::uint32_t id) { return habitats[id]; }
  const Habitat& habitat(std::uint32_t id) const { return habitats[id]; }
  std::uint64_t allocate_agent_id() { return next_agent_id++; }
};

// One habitat per user, pairs drawn with probability k0/(n-1) so the expected
// degree is k0; every pair gets both directed probabilities set to p_init.
HabitatNetwork init_network(std::uint32_t num_users, double k0, double p_init, SplitMix64& rng);

// Pool insertion with LRU eviction once the pool is at capacity. Entries
// pinned by own_user are never evicted. An agent_id already present is
// refreshed instead of duplicated.
void add_agent_to_pool(Habitat& hab, const Agent& agent, bool own_user, std::uint64_t via_event,
                       std::uint64_t now, std::size_t pool_capacity);
void store_sequence_in_pool(Habitat& hab, const AgentSequence& seq, std::uint64_t via_event,
                            std::uint64_t now, std::size_t pool_capacity);

// Copies a freshly deployed agent to each direct neighbour with the
// connection's probability. Deployment copies are plain pool agents; they do
// not create migration events.
void deployment_copies(HabitatNetwork& net, std::uint32_t origin, const Agent& agent,
                       SplitMix64& rng, const NetworkParams& params);

// Stores the delivered sequence at its origin and performs one independent
// migration draw per outgoing connection. `lineage` is the hop path the
// sequence descends from (empty for a locally originated response); each
// created event extends it by the destination.
std::vector<std::uint64_t> migrate(HabitatNetwork& net, std::uint32_t origin,
                                   const AgentSequence& seq,
                                   const std::vector<std::uint32_t>& lineage, SplitMix64& rng,
                                   const NetworkParams& params);

// Marks every pending event at `dest` whose migrant contributed an agent to
// the best response as success, reinforces its connection, and bumps usage
// counters of the pool entries that delivered the response. Returns the hop
// path of the longest successful lineage (ties to the earliest event), empty
// when no migrant contributed.
std::vector<std::uint32_t> resolve_usage(HabitatNetwork& net, std::uint32_t dest,
                                         const AgentSequence& best, const NetworkParams& params);

// Fails pending events whose destination has completed expiry_window requests
// since arrival, decays their connections, and evicts unused migrant copies.
void expire_events(HabitatNetwork& net, const NetworkParams& params);

// success: p <- p + alpha_s * (1 - p); failure: p <- p * (1 - alpha_f).
// Both fixed-point safe in [0, 1].
void hebbian_update(HabitatNetwork& net, std::uint32_t from, std::uint32_t to, bool success,
                    const NetworkParams& params);

// Removes connection pairs whose probabilities have decayed below p_prune in
// both directions, then materializes queued shortcuts as new pairs at p_init.
void prune_and_shortcut(HabitatNetwork& net, const NetworkParams& params);

// Statistics of the undirected graph of pairs with max(p_ab, p_ba) >= threshold.
NetworkStats network_stats(const HabitatNetwork& net, double threshold);

// True when every directed probability lies in [0, 1].
bool probabilities_valid(const HabitatNetwork& net);

}  // namespace ecosim

#endif  // ECOSIM_NETWORK_HPP
