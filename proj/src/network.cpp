#include "ecosim/network.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <set>
#include <stdexcept>

namespace ecosim {

bool Habitat::has_agent(std::uint64_t agent_id) const {
  for (const PoolAgent& p : agents)
    if (p.agent.agent_id == agent_id) return true;
  return false;
}

HabitatNetwork init_network(std::uint32_t num_users, double k0, double p_init, SplitMix64& rng) {
  if (num_users < 2) throw std::invalid_argument("init_network: need at least 2 users");
  HabitatNetwork net;
  net.habitats.resize(num_users);
  for (std::uint32_t i = 0; i < num_users; ++i) {
    net.habitats[i].habitat_id = i;
    net.habitats[i].owner_user_id = i;
  }
  double p_edge = k0 / static_cast<double>(num_users - 1);
  if (p_edge > 1.0) p_edge = 1.0;
  for (std::uint32_t i = 0; i < num_users; ++i) {
    for (std::uint32_t j = i + 1; j < num_users; ++j) {
      if (rng.next_bernoulli(p_edge)) {
        net.habitats[i].outgoing[j] = p_init;
        net.habitats[j].outgoing[i] = p_init;
      }
    }
  }
  return net;
}

namespace {

// Evicts the least-recently-used unpinned pool entry. Returns false when
// nothing is evictable.
bool evict_one(Habitat& hab) {
  constexpr std::uint64_t kNone = ~0ull;
  std::uint64_t best_used = kNone;
  int best_kind = -1;  // 0 = agent, 1 = sequence
  std::size_t best_index = 0;
  for (std::size_t i = 0; i < hab.agents.size(); ++i) {
    const PoolAgent& p = hab.agents[i];
    if (p.own_user) continue;
    if (p.last_used < best_used) {
      best_used = p.last_used;
      best_kind = 0;
      best_index = i;
    }
  }
  for (std::size_t i = 0; i < hab.sequences.size(); ++i) {
    const StoredSequence& s = hab.sequences[i];
    if (s.last_used < best_used) {
      best_used = s.last_used;
      best_kind = 1;
      best_index = i;
    }
  }
  if (best_kind < 0) return false;
  if (best_kind == 0)
    hab.agents.erase(hab.agents.begin() + static_cast<std::ptrdiff_t>(best_index));
  else
    hab.sequences.erase(hab.sequences.begin() + static_cast<std::ptrdiff_t>(best_index));
  return true;
}

void make_room(Habitat& hab, std::size_t pool_capacity) {
  while (hab.pool_size() >= pool_capacity)
    if (!evict_one(hab)) break;
}

}  // namespace

void add_agent_to_pool(Habitat& hab, const Agent& agent, bool own_user, std::uint64_t via_event,
                       std::uint64_t now, std::size_t pool_capacity) {
  for (PoolAgent& p : hab.agents) {
    if (p.agent.agent_id == agent.agent_id) {
      p.last_used = now;
      p.own_user = p.own_user || own_user;
      return;
    }
  }
  make_room(hab, pool_capacity);
  hab.agents.push_back(PoolAgent{agent, own_user, via_event, 0, now});
}

void store_sequence_in_pool(Habitat& hab, const AgentSequence& seq, std::uint64_t via_event,
                            std::uint64_t now, std::size_t pool_capacity) {
  auto ids = seq.agent_ids();
  for (StoredSequence& s : hab.sequences) {
    if (s.seq.agent_ids() == ids) {
      s.uses += 1;
      s.last_used = now;
      return;
    }
  }
  make_room(hab, pool_capacity);
  hab.sequences.push_back(StoredSequence{seq, via_event, 1, now});
}

void deployment_copies(HabitatNetwork& net, std::uint32_t origin, const Agent& agent,
                       SplitMix64& rng, const NetworkParams& params) {
  for (const auto& [dest, p] : net.habitat(origin).outgoing) {
    if (rng.next_bernoulli(p))
      add_agent_to_pool(net.habitat(dest), agent, false, 0, net.request_counter,
                        params.pool_capacity);
  }
}

std::vector<std::uint64_t> migrate(HabitatNetwork& net, std::uint32_t origin,
                                   const AgentSequence& seq,
                                   const std::vector<std::uint32_t>& lineage, SplitMix64& rng,
                                   const NetworkParams& params) {
  store_sequence_in_pool(net.habitat(origin), seq, 0, net.request_counter, params.pool_capacity);
  std::vector<std::uint64_t> created;
  for (const auto& [dest, p] : net.habitat(origin).outgoing) {
    if (!rng.next_bernoulli(p)) continue;
    MigrationEvent ev;
    ev.event_id = net.next_event_id++;
    ev.migrant = seq;
    ev.origin_habitat = origin;
    ev.dest_habitat = dest;
    ev.via_connection = {origin, dest};
    if (lineage.empty())
      ev.hop_path = {origin, dest};
    else {
      ev.hop_path = lineage;
      ev.hop_path.push_back(dest);
    }
    ev.arrival_request_index = net.request_counter;
    ev.dest_completed_at_arrival = net.habitat(dest).requests_completed;

    store_sequence_in_pool(net.habitat(dest), seq, ev.event_id, net.request_counter,
                           params.pool_capacity);

    created.push_back(ev.event_id);
    net.events.push_back(std::move(ev));
  }
  return created;
}

std::vector<std::uint32_t> resolve_usage(HabitatNetwork& net, std::uint32_t dest,
                                         const AgentSequence& best, const NetworkParams& params) {
  std::set<std::uint64_t> best_ids;
  for (const Agent& a : best.agents) best_ids.insert(a.agent_id);

  Habitat& hab = net.habitat(dest);
  std::uint64_t now = net.request_counter;

  // Usage accounting for every pool entry that delivered part of the response.
  for (PoolAgent& p : hab.agents) {
    if (best_ids.count(p.agent.agent_id)) {
      p.uses += 1;
      p.last_used = now;
    }
  }
  auto best_id_list = best.agent_ids();
  for (StoredSequence& s : hab.sequences) {
    if (s.seq.agent_ids() == best_id_list) {
      s.uses += 1;
      s.last_used = now;
    }
  }

  std::vector<std::uint32_t> lineage;
  for (MigrationEvent& ev : net.events) {
    if (ev.status != EventStatus::pending || ev.dest_habitat != dest) continue;
    bool contributed = false;
    for (const Agent& a : ev.migrant.agents) {
      if (best_ids.count(a.agent_id)) {
        contributed = true;
        break;
      }
    }
    if (!contributed) continue;
    ev.status = EventStatus::success;
    hebbian_update(net, ev.via_connection.first, ev.via_connection.second, true, params);
    if (ev.hop_path.size() > 2)
      net.shortcut_queue.emplace_back(ev.hop_path.front(), ev.hop_path.back());
    if (ev.hop_path.size() > lineage.size()) lineage = ev.hop_path;
  }
  return lineage;
}

void expire_events(HabitatNetwork& net, const NetworkParams& params) {
  for (MigrationEvent& ev : net.events) {
    if (ev.status != EventStatus::pending) continue;
    const Habitat& dest = net.habitat(ev.dest_habitat);
    if (dest.requests_completed < ev.dest_completed_at_arrival + params.expiry_window) continue;
    ev.status = EventStatus::failure;
    hebbian_update(net, ev.via_connection.first, ev.via_connection.second, false, params);

    // Roll back what the failed migration delivered: its stored copy and any
    // of its agents that were never used.
    Habitat& hab = net.habitat(ev.dest_habitat);
    std::erase_if(hab.sequences,
                  [&](const StoredSequence& s) { return s.via_event == ev.event_id; });
    std::erase_if(hab.agents, [&](const PoolAgent& p) {
      return p.via_event == ev.event_id && p.uses == 0 && !p.own_user;
    });
  }
}

void hebbian_update(HabitatNetwork& net, std::uint32_t from, std::uint32_t to, bool success,
                    const NetworkParams& params) {
  auto it = net.habitat(from).outgoing.find(to);
  if (it == net.habitat(from).outgoing.end()) return;  // connection pruned meanwhile
  double& p = it->second;
  if (success)
    p = p + params.alpha_success * (1.0 - p);
  else
    p = p * (1.0 - params.alpha_failure);
  assert(p >= 0.0 && p <= 1.0);
}

void prune_and_shortcut(HabitatNetwork& net, const NetworkParams& params) {
  for (Habitat& hab : net.habitats) {
    for (auto it = hab.outgoing.begin(); it != hab.outgoing.end();) {
      std::uint32_t other = it->first;
      double p_fwd = it->second;
      auto back = net.habitat(other).outgoing.find(hab.habitat_id);
      double p_back = back != net.habitat(other).outgoing.end() ? back->second : 0.0;
      // A pair goes away only when both directions have decayed.
      if (p_fwd < params.p_prune && p_back < params.p_prune) {
        if (back != net.habitat(other).outgoing.end()) net.habitat(other).outgoing.erase(back);
        it = hab.outgoing.erase(it);
      } else {
        ++it;
      }
    }
  }
  if (params.shortcuts_enabled) {
    for (const auto& [from, to] : net.shortcut_queue) {
      if (from == to) continue;
      if (!net.habitat(from).outgoing.count(to)) {
        net.habitat(from).outgoing[to] = params.p_init;
        net.habitat(to).outgoing[from] = params.p_init;
      }
    }
  }
  net.shortcut_queue.clear();
}

NetworkStats network_stats(const HabitatNetwork& net, double threshold) {
  std::size_t n = net.habitats.size();
  std::vector<std::set<std::uint32_t>> adj(n);
  std::size_t edges = 0;
  for (std::uint32_t i = 0; i < n; ++i) {
    for (const auto& [j, p_fwd] : net.habitats[i].outgoing) {
      if (j <= i) continue;
      auto back = net.habitats[j].outgoing.find(i);
      double p_back = back != net.habitats[j].outgoing.end() ? back->second : 0.0;
      if (std::max(p_fwd, p_back) >= threshold) {
        adj[i].insert(j);
        adj[j].insert(static_cast<std::uint32_t>(i));
        ++edges;
      }
    }
  }

  NetworkStats stats;
  stats.edge_count = edges;

  double cc_sum = 0.0;
  for (std::uint32_t v = 0; v < n; ++v) {
    std::size_t k = adj[v].size();
    if (k < 2) continue;
    std::size_t links = 0;
    for (auto a : adj[v])
      for (auto b : adj[v])
        if (a < b && adj[a].count(b)) ++links;
    cc_sum += static_cast<double>(links) / (static_cast<double>(k) * (k - 1) / 2.0);
  }
  stats.clustering_coefficient = n > 0 ? cc_sum / static_cast<double>(n) : 0.0;

  // Largest connected component among non-isolated nodes, earliest wins ties.
  std::vector<int> comp(n, -1);
  int comp_count = 0;
  std::vector<std::vector<std::uint32_t>> members;
  for (std::uint32_t v = 0; v < n; ++v) {
    if (comp[v] != -1 || adj[v].empty()) continue;
    std::vector<std::uint32_t> mem;
    std::deque<std::uint32_t> queue{v};
    comp[v] = comp_count;
    while (!queue.empty()) {
      std::uint32_t u = queue.front();
      queue.pop_front();
      mem.push_back(u);
      for (auto w : adj[u]) {
        if (comp[w] == -1) {
          comp[w] = comp_count;
          queue.push_back(w);
        }
      }
    }
    members.push_back(std::move(mem));
    ++comp_count;
  }
  std::size_t best = 0;
  bool found = false;
  for (std::size_t c = 0; c < members.size(); ++c) {
    if (!found || members[c].size() > members[best].size()) {
      best = c;
      found = true;
    }
  }
  if (found && members[best].size() >= 3) {
    const auto& mem = members[best];
    double dist_sum = 0.0;
    std::size_t pair_count = 0;
    for (std::uint32_t src : mem) {
      std::vector<std::int64_t> dist(n, -1);
      std::deque<std::uint32_t> queue{src};
      dist[src] = 0;
      while (!queue.empty()) {
        std::uint32_t u = queue.front();
        queue.pop_front();
        for (auto w : adj[u]) {
          if (dist[w] == -1) {
            dist[w] = dist[u] + 1;
            queue.push_back(w);
          }
        }
      }
      for (std::uint32_t other : mem) {
        if (other > src) {
          dist_sum += static_cast<double>(dist[other]);
          ++pair_count;
        }
      }
    }
    stats.char_path_length = dist_sum / static_cast<double>(pair_count);
  }
  return stats;
}

bool probabilities_valid(const HabitatNetwork& net) {
  for (const Habitat& hab : net.habitats)
    for (const auto& [dest, p] : hab.outgoing)
      if (!(p >= 0.0 && p <= 1.0)) return false;
  return true;
}

}  // namespace ecosim
