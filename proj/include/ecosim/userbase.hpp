#ifndef ECOSIM_USERBASE_HPP
#define ECOSIM_USERBASE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "ecosim/core.hpp"
#include "ecosim/network.hpp"
#include "ecosim/rng.hpp"

namespace ecosim {

struct ScenarioParams {
  std::uint32_t num_users = 100;
  std::uint32_t num_communities = 10;
  std::uint32_t initial_agents_per_user = 5;
  std::uint32_t requests_per_new_agent = 3;
  std::uint64_t total_requests = 1000;
  double initial_coverage = 0.70;
  std::uint32_t request_sets = 8;
  double noise_prob = 0.03;
  std::uint32_t attr_id_max = 100;
  std::int32_t value_max = 10;
  std::uint32_t agent_desc_max = 3;
  std::uint32_t set_size_min = 1;
  std::uint32_t set_size_max = 3;
  double gap_agent_prob = 0.8;  // new agents target still-uncovered template attributes
};

struct User {
  std::uint32_t user_id = 0;
  std::uint32_t habitat_id = 0;
  std::uint32_t community_id = 0;
  std::uint64_t requests_submitted = 0;
  // Template attributes this user has not yet deployed an agent for; their
  // future deployments draw from here until it empties.
  std::vector<Attribute> gap_remaining;
};

// The generative model behind a community's "similar requests": a fixed
// list of attribute sets with distinct attribute ids, which every member's
// requests are noisy copies of.
struct CommunityTemplate {
  std::uint32_t community_id = 0;
  std::vector<std::vector<Attribute>> sets;
  std::vector<Attribute> covered;    // deployable at start (the coverage fraction)
  std::vector<Attribute> uncovered;  // shrinks as later deployments close the gap

  std::vector<Attribute> all_attributes() const;
  std::size_t total_attributes() const;
};

struct Scenario {
  std::vector<User> users;
  std::vector<CommunityTemplate> templates;
};

// Partitions users evenly over communities, draws each community's template
// and covered subset, and deploys initial_agents_per_user agents per user
// into their own habitat pool. Each user's first agents enumerate the covered
// subset in description-sized chunks (rotated across users so a community
// deploys every covered attribute even when one user cannot hold them all);
// remaining slots sample the covered subset at random.
Scenario build_scenario(const ScenarioParams& params, HabitatNetwork& net,
                        std::size_t pool_capacity, SplitMix64& rng);

// Uniformly picks the requesting user and instantiates their community
// template with per-attribute noise: each value shifts by +/-1 with
// probability noise_prob, clamped to [1, value_max]. Increments the user's
// request counter. The caller assigns request_id.
std::pair<std::uint32_t, UserRequest> next_request(Scenario& scenario,
                                                   const ScenarioParams& params,
                                                   SplitMix64& rng);

// Every requests_per_new_agent-th request of a user deploys one new agent to
// their habitat: with probability gap_agent_prob packed with attributes the
// user has not deployed yet (closing their personal fulfilment gap), otherwise
// fully random. Returns the deployed agent so the caller can copy it to
// neighbours.
std::optional<Agent> maybe_deploy_agent(Scenario& scenario, std::uint32_t user_id,
                                        HabitatNetwork& net, const ScenarioParams& params,
                                        std::size_t pool_capacity, SplitMix64& rng);

}  // namespace ecosim

#endif  // ECOSIM_USERBASE_HPP
