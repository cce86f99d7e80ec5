#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "ecosim/core.hpp"
#include "ecosim/userbase.hpp"

using namespace ecosim;

namespace {

struct BuiltScenario {
  HabitatNetwork net;
  Scenario scenario;
  ScenarioParams params;
};

BuiltScenario build_default(std::uint64_t seed, ScenarioParams params = ScenarioParams{}) {
  BuiltScenario out;
  out.params = params;
  SplitMix64 net_rng(seed);
  out.net = init_network(params.num_users, 4.0, 0.5, net_rng);
  SplitMix64 scen_rng(seed + 1000);
  out.scenario = build_scenario(params, out.net, 200, scen_rng);
  return out;
}

std::size_t own_agents(const HabitatNetwork& net) {
  std::size_t count = 0;
  for (const Habitat& hab : net.habitats)
    for (const PoolAgent& p : hab.agents)
      if (p.own_user) ++count;
  return count;
}

}  // namespace

TEST_CASE("initial deployment places five agents per user, 500 ecosystem-wide") {
  auto built = build_default(1);
  CHECK(own_agents(built.net) == 500);
  for (const Habitat& hab : built.net.habitats) {
    std::size_t own = 0;
    for (const PoolAgent& p : hab.agents)
      if (p.own_user) ++own;
    CHECK(own == 5);
  }
}

TEST_CASE("the covered subset is the rounded coverage fraction of the template") {
  // Force 20 attributes per template: 10 sets of exactly 2.
  ScenarioParams params;
  params.request_sets = 10;
  params.set_size_min = 2;
  params.set_size_max = 2;
  params.initial_coverage = 0.70;
  auto built = build_default(2, params);
  for (const CommunityTemplate& tpl : built.scenario.templates) {
    REQUIRE(tpl.total_attributes() == 20);
    CHECK(tpl.covered.size() == 14);
    CHECK(tpl.uncovered.size() == 6);
  }
}

TEST_CASE("template attribute ids are distinct across sets") {
  auto built = build_default(3);
  for (const CommunityTemplate& tpl : built.scenario.templates) {
    std::set<std::uint32_t> ids;
    for (const Attribute& a : tpl.all_attributes()) ids.insert(a.attr_id);
    CHECK(ids.size() == tpl.total_attributes());
  }
}

TEST_CASE("full coverage makes every noiseless template request exactly solvable") {
  ScenarioParams params;
  params.initial_coverage = 1.0;
  auto built = build_default(4, params);
  for (const CommunityTemplate& tpl : built.scenario.templates) {
    AgentSequence community_agents;
    for (const User& user : built.scenario.users) {
      if (user.community_id != tpl.community_id) continue;
      for (const PoolAgent& p : built.net.habitat(user.habitat_id).agents)
        if (p.own_user) community_agents.agents.push_back(p.agent);
    }
    UserRequest req;
    req.sets = tpl.sets;
    CHECK(fitness(community_agents, req, 10.0) == 1.0);
  }
}

TEST_CASE("the achievable fitness at start equals the coverage floor exactly") {
  auto built = build_default(5);
  for (const CommunityTemplate& tpl : built.scenario.templates) {
    // Union of the community's own initial agents.
    AgentSequence community_agents;
    for (const User& user : built.scenario.users) {
      if (user.community_id != tpl.community_id) continue;
      for (const PoolAgent& p : built.net.habitat(user.habitat_id).agents)
        if (p.own_user) community_agents.agents.push_back(p.agent);
    }
    UserRequest req;
    req.sets = tpl.sets;
    double floor = 1.0 / (1.0 + static_cast<double>(tpl.uncovered.size()) * 10.0);
    CHECK(fitness(community_agents, req, 10.0) == floor);
  }
}

TEST_CASE("noise-free requests reproduce the template and full noise shifts every value") {
  auto built = build_default(6);

  SUBCASE("noise_prob 0") {
    built.params.noise_prob = 0.0;
    SplitMix64 rng(1);
    auto [user_id, req] = next_request(built.scenario, built.params, rng);
    const CommunityTemplate& tpl =
        built.scenario.templates[built.scenario.users[user_id].community_id];
    CHECK(req.sets == tpl.sets);
  }

  SUBCASE("noise_prob 1") {
    built.params.noise_prob = 1.0;
    SplitMix64 rng(2);
    auto [user_id, req] = next_request(built.scenario, built.params, rng);
    const CommunityTemplate& tpl =
        built.scenario.templates[built.scenario.users[user_id].community_id];
    REQUIRE(req.sets.size() == tpl.sets.size());
    for (std::size_t s = 0; s < req.sets.size(); ++s) {
      for (std::size_t k = 0; k < req.sets[s].size(); ++k) {
        const Attribute& noisy = req.sets[s][k];
        const Attribute& clean = tpl.sets[s][k];
        CHECK(noisy.attr_id == clean.attr_id);
        bool shifted = std::abs(noisy.value - clean.value) == 1;
        bool clamped = noisy.value == clean.value &&
                       (clean.value == 1 || clean.value == built.params.value_max);
        CHECK((shifted || clamped));
      }
    }
  }
}

TEST_CASE("generated requests satisfy the declared invariants") {
  auto built = build_default(7);
  SplitMix64 rng(3);
  for (int i = 0; i < 500; ++i) {
    auto [user_id, req] = next_request(built.scenario, built.params, rng);
    CHECK(req.sets.size() == built.params.request_sets);
    std::size_t total = 0;
    for (const auto& set : req.sets) {
      CHECK(set.size() >= built.params.set_size_min);
      CHECK(set.size() <= built.params.set_size_max);
      total += set.size();
      for (const Attribute& a : set) {
        CHECK(a.attr_id >= 1);
        CHECK(a.attr_id <= built.params.attr_id_max);
        CHECK(a.value >= 1);
        CHECK(a.value <= built.params.value_max);
      }
    }
    CHECK(total > built.params.agent_desc_max);
  }
}

TEST_CASE("request traffic is uniform across users") {
  auto built = build_default(8);
  SplitMix64 rng(4);
  std::vector<int> counts(built.params.num_users, 0);
  for (int i = 0; i < 10000; ++i) {
    auto [user_id, req] = next_request(built.scenario, built.params, rng);
    counts[user_id] += 1;
  }
  for (int c : counts) {
    CHECK(c >= 70);
    CHECK(c <= 130);
  }
}

TEST_CASE("a new agent deploys exactly on every third request of a user") {
  auto built = build_default(9);
  SplitMix64 req_rng(5);
  SplitMix64 dep_rng(6);
  User& user = built.scenario.users[17];

  user.requests_submitted = 1;
  CHECK(!maybe_deploy_agent(built.scenario, 17, built.net, built.params, 200, dep_rng));
  user.requests_submitted = 2;
  CHECK(!maybe_deploy_agent(built.scenario, 17, built.net, built.params, 200, dep_rng));
  user.requests_submitted = 3;
  auto agent = maybe_deploy_agent(built.scenario, 17, built.net, built.params, 200, dep_rng);
  REQUIRE(agent.has_value());
  CHECK(built.net.habitat(17).has_agent(agent->agent_id));
}

TEST_CASE("gap deployments close the user's personal template gap, then go random") {
  auto built = build_default(10);
  built.params.gap_agent_prob = 1.0;  // force the gap branch while a gap exists
  SplitMix64 dep_rng(7);
  User& user = built.scenario.users[3];
  const CommunityTemplate& tpl = built.scenario.templates[user.community_id];
  REQUIRE(!user.gap_remaining.empty());

  int guard = 0;
  while (!user.gap_remaining.empty() && guard < 100) {
    user.requests_submitted += 3;
    auto agent = maybe_deploy_agent(built.scenario, 3, built.net, built.params, 200, dep_rng);
    REQUIRE(agent.has_value());
    // Gap agents only carry template attributes.
    for (const Attribute& a : agent->description.attributes) {
      bool in_template = false;
      for (const Attribute& t : tpl.all_attributes())
        if (t == a) in_template = true;
      CHECK(in_template);
    }
    ++guard;
  }
  CHECK(user.gap_remaining.empty());

  // With the gap closed the next deployments are unconstrained samples.
  user.requests_submitted += 3;
  auto random_agent =
      maybe_deploy_agent(built.scenario, 3, built.net, built.params, 200, dep_rng);
  REQUIRE(random_agent.has_value());
  CHECK(!random_agent->description.empty());
}

TEST_CASE("total deployment count follows the closed-form schedule") {
  ScenarioParams params;
  params.num_users = 20;
  params.num_communities = 4;
  auto built = build_default(11, params);
  SplitMix64 req_rng(8);
  SplitMix64 dep_rng(9);

  std::size_t initial = own_agents(built.net);
  REQUIRE(initial == 100);
  for (int i = 0; i < 500; ++i) {
    auto [user_id, req] = next_request(built.scenario, built.params, req_rng);
    maybe_deploy_agent(built.scenario, user_id, built.net, built.params, 200, dep_rng);
  }
  std::size_t expected = initial;
  for (const User& user : built.scenario.users)
    expected += user.requests_submitted / built.params.requests_per_new_agent;
  CHECK(own_agents(built.net) == expected);
}
