#include "ecosim/userbase.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ecosim {

std::vector<Attribute> CommunityTemplate::all_attributes() const {
  std::vector<Attribute> out;
  for (const auto& s : sets) out.insert(out.end(), s.begin(), s.end());
  return out;
}

std::size_t CommunityTemplate::total_attributes() const {
  std::size_t n = 0;
  for (const auto& s : sets) n += s.size();
  return n;
}

namespace {

CommunityTemplate make_template(std::uint32_t community_id, const ScenarioParams& params,
                                SplitMix64& rng) {
  CommunityTemplate tpl;
  tpl.community_id = community_id;

  std::vector<std::size_t> set_sizes(params.request_sets);
  std::size_t total = 0;
  for (auto& s : set_sizes) {
    s = static_cast<std::size_t>(rng.next_range(params.set_size_min, params.set_size_max));
    total += s;
  }

  // Distinct attribute ids across the whole template keep coverage well-defined.
  auto id_picks = rng.sample_indices(params.attr_id_max, static_cast<std::uint32_t>(total));
  std::size_t next = 0;
  for (std::size_t s = 0; s < set_sizes.size(); ++s) {
    std::vector<Attribute> set;
    for (std::size_t k = 0; k < set_sizes[s]; ++k) {
      Attribute a;
      a.attr_id = id_picks[next++] + 1;
      a.value = static_cast<std::int32_t>(rng.next_range(1, params.value_max));
      set.push_back(a);
    }
    tpl.sets.push_back(std::move(set));
  }

  auto all = tpl.all_attributes();
  auto covered_count = static_cast<std::size_t>(
      std::llround(params.initial_coverage * static_cast<double>(total)));
  covered_count = std::clamp<std::size_t>(covered_count, 1, total);
  auto covered_idx =
      rng.sample_indices(static_cast<std::uint32_t>(total), static_cast<std::uint32_t>(covered_count));
  std::sort(covered_idx.begin(), covered_idx.end());
  std::vector<bool> is_covered(total, false);
  for (auto i : covered_idx) is_covered[i] = true;
  for (std::size_t i = 0; i < total; ++i)
    (is_covered[i] ? tpl.covered : tpl.uncovered).push_back(all[i]);
  return tpl;
}

SemanticDescription sample_description(const std::vector<Attribute>& source,
                                       std::uint32_t max_size, SplitMix64& rng) {
  auto cap = std::min<std::uint64_t>(max_size, source.size());
  auto size = static_cast<std::uint32_t>(rng.next_range(1, static_cast<std::int64_t>(cap)));
  auto picks = rng.sample_indices(static_cast<std::uint32_t>(source.size()), size);
  std::vector<Attribute> attrs;
  attrs.reserve(picks.size());
  for (auto i : picks) attrs.push_back(source[i]);
  return SemanticDescription::from(std::move(attrs));
}

SemanticDescription random_description(const ScenarioParams& params, SplitMix64& rng) {
  auto size = static_cast<std::uint32_t>(rng.next_range(1, params.agent_desc_max));
  auto id_picks = rng.sample_indices(params.attr_id_max, size);
  std::vector<Attribute> attrs;
  attrs.reserve(size);
  for (auto i : id_picks) {
    Attribute a;
    a.attr_id = i + 1;
    a.value = static_cast<std::int32_t>(rng.next_range(1, params.value_max));
    attrs.push_back(a);
  }
  return SemanticDescription::from(std::move(attrs));
}

}  // namespace

Scenario build_scenario(const ScenarioParams& params, HabitatNetwork& net,
                        std::size_t pool_capacity, SplitMix64& rng) {
  if (params.num_communities < 1 || params.num_users < params.num_communities)
    throw std::invalid_argument("build_scenario: need num_users >= num_communities >= 1");
  if (net.habitats.size() != params.num_users)
    throw std::invalid_argument("build_scenario: network size does not match num_users");

  Scenario scenario;
  scenario.users.resize(params.num_users);
  for (std::uint32_t u = 0; u < params.num_users; ++u) {
    scenario.users[u].user_id = u;
    scenario.users[u].habitat_id = u;
    scenario.users[u].community_id =
        static_cast<std::uint32_t>(static_cast<std::uint64_t>(u) * params.num_communities /
                                   params.num_users);
  }

  for (std::uint32_t c = 0; c < params.num_communities; ++c)
    scenario.templates.push_back(make_template(c, params, rng));

  for (std::uint32_t c = 0; c < params.num_communities; ++c) {
    const CommunityTemplate& tpl = scenario.templates[c];

    // Chunk the covered subset into description-sized agents. Every user
    // deploys the chunks (rotated when there are more chunks than slots), so
    // the coverage floor is reachable from each member's own agents.
    std::vector<SemanticDescription> chunks;
    for (std::size_t i = 0; i < tpl.covered.size(); i += params.agent_desc_max) {
      auto end = std::min(i + params.agent_desc_max, tpl.covered.size());
      std::vector<Attribute> chunk(tpl.covered.begin() + static_cast<std::ptrdiff_t>(i),
                                   tpl.covered.begin() + static_cast<std::ptrdiff_t>(end));
      chunks.push_back(SemanticDescription::from(std::move(chunk)));
    }

    std::size_t member_index = 0;
    for (User& user : scenario.users) {
      if (user.community_id != c) continue;
      std::size_t offset = member_index % chunks.size();
      std::vector<SemanticDescription> own;
      for (std::uint32_t k = 0; k < params.initial_agents_per_user; ++k) {
        own.push_back(k < chunks.size()
                          ? chunks[(offset + k) % chunks.size()]
                          : sample_description(tpl.covered, params.agent_desc_max, rng));
      }
      for (const SemanticDescription& desc : own) {
        Agent agent;
        agent.agent_id = net.allocate_agent_id();
        agent.origin_user = user.user_id;
        agent.description = desc;
        add_agent_to_pool(net.habitat(user.habitat_id), agent, true, 0, 0, pool_capacity);
      }
      for (const Attribute& a : tpl.all_attributes()) {
        bool deployed = false;
        for (const SemanticDescription& desc : own)
          if (desc.contains(a)) {
            deployed = true;
            break;
          }
        if (!deployed) user.gap_remaining.push_back(a);
      }
      ++member_index;
    }
  }
  return scenario;
}

std::pair<std::uint32_t, UserRequest> next_request(Scenario& scenario,
                                                   const ScenarioParams& params,
                                                   SplitMix64& rng) {
  auto user_index = static_cast<std::size_t>(rng.next_below(scenario.users.size()));
  User& user = scenario.users[user_index];
  user.requests_submitted += 1;

  const CommunityTemplate& tpl = scenario.templates[user.community_id];
  UserRequest req;
  req.user_id = user.user_id;
  req.sets = tpl.sets;
  for (auto& set : req.sets) {
    for (Attribute& a : set) {
      if (!rng.next_bernoulli(params.noise_prob)) continue;
      std::int32_t shift = rng.next_below(2) == 0 ? 1 : -1;
      a.value = std::clamp(a.value + shift, 1, params.value_max);
    }
  }
  return {user.user_id, std::move(req)};
}

std::optional<Agent> maybe_deploy_agent(Scenario& scenario, std::uint32_t user_id,
                                        HabitatNetwork& net, const ScenarioParams& params,
                                        std::size_t pool_capacity, SplitMix64& rng) {
  User& user = scenario.users[user_id];
  if (user.requests_submitted == 0 ||
      user.requests_submitted % params.requests_per_new_agent != 0)
    return std::nullopt;

  Agent agent;
  agent.agent_id = net.allocate_agent_id();
  agent.origin_user = user_id;
  if (!user.gap_remaining.empty() && rng.next_bernoulli(params.gap_agent_prob)) {
    // Pack as many missing attributes as one description holds.
    auto size = std::min<std::size_t>(params.agent_desc_max, user.gap_remaining.size());
    auto picks = rng.sample_indices(static_cast<std::uint32_t>(user.gap_remaining.size()),
                                    static_cast<std::uint32_t>(size));
    std::vector<Attribute> attrs;
    for (auto i : picks) attrs.push_back(user.gap_remaining[i]);
    agent.description = SemanticDescription::from(std::move(attrs));
    std::erase_if(user.gap_remaining,
                  [&](const Attribute& a) { return agent.description.contains(a); });
  } else {
    agent.description = random_description(params, rng);
  }
  add_agent_to_pool(net.habitat(user.habitat_id), agent, true, 0, net.request_counter,
                    pool_capacity);
  return agent;
}

}  // namespace ecosim
