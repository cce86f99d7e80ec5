#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "ecosim/network.hpp"
#include "oracles.hpp"

using namespace ecosim;

namespace {

Agent mk_agent(std::uint64_t id, std::uint32_t attr = 1, std::int32_t value = 1) {
  Agent a;
  a.agent_id = id;
  a.description = SemanticDescription::from({{attr, value}});
  return a;
}

AgentSequence mk_seq(std::vector<std::uint64_t> ids) {
  AgentSequence seq;
  for (auto id : ids) seq.agents.push_back(mk_agent(id));
  return seq;
}

// A hub-and-spokes network built by hand, bypassing the random wiring.
HabitatNetwork star_network(std::uint32_t spokes, double p) {
  HabitatNetwork net;
  net.habitats.resize(spokes + 1);
  for (std::uint32_t i = 0; i <= spokes; ++i) {
    net.habitats[i].habitat_id = i;
    net.habitats[i].owner_user_id = i;
  }
  for (std::uint32_t i = 1; i <= spokes; ++i) {
    net.habitats[0].outgoing[i] = p;
    net.habitats[i].outgoing[0] = p;
  }
  return net;
}

}  // namespace

TEST_CASE("init_network wires the two-user case completely") {
  SplitMix64 rng(1);
  HabitatNetwork net = init_network(2, 1.0, 0.5, rng);
  REQUIRE(net.habitats.size() == 2);
  REQUIRE(net.habitats[0].outgoing.count(1) == 1);
  REQUIRE(net.habitats[1].outgoing.count(0) == 1);
  CHECK(net.habitats[0].outgoing.at(1) == 0.5);
  CHECK(net.habitats[1].outgoing.at(0) == 0.5);
}

TEST_CASE("init_network rejects degenerate user counts") {
  SplitMix64 rng(1);
  CHECK_THROWS_AS(init_network(1, 4.0, 0.5, rng), std::invalid_argument);
}

TEST_CASE("init_network hits the expected pair count on average") {
  double total_pairs = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    SplitMix64 rng(seed);
    HabitatNetwork net = init_network(100, 4.0, 0.5, rng);
    std::size_t directed = 0;
    for (const Habitat& hab : net.habitats) directed += hab.outgoing.size();
    CHECK(directed % 2 == 0);
    total_pairs += static_cast<double>(directed) / 2.0;
  }
  double mean_pairs = total_pairs / 100.0;  // expectation is n * k0 / 2 = 200
  CHECK(mean_pairs > 180.0);
  CHECK(mean_pairs < 220.0);
}

TEST_CASE("migration draws follow the connection probabilities") {
  NetworkParams params;

  SUBCASE("probability 1 produces one event per connection") {
    HabitatNetwork net = star_network(5, 1.0);
    SplitMix64 rng(2);
    auto created = migrate(net, 0, mk_seq({11, 12}), {}, rng, params);
    CHECK(created.size() == 5);
    CHECK(net.events.size() == 5);
    for (const MigrationEvent& ev : net.events) {
      CHECK(ev.status == EventStatus::pending);
      CHECK(ev.origin_habitat == 0);
      CHECK(ev.hop_path == std::vector<std::uint32_t>{0, ev.dest_habitat});
      CHECK(net.habitat(ev.dest_habitat).sequences.size() == 1);
    }
    // The origin stores its own copy with usage counter 1.
    REQUIRE(net.habitats[0].sequences.size() == 1);
    CHECK(net.habitats[0].sequences[0].uses == 1);
  }

  SUBCASE("probability 0 produces no events") {
    HabitatNetwork net = star_network(5, 0.0);
    SplitMix64 rng(2);
    auto created = migrate(net, 0, mk_seq({11}), {}, rng, params);
    CHECK(created.empty());
    CHECK(net.events.empty());
  }

  SUBCASE("probability 0.5 over 100 connections is binomial") {
    double total = 0.0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      HabitatNetwork net = star_network(100, 0.5);
      SplitMix64 rng(seed);
      total += static_cast<double>(migrate(net, 0, mk_seq({11}), {}, rng, params).size());
    }
    double mean = total / 50.0;
    CHECK(mean > 40.0);
    CHECK(mean < 60.0);
  }
}

TEST_CASE("a zero-probability network never migrates anything") {
  SplitMix64 rng(3);
  HabitatNetwork net = init_network(10, 4.0, 0.0, rng);
  NetworkParams params;
  for (std::uint32_t h = 0; h < 10; ++h) {
    SplitMix64 draw(h);
    migrate(net, h, mk_seq({h + 1}), {}, draw, params);
  }
  CHECK(net.events.empty());
}

TEST_CASE("resolve_usage marks contributing migrants as successes") {
  NetworkParams params;
  HabitatNetwork net = star_network(2, 1.0);
  SplitMix64 rng(4);
  migrate(net, 1, mk_seq({100, 101}), {}, rng, params);  // events 1->0 land at 0
  migrate(net, 2, mk_seq({200}), {}, rng, params);       // events 2->0 land at 0
  REQUIRE(net.events.size() == 2);
  net.habitat(1).outgoing.at(0) = 0.6;  // leave the fixed point so gains show
  net.habitat(2).outgoing.at(0) = 0.6;
  double p_before = net.habitat(1).outgoing.at(0);

  SUBCASE("the best response contains a migrant agent") {
    auto lineage = resolve_usage(net, 0, mk_seq({100, 7}), params);
    CHECK(net.events[0].status == EventStatus::success);
    CHECK(net.events[1].status == EventStatus::pending);
    CHECK(lineage == std::vector<std::uint32_t>{1, 0});
    CHECK(net.habitat(1).outgoing.at(0) == p_before + 0.1 * (1.0 - p_before));
  }

  SUBCASE("no migrant agents in the best response resolves nothing") {
    auto lineage = resolve_usage(net, 0, mk_seq({7}), params);
    CHECK(lineage.empty());
    CHECK(net.events[0].status == EventStatus::pending);
    CHECK(net.events[1].status == EventStatus::pending);
  }

  SUBCASE("two contributing events both succeed and both connections strengthen") {
    double p2_before = net.habitat(2).outgoing.at(0);
    resolve_usage(net, 0, mk_seq({100, 200}), params);
    CHECK(net.events[0].status == EventStatus::success);
    CHECK(net.events[1].status == EventStatus::success);
    CHECK(net.habitat(1).outgoing.at(0) > p_before);
    CHECK(net.habitat(2).outgoing.at(0) > p2_before);
  }
}

TEST_CASE("events expire after the destination window and evict unused copies") {
  NetworkParams params;
  params.expiry_window = 10;
  HabitatNetwork net = star_network(1, 1.0);
  net.habitat(1).requests_completed = 5;  // arrival snapshot
  SplitMix64 rng(5);
  migrate(net, 0, mk_seq({77}), {}, rng, params);
  REQUIRE(net.events.size() == 1);
  REQUIRE(net.habitat(1).sequences.size() == 1);
  double p_before = net.habitat(0).outgoing.at(1);

  SUBCASE("unused for a full window fails and decays the connection") {
    net.habitat(1).requests_completed = 14;
    expire_events(net, params);
    CHECK(net.events[0].status == EventStatus::pending);  // one short of the window
    net.habitat(1).requests_completed = 15;
    expire_events(net, params);
    CHECK(net.events[0].status == EventStatus::failure);
    CHECK(net.habitat(0).outgoing.at(1) == p_before * 0.9);
    CHECK(net.habitat(1).sequences.empty());  // migrant copy evicted
  }

  SUBCASE("a success inside the window never expires") {
    net.habitat(1).requests_completed = 7;
    resolve_usage(net, 1, mk_seq({77}), params);
    CHECK(net.events[0].status == EventStatus::success);
    net.habitat(1).requests_completed = 50;
    expire_events(net, params);
    CHECK(net.events[0].status == EventStatus::success);
  }

  SUBCASE("a zero window fails migrations immediately") {
    params.expiry_window = 0;
    expire_events(net, params);
    CHECK(net.events[0].status == EventStatus::failure);
  }
}

TEST_CASE("hebbian updates move probabilities by the pinned formulas") {
  NetworkParams params;
  HabitatNetwork net = star_network(1, 0.5);
  hebbian_update(net, 0, 1, true, params);
  CHECK(net.habitat(0).outgoing.at(1) == 0.5 + 0.1 * 0.5);
  net.habitat(0).outgoing.at(1) = 0.5;
  hebbian_update(net, 0, 1, false, params);
  CHECK(net.habitat(0).outgoing.at(1) == 0.45);

  net.habitat(0).outgoing.at(1) = 1.0;
  hebbian_update(net, 0, 1, true, params);
  CHECK(net.habitat(0).outgoing.at(1) == 1.0);
}

TEST_CASE("any success/failure history keeps probabilities in [0,1] and monotone") {
  NetworkParams params;
  HabitatNetwork net = star_network(1, 0.5);
  SplitMix64 rng(6);
  double p = 0.5;
  for (int step = 0; step < 10000; ++step) {
    bool success = rng.next_bernoulli(0.5);
    hebbian_update(net, 0, 1, success, params);
    double next = net.habitat(0).outgoing.at(1);
    REQUIRE(next >= 0.0);
    REQUIRE(next <= 1.0);
    if (success)
      REQUIRE(next >= p);
    else
      REQUIRE(next <= p);
    p = next;
  }
  CHECK(probabilities_valid(net));
}

TEST_CASE("prune removes pairs only when both directions decay") {
  NetworkParams params;
  HabitatNetwork net = star_network(2, 0.5);
  net.habitat(0).outgoing.at(1) = 0.005;
  net.habitat(1).outgoing.at(0) = 0.005;
  net.habitat(0).outgoing.at(2) = 0.005;  // reverse stays high
  prune_and_shortcut(net, params);
  CHECK(net.habitat(0).outgoing.count(1) == 0);
  CHECK(net.habitat(1).outgoing.count(0) == 0);
  CHECK(net.habitat(0).outgoing.count(2) == 1);
  CHECK(net.habitat(2).outgoing.count(0) == 1);
}

TEST_CASE("successful multi-hop lineages become direct connections") {
  NetworkParams params;
  HabitatNetwork net = star_network(2, 1.0);  // 1 - 0 - 2, no 1-2 edge
  SplitMix64 rng(7);
  migrate(net, 1, mk_seq({100}), {}, rng, params);
  auto lineage = resolve_usage(net, 0, mk_seq({100}), params);
  REQUIRE(lineage == std::vector<std::uint32_t>{1, 0});
  migrate(net, 0, mk_seq({100}), lineage, rng, params);

  // The onward event to habitat 2 carries the extended hop path.
  const MigrationEvent& onward = net.events.back();
  REQUIRE(onward.dest_habitat == 2);
  CHECK(onward.hop_path == std::vector<std::uint32_t>{1, 0, 2});

  resolve_usage(net, 2, mk_seq({100}), params);
  REQUIRE(net.shortcut_queue.size() == 1);
  CHECK(net.shortcut_queue[0] == std::pair<std::uint32_t, std::uint32_t>{1, 2});

  SUBCASE("shortcuts materialize at p_init") {
    prune_and_shortcut(net, params);
    REQUIRE(net.habitat(1).outgoing.count(2) == 1);
    CHECK(net.habitat(1).outgoing.at(2) == params.p_init);
    CHECK(net.habitat(2).outgoing.at(1) == params.p_init);
  }

  SUBCASE("disabled shortcuts leave the topology unchanged") {
    params.shortcuts_enabled = false;
    prune_and_shortcut(net, params);
    CHECK(net.habitat(1).outgoing.count(2) == 0);
    CHECK(net.shortcut_queue.empty());
  }
}

TEST_CASE("network statistics match analytic and brute-force values") {
  SUBCASE("complete graph on 4 nodes") {
    HabitatNetwork net;
    net.habitats.resize(4);
    for (std::uint32_t i = 0; i < 4; ++i) {
      net.habitats[i].habitat_id = i;
      for (std::uint32_t j = 0; j < 4; ++j)
        if (i != j) net.habitats[i].outgoing[j] = 1.0;
    }
    NetworkStats stats = network_stats(net, 0.5);
    CHECK(stats.clustering_coefficient == 1.0);
    REQUIRE(stats.char_path_length.has_value());
    CHECK(*stats.char_path_length == 1.0);
    CHECK(stats.edge_count == 6);
  }

  SUBCASE("ring of 6 nodes") {
    HabitatNetwork net;
    net.habitats.resize(6);
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::uint32_t i = 0; i < 6; ++i) {
      std::uint32_t j = (i + 1) % 6;
      net.habitats[i].habitat_id = i;
      net.habitats[i].outgoing[j] = 1.0;
      net.habitats[j].outgoing[i] = 1.0;
      edges.emplace_back(i, j);
    }
    NetworkStats stats = network_stats(net, 0.5);
    CHECK(stats.clustering_coefficient == 0.0);
    REQUIRE(stats.char_path_length.has_value());
    CHECK(*stats.char_path_length == doctest::Approx(1.8).epsilon(1e-12));
    CHECK(*stats.char_path_length ==
          doctest::Approx(oracles::mean_path_floyd(6, edges)).epsilon(1e-12));
  }

  SUBCASE("empty graph") {
    HabitatNetwork net;
    net.habitats.resize(5);
    NetworkStats stats = network_stats(net, 0.5);
    CHECK(stats.clustering_coefficient == 0.0);
    CHECK(!stats.char_path_length.has_value());
    CHECK(stats.edge_count == 0);
  }
}

TEST_CASE("pools evict the least-recently-used unpinned entry at capacity") {
  Habitat hab;
  std::size_t capacity = 4;
  add_agent_to_pool(hab, mk_agent(1), true, 0, 1, capacity);   // pinned
  add_agent_to_pool(hab, mk_agent(2), false, 0, 2, capacity);  // oldest unpinned
  add_agent_to_pool(hab, mk_agent(3), false, 0, 3, capacity);
  store_sequence_in_pool(hab, mk_seq({9}), 0, 4, capacity);
  REQUIRE(hab.pool_size() == 4);

  add_agent_to_pool(hab, mk_agent(4), false, 0, 5, capacity);
  CHECK(hab.pool_size() == 4);
  CHECK(hab.has_agent(1));  // own agent survives
  CHECK(!hab.has_agent(2));
  CHECK(hab.has_agent(3));
  CHECK(hab.has_agent(4));

  // Re-inserting an existing id refreshes instead of duplicating.
  add_agent_to_pool(hab, mk_agent(3), false, 0, 9, capacity);
  CHECK(hab.pool_size() == 4);
}

TEST_CASE("every event resolves exactly once and the ledger balances") {
  NetworkParams params;
  params.expiry_window = 2;
  HabitatNetwork net = star_network(4, 0.7);
  SplitMix64 rng(8);
  for (int round = 0; round < 30; ++round) {
    migrate(net, 0, mk_seq({static_cast<std::uint64_t>(100 + round)}), {}, rng, params);
    std::uint32_t dest = static_cast<std::uint32_t>(1 + round % 4);
    net.habitat(dest).requests_completed += 1;
    if (round % 3 == 0)
      resolve_usage(net, dest, mk_seq({static_cast<std::uint64_t>(100 + round)}), params);
    expire_events(net, params);
  }
  std::size_t pending = 0, success = 0, failure = 0;
  for (const MigrationEvent& ev : net.events) {
    if (ev.status == EventStatus::pending) ++pending;
    if (ev.status == EventStatus::success) ++success;
    if (ev.status == EventStatus::failure) ++failure;
  }
  CHECK(pending + success + failure == net.events.size());
  CHECK(success > 0);
  CHECK(failure > 0);
  CHECK(probabilities_valid(net));
}
