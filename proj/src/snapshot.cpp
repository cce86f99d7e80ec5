#include "ecosim/snapshot.hpp"

#include <json.hpp>

namespace ecosim {

using json = nlohmann::json;

namespace {

json attribute_to_json(const Attribute& a) { return json::array({a.attr_id, a.value}); }

Attribute attribute_from_json(const json& j) {
  Attribute a;
  a.attr_id = j.at(0).get<std::uint32_t>();
  a.value = j.at(1).get<std::int32_t>();
  return a;
}

json attrs_to_json(const std::vector<Attribute>& attrs) {
  json arr = json::array();
  for (const Attribute& a : attrs) arr.push_back(attribute_to_json(a));
  return arr;
}

std::vector<Attribute> attrs_from_json(const json& j) {
  std::vector<Attribute> attrs;
  for (const json& a : j) attrs.push_back(attribute_from_json(a));
  return attrs;
}

json agent_to_json(const Agent& a) {
  return json{{"desc", attrs_to_json(a.description.attributes)},
              {"id", a.agent_id},
              {"origin", a.origin_user},
              {"payload", a.payload}};
}

Agent agent_from_json(const json& j) {
  Agent a;
  a.agent_id = j.at("id").get<std::uint64_t>();
  a.origin_user = j.at("origin").get<std::uint32_t>();
  a.payload = j.at("payload").get<std::string>();
  a.description.attributes = attrs_from_json(j.at("desc"));
  return a;
}

json sequence_to_json(const AgentSequence& seq) {
  json arr = json::array();
  for (const Agent& a : seq.agents) arr.push_back(agent_to_json(a));
  return arr;
}

AgentSequence sequence_from_json(const json& j) {
  AgentSequence seq;
  for (const json& a : j) seq.agents.push_back(agent_from_json(a));
  return seq;
}

json habitat_to_json(const Habitat& hab) {
  json agents = json::array();
  for (const PoolAgent& p : hab.agents)
    agents.push_back(json{{"agent", agent_to_json(p.agent)},
                          {"last_used", p.last_used},
                          {"own", p.own_user},
                          {"uses", p.uses},
                          {"via", p.via_event}});
  json sequences = json::array();
  for (const StoredSequence& s : hab.sequences)
    sequences.push_back(json{{"last_used", s.last_used},
                             {"seq", sequence_to_json(s.seq)},
                             {"uses", s.uses},
                             {"via", s.via_event}});
  json outgoing = json::object();
  for (const auto& [dest, p] : hab.outgoing) outgoing[std::to_string(dest)] = p;
  return json{{"agents", agents},
              {"completed", hab.requests_completed},
              {"id", hab.habitat_id},
              {"outgoing", outgoing},
              {"owner", hab.owner_user_id},
              {"sequences", sequences}};
}

Habitat habitat_from_json(const json& j) {
  Habitat hab;
  hab.habitat_id = j.at("id").get<std::uint32_t>();
  hab.owner_user_id = j.at("owner").get<std::uint32_t>();
  hab.requests_completed = j.at("completed").get<std::uint64_t>();
  for (const json& a : j.at("agents")) {
    PoolAgent p;
    p.agent = agent_from_json(a.at("agent"));
    p.last_used = a.at("last_used").get<std::uint64_t>();
    p.own_user = a.at("own").get<bool>();
    p.uses = a.at("uses").get<std::uint32_t>();
    p.via_event = a.at("via").get<std::uint64_t>();
    hab.agents.push_back(std::move(p));
  }
  for (const json& s : j.at("sequences")) {
    StoredSequence seq;
    seq.seq = sequence_from_json(s.at("seq"));
    seq.last_used = s.at("last_used").get<std::uint64_t>();
    seq.uses = s.at("uses").get<std::uint32_t>();
    seq.via_event = s.at("via").get<std::uint64_t>();
    hab.sequences.push_back(std::move(seq));
  }
  for (const auto& [key, value] : j.at("outgoing").items())
    hab.outgoing[static_cast<std::uint32_t>(std::stoul(key))] = value.get<double>();
  return hab;
}

const char* status_name(EventStatus s) {
  switch (s) {
    case EventStatus::pending: return "pending";
    case EventStatus::success: return "success";
    default: return "failure";
  }
}

EventStatus status_from_name(const std::string& name) {
  if (name == "pending") return EventStatus::pending;
  if (name == "success") return EventStatus::success;
  if (name == "failure") return EventStatus::failure;
  throw SnapshotError("unknown event status '" + name + "'");
}

json event_to_json(const MigrationEvent& ev) {
  json j{{"arrival", ev.arrival_request_index},
         {"dest", ev.dest_habitat},
         {"dest_completed", ev.dest_completed_at_arrival},
         {"hops", ev.hop_path},
         {"id", ev.event_id},
         {"origin", ev.origin_habitat},
         {"status", status_name(ev.status)},
         {"via", json::array({ev.via_connection.first, ev.via_connection.second})}};
  // The migrant payload only matters while the event can still resolve.
  j["migrant"] =
      ev.status == EventStatus::pending ? sequence_to_json(ev.migrant) : json::array();
  return j;
}

MigrationEvent event_from_json(const json& j) {
  MigrationEvent ev;
  ev.event_id = j.at("id").get<std::uint64_t>();
  ev.migrant = sequence_from_json(j.at("migrant"));
  ev.origin_habitat = j.at("origin").get<std::uint32_t>();
  ev.dest_habitat = j.at("dest").get<std::uint32_t>();
  ev.via_connection = {j.at("via").at(0).get<std::uint32_t>(),
                       j.at("via").at(1).get<std::uint32_t>()};
  ev.hop_path = j.at("hops").get<std::vector<std::uint32_t>>();
  ev.arrival_request_index = j.at("arrival").get<std::uint64_t>();
  ev.dest_completed_at_arrival = j.at("dest_completed").get<std::uint64_t>();
  ev.status = status_from_name(j.at("status").get<std::string>());
  return ev;
}

json template_to_json(const CommunityTemplate& tpl) {
  json sets = json::array();
  for (const auto& s : tpl.sets) sets.push_back(attrs_to_json(s));
  return json{{"community", tpl.community_id},
              {"covered", attrs_to_json(tpl.covered)},
              {"sets", sets},
              {"uncovered", attrs_to_json(tpl.uncovered)}};
}

CommunityTemplate template_from_json(const json& j) {
  CommunityTemplate tpl;
  tpl.community_id = j.at("community").get<std::uint32_t>();
  for (const json& s : j.at("sets")) tpl.sets.push_back(attrs_from_json(s));
  tpl.covered = attrs_from_json(j.at("covered"));
  tpl.uncovered = attrs_from_json(j.at("uncovered"));
  return tpl;
}

json series_row_to_json(const NetworkSeriesRow& row) {
  json j{{"clustering", row.stats.clustering_coefficient},
         {"edges", row.stats.edge_count},
         {"request_index", row.request_index}};
  if (row.stats.char_path_length)
    j["path"] = *row.stats.char_path_length;
  else
    j["path"] = nullptr;
  return j;
}

NetworkSeriesRow series_row_from_json(const json& j) {
  NetworkSeriesRow row;
  row.request_index = j.at("request_index").get<std::uint64_t>();
  row.stats.clustering_coefficient = j.at("clustering").get<double>();
  row.stats.edge_count = j.at("edges").get<std::size_t>();
  if (!j.at("path").is_null()) row.stats.char_path_length = j.at("path").get<double>();
  return row;
}

}  // namespace

std::string snapshot_string(const SimState& state) {
  json root;

  json config = json::object();
  for (const ConfigField& field : config_fields()) {
    if (field.name == "output_dir") continue;  // an I/O destination, not simulation state
    std::visit(
        [&](auto member) {
          using T = std::remove_cvref_t<decltype(state.config.*member)>;
          config[field.name] = static_cast<const T&>(state.config.*member);
        },
        field.member);
  }
  root["config"] = config;

  root["best_lengths"] = state.best_lengths;

  json habitats = json::array();
  for (const Habitat& hab : state.net.habitats) habitats.push_back(habitat_to_json(hab));
  root["habitats"] = habitats;

  json events = json::array();
  for (const MigrationEvent& ev : state.net.events) events.push_back(event_to_json(ev));
  root["events"] = events;

  json shortcuts = json::array();
  for (const auto& [from, to] : state.net.shortcut_queue)
    shortcuts.push_back(json::array({from, to}));
  root["shortcut_queue"] = shortcuts;

  root["request_counter"] = state.net.request_counter;
  root["next_agent_id"] = state.net.next_agent_id;
  root["next_event_id"] = state.net.next_event_id;

  json users = json::array();
  for (const User& u : state.scenario.users)
    users.push_back(json{{"community", u.community_id},
                         {"gap", attrs_to_json(u.gap_remaining)},
                         {"habitat", u.habitat_id},
                         {"id", u.user_id},
                         {"submitted", u.requests_submitted}});
  root["users"] = users;

  json templates = json::array();
  for (const CommunityTemplate& tpl : state.scenario.templates)
    templates.push_back(template_to_json(tpl));
  root["templates"] = templates;

  json series = json::array();
  for (const NetworkSeriesRow& row : state.network_series)
    series.push_back(series_row_to_json(row));
  root["network_series"] = series;

  root["streams"] = json{{"deployment", state.deployment_stream.state()},
                         {"migration", state.migration_stream.state()},
                         {"requests", state.request_stream.state()}};

  return root.dump(1, '\t') + "\n";
}

SimState parse_snapshot(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw SnapshotError(std::string("snapshot parse error: ") + e.what());
  }
  try {
    SimState state;
    for (const ConfigField& field : config_fields()) {
      if (field.name == "output_dir") continue;
      const json& value = root.at("config").at(field.name);
      std::visit(
          [&](auto member) {
            using T = std::remove_cvref_t<decltype(state.config.*member)>;
            state.config.*member = value.get<T>();
          },
          field.member);
    }

    state.best_lengths = root.at("best_lengths").get<std::vector<std::uint32_t>>();

    for (const json& h : root.at("habitats"))
      state.net.habitats.push_back(habitat_from_json(h));
    for (const json& e : root.at("events")) state.net.events.push_back(event_from_json(e));
    for (const json& s : root.at("shortcut_queue"))
      state.net.shortcut_queue.emplace_back(s.at(0).get<std::uint32_t>(),
                                            s.at(1).get<std::uint32_t>());
    state.net.request_counter = root.at("request_counter").get<std::uint64_t>();
    state.net.next_agent_id = root.at("next_agent_id").get<std::uint64_t>();
    state.net.next_event_id = root.at("next_event_id").get<std::uint64_t>();

    for (const json& u : root.at("users")) {
      User user;
      user.user_id = u.at("id").get<std::uint32_t>();
      user.habitat_id = u.at("habitat").get<std::uint32_t>();
      user.community_id = u.at("community").get<std::uint32_t>();
      user.requests_submitted = u.at("submitted").get<std::uint64_t>();
      user.gap_remaining = attrs_from_json(u.at("gap"));
      state.scenario.users.push_back(user);
    }
    for (const json& t : root.at("templates"))
      state.scenario.templates.push_back(template_from_json(t));

    for (const json& row : root.at("network_series"))
      state.network_series.push_back(series_row_from_json(row));

    state.deployment_stream.set_state(root.at("streams").at("deployment").get<std::uint64_t>());
    state.migration_stream.set_state(root.at("streams").at("migration").get<std::uint64_t>());
    state.request_stream.set_state(root.at("streams").at("requests").get<std::uint64_t>());
    return state;
  } catch (const json::exception& e) {
    throw SnapshotError(std::string("snapshot field error: ") + e.what());
  }
}

void write_snapshot_file(const SimState& state, const std::string& path) {
  write_text_file(path, snapshot_string(state));
}

SimState load_snapshot_file(const std::string& path) {
  return parse_snapshot(read_text_file(path));
}

}  // namespace ecosim
