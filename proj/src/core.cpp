#include "ecosim/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace ecosim {

SemanticDescription SemanticDescription::from(std::vector<Attribute> attrs) {
  std::sort(attrs.begin(), attrs.end());
  attrs.erase(std::unique(attrs.begin(), attrs.end()), attrs.end());
  return SemanticDescription{std::move(attrs)};
}

bool SemanticDescription::contains(const Attribute& a) const {
  return std::binary_search(attributes.begin(), attributes.end(), a);
}

std::vector<Attribute> AgentSequence::flat_description() const {
  std::vector<Attribute> flat;
  for (const Agent& a : agents)
    flat.insert(flat.end(), a.description.attributes.begin(), a.description.attributes.end());
  return flat;
}

std::vector<std::uint64_t> AgentSequence::agent_ids() const {
  std::vector<std::uint64_t> ids;
  ids.reserve(agents.size());
  for (const Agent& a : agents) ids.push_back(a.agent_id);
  return ids;
}

std::vector<Attribute> UserRequest::flat() const {
  std::vector<Attribute> out;
  for (const auto& s : sets) out.insert(out.end(), s.begin(), s.end());
  return out;
}

std::size_t UserRequest::total_attributes() const {
  std::size_t n = 0;
  for (const auto& s : sets) n += s.size();
  return n;
}

double attribute_distance(const Attribute& required, const Attribute& offered, double d_miss) {
  if (required.attr_id != offered.attr_id) return d_miss;
  return std::abs(required.value - offered.value);
}

double fitness_flat(const std::vector<Attribute>& seq_flat,
                    const std::vector<Attribute>& req_flat, double d_miss) {
  double total = 0.0;
  for (const Attribute& r : req_flat) {
    double best = d_miss;
    for (const Attribute& a : seq_flat) {
      if (a.attr_id != r.attr_id) continue;
      double d = std::abs(r.value - a.value);
      if (d < best) best = d;
      if (best == 0.0) break;
    }
    total += best;
  }
  return 1.0 / (1.0 + total);
}

double fitness(const AgentSequence& seq, const UserRequest& req, double d_miss) {
  return fitness_flat(seq.flat_description(), req.flat(), d_miss);
}

double parsimony_fitness(double raw, std::size_t seq_len, double avg_len, double beta) {
  double excess = static_cast<double>(seq_len) - avg_len;
  if (excess <= 0.0) return raw;
  return raw / (1.0 + beta * excess);
}

}  // namespace ecosim
