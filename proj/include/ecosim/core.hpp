#ifndef ECOSIM_CORE_HPP
#define ECOSIM_CORE_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace ecosim {

// One numeric capability tuple: which property (attr_id) at which level (value).
struct Attribute {
  std::uint32_t attr_id = 1;  // in [1, attr_id_max]
  std::int32_t value = 1;     // in [1, value_max]

  friend bool operator==(const Attribute&, const Attribute&) = default;
  friend auto operator<=>(const Attribute&, const Attribute&) = default;
};

// A set of attribute tuples; duplicates are dropped, order is canonical
// (sorted) so descriptions compare and hash deterministically.
struct SemanticDescription {
  std::vector<Attribute> attributes;

  static SemanticDescription from(std::vector<Attribute> attrs);
  bool contains(const Attribute& a) const;
  std::size_t size() const { return attributes.size(); }
  bool empty() const { return attributes.empty(); }

  friend bool operator==(const SemanticDescription&, const SemanticDescription&) = default;
};

// The atomic organism: a service with a semantic description and an opaque
// executable payload (unused by the simulation, carried for fidelity).
struct Agent {
  std::uint64_t agent_id = 0;  // unique ecosystem-wide, assigned monotonically
  SemanticDescription description;
  std::uint32_t origin_user = 0;
  std::string payload;
};

// An ordered composition of agents; the individual unit of evolution.
struct AgentSequence {
  std::vector<Agent> agents;

  std::size_t length() const { return agents.size(); }
  bool empty() const { return agents.empty(); }
  // Multiset union of the member descriptions, in member order.
  std::vector<Attribute> flat_description() const;
  std::vector<std::uint64_t> agent_ids() const;

  friend bool operator==(const AgentSequence&, const AgentSequence&) = default;
};

// A request: an ordered list of attribute sets (two-level hierarchy), much
// longer in total than any single agent description.
struct UserRequest {
  std::uint64_t request_id = 0;
  std::uint32_t user_id = 0;
  std::vector<std::vector<Attribute>> sets;

  // Union of all sets in list order.
  std::vector<Attribute> flat() const;
  std::size_t total_attributes() const;
};

// Distance between a required attribute and an offered one: same property,
// difference of levels; different property, the miss penalty.
double attribute_distance(const Attribute& required, const Attribute& offered, double d_miss);

// fitness(A, R) = 1 / (1 + sum over r in R of min over a in A of |r - a|).
// Strictly positive, 1.0 exactly when every required attribute is matched.
double fitness(const AgentSequence& seq, const UserRequest& req, double d_miss);

// Same, over a pre-flattened request (avoids rebuilding the flat view in
// inner evolution loops).
double fitness_flat(const std::vector<Attribute>& seq_flat,
                    const std::vector<Attribute>& req_flat, double d_miss);

// Parsimony pressure: divides fitness by 1 + beta * (length excess over the
// population average). Never increases fitness, identity at or below average.
double parsimony_fitness(double raw, std::size_t seq_len, double avg_len, double beta);

}  // namespace ecosim

#endif  // ECOSIM_CORE_HPP
