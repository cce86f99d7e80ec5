#ifndef ECOSIM_SNAPSHOT_HPP
#define ECOSIM_SNAPSHOT_HPP

#include <string>

#include "ecosim/sim.hpp"

namespace ecosim {

struct SnapshotError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A snapshot is one JSON document with lexicographically ordered keys, so
// identical state serializes to identical bytes. Doubles round-trip exactly.
std::string snapshot_string(const SimState& state);
SimState parse_snapshot(const std::string& text);

void write_snapshot_file(const SimState& state, const std::string& path);
SimState load_snapshot_file(const std::string& path);

}  // namespace ecosim

#endif  // ECOSIM_SNAPSHOT_HPP
