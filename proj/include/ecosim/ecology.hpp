#ifndef ECOSIM_ECOLOGY_HPP
#define ECOSIM_ECOLOGY_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ecosim/core.hpp"
#include "ecosim/network.hpp"
#include "ecosim/rng.hpp"

namespace ecosim {

// One completed request: the ecosystem's responsiveness sample.
struct SuccessionRecord {
  std::uint64_t request_index = 0;
  std::uint32_t user_id = 0;
  std::uint32_t habitat_id = 0;
  std::uint32_t generations = 0;
  double effectiveness = 0.0;  // best raw fitness delivered, in (0,1]
};

// A distinct agent with its copy count across all habitat pools.
struct Organism {
  std::uint64_t agent_id = 0;
  SemanticDescription description;
  std::uint64_t multiplicity = 0;
};

struct SpeciesCluster {
  std::vector<std::size_t> members;  // indices into the organism list
  std::uint64_t multiplicity = 0;    // summed copies of the members
};

struct SpeciesPartition {
  std::vector<Organism> organisms;  // sorted by agent_id
  std::vector<SpeciesCluster> clusters;
  double theta = 0.10;
};

struct FitResult {
  std::string model;     // "log_normal" or "power_law"
  double param1 = 0.0;   // mu, or slope
  double param2 = 0.0;   // sigma, or intercept
  double r_squared = 0.0;
};

struct SpeciesAreaPoint {
  std::uint32_t n = 0;
  double mean_species = 0.0;
};

struct SpeciesAreaResult {
  std::vector<SpeciesAreaPoint> curve;
  FitResult fit;
};

// Jaccard distance between two semantic descriptions over (attr_id, value)
// pairs: 1 - |intersection| / |union|. Both descriptions must be non-empty.
double description_distance(const SemanticDescription& d1, const SemanticDescription& d2);

// Snapshot of all agents across the habitat pools, one organism per distinct
// agent_id with its copy count, sorted by agent_id.
std::vector<Organism> collect_organisms(const HabitatNetwork& net);

// Deterministic single-linkage clustering: organisms are processed in id
// order and each joins the first cluster holding a member within theta, else
// founds a new one. Species multiplicity is the summed member multiplicity.
SpeciesPartition cluster_species(std::vector<Organism> organisms, double theta);

// Octave histogram: class k counts the species whose abundance (copy count)
// lies in [2^k, 2^(k+1)). Only non-empty classes are returned, ascending.
std::vector<std::pair<std::uint32_t, std::uint64_t>> relative_abundance(
    const SpeciesPartition& partition);

// Method-of-moments fit of a log-normal to the species sizes; r_squared
// compares the observed octave counts with the fitted density integrated per
// octave. Requires at least 3 species.
FitResult log_normal_fit(const std::vector<double>& species_sizes);

// Least-squares line through (x, y); returns slope, intercept, r_squared.
FitResult fit_line(const std::vector<double>& xs, const std::vector<double>& ys);

// Power-law fit of y = c * x^z by a least-squares line in log10-log10 space.
FitResult power_law_fit(const std::vector<double>& xs, const std::vector<double>& ys);

// Species-area relation: for each n in [1, n_max], `replicates` uniform
// samples of n distinct habitats, counting distinct species present in the
// union of their pools; the curve of means is fit to a power law. Throws when
// n_max exceeds the habitat count.
SpeciesAreaResult species_area(const HabitatNetwork& net, const SpeciesPartition& partition,
                               std::uint32_t replicates, std::uint32_t n_max, SplitMix64& rng);

// Centered moving average of the effectiveness series (window truncated at
// the boundaries). window = 1 reproduces the raw series.
std::vector<double> succession_curve(const std::vector<SuccessionRecord>& records,
                                     std::size_t window);

}  // namespace ecosim

#endif  // ECOSIM_ECOLOGY_HPP
