#include "ecosim/ecology.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace ecosim {

double description_distance(const SemanticDescription& d1, const SemanticDescription& d2) {
  // Attribute lists are kept sorted, so intersection is a linear merge.
  std::size_t common = 0;
  auto it1 = d1.attributes.begin();
  auto it2 = d2.attributes.begin();
  while (it1 != d1.attributes.end() && it2 != d2.attributes.end()) {
    if (*it1 < *it2)
      ++it1;
    else if (*it2 < *it1)
      ++it2;
    else {
      ++common;
      ++it1;
      ++it2;
    }
  }
  std::size_t unioned = d1.attributes.size() + d2.attributes.size() - common;
  return 1.0 - static_cast<double>(common) / static_cast<double>(unioned);
}

std::vector<Organism> collect_organisms(const HabitatNetwork& net) {
  std::map<std::uint64_t, Organism> by_id;
  for (const Habitat& hab : net.habitats) {
    for (const PoolAgent& p : hab.agents) {
      Organism& org = by_id[p.agent.agent_id];
      if (org.multiplicity == 0) {
        org.agent_id = p.agent.agent_id;
        org.description = p.agent.description;
      }
      org.multiplicity += 1;
    }
  }
  std::vector<Organism> organisms;
  organisms.reserve(by_id.size());
  for (auto& [id, org] : by_id) organisms.push_back(std::move(org));
  return organisms;
}

SpeciesPartition cluster_species(std::vector<Organism> organisms, double theta) {
  std::sort(organisms.begin(), organisms.end(),
            [](const Organism& a, const Organism& b) { return a.agent_id < b.agent_id; });

  SpeciesPartition partition;
  partition.theta = theta;
  partition.organisms = std::move(organisms);
  for (std::size_t i = 0; i < partition.organisms.size(); ++i) {
    const Organism& org = partition.organisms[i];
    bool placed = false;
    for (SpeciesCluster& cluster : partition.clusters) {
      for (std::size_t j : cluster.members) {
        if (description_distance(org.description, partition.organisms[j].description) <= theta) {
          cluster.members.push_back(i);
          cluster.multiplicity += org.multiplicity;
          placed = true;
          break;
        }
      }
      if (placed) break;
    }
    if (!placed)
      partition.clusters.push_back(SpeciesCluster{{i}, org.multiplicity});
  }
  return partition;
}

std::vector<std::pair<std::uint32_t, std::uint64_t>> relative_abundance(
    const SpeciesPartition& partition) {
  std::map<std::uint32_t, std::uint64_t> classes;
  for (const SpeciesCluster& c : partition.clusters) {
    std::uint32_t k = 0;
    while ((2ull << k) <= c.multiplicity) ++k;  // class k holds [2^k, 2^(k+1))
    classes[k] += 1;
  }
  return {classes.begin(), classes.end()};
}

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double r_squared_of(const std::vector<double>& observed, const std::vector<double>& predicted) {
  double mean = 0.0;
  for (double o : observed) mean += o;
  mean /= static_cast<double>(observed.size());
  double ss_tot = 0.0, ss_res = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    ss_tot += (observed[i] - mean) * (observed[i] - mean);
    ss_res += (observed[i] - predicted[i]) * (observed[i] - predicted[i]);
  }
  if (ss_tot == 0.0) return ss_res == 0.0 ? 1.0 : 0.0;
  return 1.0 - ss_res / ss_tot;
}

}  // namespace

FitResult log_normal_fit(const std::vector<double>& species_sizes) {
  if (species_sizes.size() < 3)
    throw std::invalid_argument("log_normal_fit: need at least 3 species");

  double mu = 0.0;
  for (double s : species_sizes) mu += std::log(s);
  mu /= static_cast<double>(species_sizes.size());
  double var = 0.0;
  for (double s : species_sizes) {
    double d = std::log(s) - mu;
    var += d * d;
  }
  var /= static_cast<double>(species_sizes.size());
  double sigma = std::sqrt(var);

  FitResult fit;
  fit.model = "log_normal";
  fit.param1 = mu;
  fit.param2 = sigma;

  // Observed octave counts vs fitted mass per octave.
  std::map<std::uint32_t, std::uint64_t> classes;
  for (double s : species_sizes) {
    std::uint32_t k = 0;
    while (static_cast<double>(2ull << k) <= s) ++k;
    classes[k] += 1;
  }
  if (sigma == 0.0) {
    fit.r_squared = classes.size() == 1 ? 1.0 : 0.0;
    return fit;
  }
  std::vector<double> observed, predicted;
  double total = static_cast<double>(species_sizes.size());
  for (const auto& [k, count] : classes) {
    double lo = std::log(static_cast<double>(1ull << k));
    double hi = std::log(static_cast<double>(2ull << k));
    double mass = normal_cdf((hi - mu) / sigma) - normal_cdf((lo - mu) / sigma);
    observed.push_back(static_cast<double>(count));
    predicted.push_back(total * mass);
  }
  fit.r_squared = r_squared_of(observed, predicted);
  return fit;
}

FitResult fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 3)
    throw std::invalid_argument("fit_line: need at least 3 points");
  auto n = static_cast<double>(xs.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  double denom = n * sxx - sx * sx;
  FitResult fit;
  fit.param1 = (n * sxy - sx * sy) / denom;
  fit.param2 = (sy - fit.param1 * sx) / n;
  std::vector<double> predicted(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) predicted[i] = fit.param1 * xs[i] + fit.param2;
  fit.r_squared = r_squared_of(ys, predicted);
  return fit;
}

FitResult power_law_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] <= 0.0 || ys[i] <= 0.0) continue;
    lx.push_back(std::log10(xs[i]));
    ly.push_back(std::log10(ys[i]));
  }
  FitResult fit = fit_line(lx, ly);
  fit.model = "power_law";
  return fit;
}

SpeciesAreaResult species_area(const HabitatNetwork& net, const SpeciesPartition& partition,
                               std::uint32_t replicates, std::uint32_t n_max, SplitMix64& rng) {
  auto habitat_count = static_cast<std::uint32_t>(net.habitats.size());
  if (n_max > habitat_count)
    throw std::invalid_argument("species_area: sample size exceeds habitat count");

  std::map<std::uint64_t, std::size_t> species_of;  // agent_id -> cluster index
  for (std::size_t c = 0; c < partition.clusters.size(); ++c)
    for (std::size_t m : partition.clusters[c].members)
      species_of[partition.organisms[m].agent_id] = c;

  SpeciesAreaResult result;
  for (std::uint32_t n = 1; n <= n_max; ++n) {
    double sum = 0.0;
    for (std::uint32_t rep = 0; rep < replicates; ++rep) {
      auto picks = rng.sample_indices(habitat_count, n);
      std::set<std::size_t> seen;
      for (auto h : picks)
        for (const PoolAgent& p : net.habitats[h].agents)
          seen.insert(species_of.at(p.agent.agent_id));
      sum += static_cast<double>(seen.size());
    }
    result.curve.push_back({n, sum / static_cast<double>(replicates)});
  }

  std::vector<double> xs, ys;
  for (const auto& pt : result.curve) {
    xs.push_back(static_cast<double>(pt.n));
    ys.push_back(pt.mean_species);
  }
  result.fit = power_law_fit(xs, ys);
  return result;
}

std::vector<double> succession_curve(const std::vector<SuccessionRecord>& records,
                                     std::size_t window) {
  if (window < 1) throw std::invalid_argument("succession_curve: window must be >= 1");
  std::size_t n = records.size();
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + records[i].effectiveness;

  std::vector<double> smooth(n);
  std::size_t before = (window - 1) / 2;
  std::size_t after = window / 2;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t lo = i >= before ? i - before : 0;
    std::size_t hi = std::min(i + after, n - 1);
    smooth[i] = (prefix[hi + 1] - prefix[lo]) / static_cast<double>(hi - lo + 1);
  }
  return smooth;
}

}  // namespace ecosim
