#ifndef ECOSIM_RNG_HPP
#define ECOSIM_RNG_HPP

#include <cstdint>
#include <vector>

namespace ecosim {

// SplitMix64 (Steele, Lea, Flood 2014). Chosen as the single generator for
// the whole simulator because its state transition and output mix are fully
// specified in 64-bit integer arithmetic, so runs are bit-exact across
// compilers and platforms, and the state serializes as one integer.
class SplitMix64 {
 public:
  SplitMix64() = default;
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0,1) with 53 random bits.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound). Modulo reduction: the bias is < bound/2^64,
  // far below anything the statistical checks can resolve, and it keeps the
  // draw sequence specifiable in plain integer arithmetic.
  std::uint64_t next_below(std::uint64_t bound) { return next() % bound; }

  // Uniform integer in [lo, hi] inclusive.
  std::int64_t next_range(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(next_below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  bool next_bernoulli(double p) { return next_double() < p; }

  // Draws k distinct indices from [0,n) by partial Fisher-Yates; order of the
  // returned prefix is the draw order (itself uniform).
  std::vector<std::uint32_t> sample_indices(std::uint32_t n, std::uint32_t k) {
    std::vector<std::uint32_t> idx(n);
    for (std::uint32_t i = 0; i < n; ++i) idx[i] = i;
    if (k > n) k = n;
    for (std::uint32_t i = 0; i < k; ++i) {
      std::uint32_t j = i + static_cast<std::uint32_t>(next_below(n - i));
      std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    return idx;
  }

  std::uint64_t state() const { return state_; }
  void set_state(std::uint64_t s) { state_ = s; }

 private:
  std::uint64_t state_ = 0;
};

// Stream indices, in creation order. Every random decision in the simulator
// draws from a stream seeded by derive_stream_seed(master_seed, index), so a
// run is a pure function of (config, master_seed).
enum StreamIndex : std::uint64_t {
  kStreamNetworkInit = 0,  // initial random wiring of the habitat network
  kStreamScenario = 1,     // community templates, covered subsets, initial agents
  kStreamRequests = 2,     // user choice and request noise, one stream for the run
  kStreamMigration = 3,    // per-connection migration and deployment-copy draws
  kStreamDeployment = 4,   // descriptions of agents deployed during the run
  kStreamAnalysis = 5,     // replicate sampling in the analysis suite
  kStreamPopulationBase = 16,  // population for request r uses index 16 + r
};

// The seed of stream `stream_index` is the (stream_index+1)-th SplitMix64
// output starting from master_seed.
inline std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::uint64_t stream_index) {
  SplitMix64 g(master_seed);
  std::uint64_t out = 0;
  for (std::uint64_t i = 0; i <= stream_index; ++i) out = g.next();
  return out;
}

inline SplitMix64 make_stream(std::uint64_t master_seed, std::uint64_t stream_index) {
  return SplitMix64(derive_stream_seed(master_seed, stream_index));
}

}  // namespace ecosim

#endif  // ECOSIM_RNG_HPP
