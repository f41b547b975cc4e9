// Seeded randomness shared by generators, tree construction and benches.
//
// Everything here is defined bit-for-bit (no std::*_distribution), so a seed
// produces the same instances with any standard library.

#ifndef METRICNET_RANDOM_HPP
#define METRICNET_RANDOM_HPP

#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "metricnet/graph.hpp"

namespace metricnet {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

  /// Independent stream derived from this generator's seed and a label.
  Rng split(std::uint64_t stream) const {
    return Rng(splitmix64(seed_ ^ splitmix64(stream + 0x5851f42d4c957f2dULL)));
  }

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform in (0, hi].
  double uniform_positive(double hi) { return hi * (1.0 - uniform01()); }

  /// Uniform integer in [lo, hi], unbiased by rejection.
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) {
    const std::uint64_t span = hi - lo + 1;
    if (span == 0) return engine_();
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x;
    do x = engine_();
    while (x >= limit);
    return lo + x % span;
  }

  bool bernoulli(double p) { return uniform01() < p; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i)
      std::swap(v[i - 1], v[uniform_int(0, i - 1)]);
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

struct RandomGraphParams {
  std::size_t n = 8;
  double edge_prob = 0.3;
  double max_weight = 10.0;
  /// When > 0, weights are multiples of 1/quantum (exact float arithmetic).
  int quantum = 0;
};

inline double sample_weight(Rng& rng, const RandomGraphParams& p) {
  if (p.quantum > 0) {
    const auto steps = static_cast<std::uint64_t>(p.max_weight * p.quantum);
    return static_cast<double>(rng.uniform_int(1, steps)) / p.quantum;
  }
  return rng.uniform_positive(p.max_weight);
}

/// Erdos-Renyi graph with connectivity repair: after sampling, each component
/// is joined to the previous one by a single random edge.
inline std::vector<WeightedEdge> random_connected_edges(Rng& rng, const RandomGraphParams& p) {
  const std::size_t n = p.n;
  std::vector<WeightedEdge> raw;
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      if (rng.bernoulli(p.edge_prob)) {
        raw.push_back({static_cast<std::int64_t>(u), static_cast<std::int64_t>(v), sample_weight(rng, p)});
        parent[find(u)] = find(v);
      }
  // One representative per component, in order of smallest member.
  std::vector<std::size_t> reps;
  std::vector<char> seen(n, 0);
  std::vector<std::vector<std::size_t>> members(n);
  for (std::size_t x = 0; x < n; ++x) members[find(x)].push_back(x);
  for (std::size_t x = 0; x < n; ++x) {
    std::size_t r = find(x);
    if (!seen[r]) {
      seen[r] = 1;
      reps.push_back(r);
    }
  }
  for (std::size_t i = 1; i < reps.size(); ++i) {
    const auto& a = members[reps[i - 1]];
    const auto& b = members[reps[i]];
    auto u = a[rng.uniform_int(0, a.size() - 1)];
    auto v = b[rng.uniform_int(0, b.size() - 1)];
    raw.push_back({static_cast<std::int64_t>(u), static_cast<std::int64_t>(v), sample_weight(rng, p)});
  }
  return raw;
}

inline Network random_connected_network(Rng& rng, const RandomGraphParams& p) {
  return validate_network(random_connected_edges(rng, p), p.n);
}

inline Network random_complete_network(Rng& rng, RandomGraphParams p) {
  p.edge_prob = 1.0;
  return random_connected_network(rng, p);
}

}  // namespace metricnet

#endif  // METRICNET_RANDOM_HPP
