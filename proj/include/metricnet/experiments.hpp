// Seeded nearest-neighbor experiments.
//
// Scaling study: vp-tree vs exhaustive comparison counts on Euclidean point
// sets of growing size. Perturbation study: a Euclidean metric is made
// non-metric by inflating a random subset of its dissimilarities, and
// vp-trees built on the perturbed network and on its canonical projection
// are compared on how well they recover the true nearest neighbor.

#ifndef METRICNET_EXPERIMENTS_HPP
#define METRICNET_EXPERIMENTS_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "metricnet/graph.hpp"
#include "metricnet/projection.hpp"
#include "metricnet/random.hpp"
#include "metricnet/vptree.hpp"

namespace metricnet {

struct ExperimentConfig {
  std::uint64_t seed = 0;
  std::vector<std::size_t> sizes;
  std::size_t dim = 2;
  std::size_t n_queries = 1000;
  double perturb_prob = 0.0;
  /// Sweep for the perturbation study; empty means {perturb_prob}.
  std::vector<double> perturb_probs;
  /// Independent instances per sweep point.
  std::size_t n_seeds = 1;
  double delta_max = 10.0;

  void validate() const {
    auto check_r = [](double r) {
      if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("perturb_prob must lie in [0, 1]");
    };
    check_r(perturb_prob);
    for (double r : perturb_probs) check_r(r);
    if (!(delta_max > 0.0)) throw std::invalid_argument("delta_max must be positive");
    if (n_queries < 1) throw std::invalid_argument("n_queries must be at least 1");
    if (n_seeds < 1) throw std::invalid_argument("n_seeds must be at least 1");
    if (dim < 1) throw std::invalid_argument("dim must be at least 1");
    if (sizes.empty()) throw std::invalid_argument("sizes must not be empty");
    for (auto n : sizes)
      if (n < 1) throw std::invalid_argument("sizes must be positive");
  }

  std::vector<double> sweep() const {
    return perturb_probs.empty() ? std::vector<double>{perturb_prob} : perturb_probs;
  }

  static ExperimentConfig scaling_defaults() {
    ExperimentConfig c;
    for (std::size_t n = 64; n <= 16384; n *= 2) c.sizes.push_back(n);
    c.dim = 2;
    c.n_queries = 1000;
    return c;
  }

  static ExperimentConfig perturbation_defaults() {
    ExperimentConfig c;
    c.sizes = {300};
    c.dim = 20;
    c.n_queries = 300;
    c.perturb_probs = {0.0, 0.2, 0.4, 0.6, 0.8};
    c.n_seeds = 10;
    c.delta_max = 10.0;
    return c;
  }
};

// ---------------------------------------------------------------------------
// Euclidean instances
// ---------------------------------------------------------------------------

/// Points in the unit hypercube, row-major.
class PointCloud {
 public:
  PointCloud(std::size_t dim, std::vector<double> coords) : dim_(dim), coords_(std::move(coords)) {}

  std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  std::size_t dim() const { return dim_; }
  std::span<const double> point(std::size_t i) const { return {coords_.data() + i * dim_, dim_}; }

  double distance_to(std::span<const double> q, std::size_t i) const {
    const double* p = coords_.data() + i * dim_;
    double s = 0.0;
    for (std::size_t k = 0; k < dim_; ++k) {
      const double diff = p[k] - q[k];
      s += diff * diff;
    }
    return std::sqrt(s);
  }

  double operator()(std::size_t a, std::size_t b) const { return distance_to(point(a), b); }

 private:
  std::size_t dim_;
  std::vector<double> coords_;
};

inline std::vector<double> uniform_point(Rng& rng, std::size_t dim) {
  std::vector<double> p(dim);
  for (auto& x : p) x = rng.uniform01();
  return p;
}

inline PointCloud uniform_point_cloud(std::size_t n, std::size_t dim, Rng& rng) {
  std::vector<double> coords;
  coords.reserve(n * dim);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < dim; ++k) coords.push_back(rng.uniform01());
  return PointCloud(dim, std::move(coords));
}

inline DistanceMatrix pairwise_distances(const PointCloud& pts) {
  const std::size_t n = pts.size();
  DistanceMatrix d(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) d.set(i, j, pts(i, j));
  return d;
}

struct EuclideanInstance {
  PointCloud points;
  FiniteMetricSpace metric;
  Rng query_rng;

  /// A fresh query point from the same distribution, independent of the
  /// indexed points.
  std::vector<double> next_query() { return uniform_point(query_rng, points.dim()); }
};

/// n i.i.d. uniform points in [0, 1)^dim and their Euclidean distances.
inline EuclideanInstance gen_euclidean_metric(std::size_t n, std::size_t dim, std::uint64_t seed) {
  if (n < 1 || dim < 1) throw std::invalid_argument("gen_euclidean_metric needs n >= 1 and dim >= 1");
  const Rng root(seed);
  Rng point_rng = root.split(0);
  auto pts = uniform_point_cloud(n, dim, point_rng);
  auto metric = FiniteMetricSpace::trusted(pairwise_distances(pts));
  return {std::move(pts), std::move(metric), root.split(1)};
}

// ---------------------------------------------------------------------------
// Perturbation
// ---------------------------------------------------------------------------

/// Multiplies each unordered pair, independently with probability r, by
/// 1 + delta with delta ~ U[0, delta_max]. Pairs are visited in (i, j), i < j
/// order.
inline DistanceMatrix perturb_matrix(const DistanceMatrix& m, double r, double delta_max, Rng& rng) {
  DistanceMatrix out = m;
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng.bernoulli(r)) out.set(i, j, m(i, j) * (1.0 + delta_max * rng.uniform01()));
  return out;
}

inline Network perturb(const FiniteMetricSpace& m, double r, double delta_max, std::uint64_t seed) {
  Rng rng(seed);
  return complete_network(perturb_matrix(m.matrix(), r, delta_max, rng));
}

/// Same scheme applied to one vector of query-to-node dissimilarities.
inline void perturb_vector(std::vector<double>& w, double r, double delta_max, Rng& rng) {
  for (auto& x : w)
    if (rng.bernoulli(r)) x *= 1.0 + delta_max * rng.uniform01();
}

// ---------------------------------------------------------------------------
// Scaling study
// ---------------------------------------------------------------------------

struct ScalingRow {
  std::size_t n;
  double exhaustive_mean;
  double vptree_mean;
  std::size_t mismatches;  // queries where the tree missed the exact NN
};

inline std::vector<ScalingRow> run_scaling_study(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<ScalingRow> rows;
  const Rng root(cfg.seed);
  for (std::size_t s = 0; s < cfg.sizes.size(); ++s) {
    const std::size_t n = cfg.sizes[s];
    Rng size_rng = root.split(s);
    Rng point_rng = size_rng.split(0);
    Rng query_rng = size_rng.split(1);
    const PointCloud pts = uniform_point_cloud(n, cfg.dim, point_rng);
    const auto nodes = all_nodes(n);
    const VpTree tree = build_vp_tree(pts, nodes, size_rng.split(2).next());

    double tree_total = 0.0, exhaustive_total = 0.0;
    std::size_t mismatches = 0;
    for (std::size_t q = 0; q < cfg.n_queries; ++q) {
      const auto z = uniform_point(query_rng, cfg.dim);
      QueryOracle oracle([&](NodeId x) { return pts.distance_to(z, x); });
      const auto found = nn_search(tree, oracle);
      const auto exact = exhaustive_nn(nodes, oracle);
      tree_total += static_cast<double>(found.comparisons);
      exhaustive_total += static_cast<double>(exact.comparisons);
      if (found.best_dist != exact.best_dist) ++mismatches;
    }
    const auto k = static_cast<double>(cfg.n_queries);
    rows.push_back({n, exhaustive_total / k, tree_total / k, mismatches});
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Perturbation study
// ---------------------------------------------------------------------------

enum class Scheme { kRawNetwork, kProjected, kExhaustive };

inline const char* to_string(Scheme s) {
  switch (s) {
    case Scheme::kRawNetwork: return "raw-G";
    case Scheme::kProjected: return "projected-M";
    case Scheme::kExhaustive: return "exhaustive";
  }
  return "?";
}

struct TrialRecord {
  double r;
  std::size_t seed_index;
  std::size_t query_index;
  Scheme scheme;
  bool perfect;
  double relative_position;  // fraction in [0, 1]
  std::size_t comparisons;
};

struct PerturbationRow {
  double r;
  Scheme scheme;
  double perfect_pct;
  double mean_rel_pos_pct;
  double median_rel_pos_pct;
  double mean_comparisons;
};

struct PerturbationStudy {
  std::vector<TrialRecord> records;
  std::vector<PerturbationRow> rows;
};

inline double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

/// Records for one (r, seed) instance, in query order, schemes interleaved
/// as raw, projected, exhaustive.
inline std::vector<TrialRecord> run_perturbation_trial(const ExperimentConfig& cfg, double r,
                                                       std::size_t r_index, std::size_t seed_index) {
  const std::size_t n = cfg.sizes.front();
  const Rng instance_root = Rng(cfg.seed).split(seed_index);
  auto base = gen_euclidean_metric(n, cfg.dim, instance_root.split(0).next());
  Rng perturb_rng = instance_root.split(1000 + r_index);

  const DistanceMatrix raw = perturb_matrix(base.metric.matrix(), r, cfg.delta_max, perturb_rng);
  const FiniteMetricSpace projected = canonical_projection(complete_network(raw));
  const auto nodes = all_nodes(n);
  const std::uint64_t tree_seed = instance_root.split(2).next();
  const VpTree raw_tree = build_vp_tree(raw, nodes, tree_seed);
  const VpTree projected_tree = build_vp_tree(projected, nodes, tree_seed);

  std::vector<TrialRecord> out;
  out.reserve(3 * cfg.n_queries);
  for (std::size_t q = 0; q < cfg.n_queries; ++q) {
    const auto z = base.next_query();
    std::vector<double> w(n);
    for (NodeId x = 0; x < n; ++x) w[x] = base.points.distance_to(z, x);
    perturb_vector(w, r, cfg.delta_max, perturb_rng);

    QueryOracle oracle([&w](NodeId x) { return w[x]; });
    auto record = [&](Scheme s, const SearchResult& res) {
      const double pos = rank_of(w, res.best);
      out.push_back({r, seed_index, q, s, pos == 0.0, pos, res.comparisons});
    };
    record(Scheme::kRawNetwork, nn_search(raw_tree, oracle));
    record(Scheme::kProjected, nn_search(projected_tree, oracle));
    record(Scheme::kExhaustive, exhaustive_nn(nodes, oracle));
  }
  return out;
}

inline PerturbationStudy run_perturbation_study(const ExperimentConfig& cfg) {
  cfg.validate();
  PerturbationStudy study;
  const auto sweep = cfg.sweep();
  for (std::size_t ri = 0; ri < sweep.size(); ++ri) {
    const double r = sweep[ri];
    std::vector<TrialRecord> pooled;
    for (std::size_t s = 0; s < cfg.n_seeds; ++s) {
      auto recs = run_perturbation_trial(cfg, r, ri, s);
      pooled.insert(pooled.end(), recs.begin(), recs.end());
    }
    for (Scheme scheme : {Scheme::kRawNetwork, Scheme::kProjected, Scheme::kExhaustive}) {
      std::vector<double> positions;
      double perfect = 0.0, comparisons = 0.0;
      for (const auto& rec : pooled) {
        if (rec.scheme != scheme) continue;
        positions.push_back(rec.relative_position);
        perfect += rec.perfect ? 1.0 : 0.0;
        comparisons += static_cast<double>(rec.comparisons);
      }
      const auto k = static_cast<double>(positions.size());
      double mean = 0.0;
      for (double p : positions) mean += p;
      study.rows.push_back({r, scheme, 100.0 * perfect / k, 100.0 * mean / k,
                            100.0 * median_of(positions), comparisons / k});
    }
    study.records.insert(study.records.end(), pooled.begin(), pooled.end());
  }
  return study;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

inline std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

inline void write_scaling_csv(std::ostream& out, const std::vector<ScalingRow>& rows) {
  out << "n,exhaustive_mean,vptree_mean,mismatches\n";
  for (const auto& r : rows)
    out << r.n << ',' << fixed6(r.exhaustive_mean) << ',' << fixed6(r.vptree_mean) << ',' << r.mismatches << '\n';
}

inline void write_perturbation_csv(std::ostream& out, const std::vector<PerturbationRow>& rows) {
  out << "r,scheme,perfect_pct,mean_rel_pos_pct,median_rel_pos_pct,mean_comparisons\n";
  for (const auto& r : rows)
    out << fixed6(r.r) << ',' << to_string(r.scheme) << ',' << fixed6(r.perfect_pct) << ','
        << fixed6(r.mean_rel_pos_pct) << ',' << fixed6(r.median_rel_pos_pct) << ','
        << fixed6(r.mean_comparisons) << '\n';
}

}  // namespace metricnet

#endif  // METRICNET_EXPERIMENTS_HPP
