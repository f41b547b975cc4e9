// Metric projections of networks.
//
// canonical_projection maps a network to its shortest-path metric. The rest
// of this header makes the two admissibility axioms executable: a checker
// for dissimilarity-reducing node maps, a checker per axiom, a zoo of
// alternative projections, and generators for axiom test instances.

#ifndef METRICNET_PROJECTION_HPP
#define METRICNET_PROJECTION_HPP

#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "metricnet/graph.hpp"
#include "metricnet/random.hpp"

namespace metricnet {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

// ---------------------------------------------------------------------------
// Shortest paths
// ---------------------------------------------------------------------------

struct ShortestPathTree {
  std::vector<double> dist;
  std::vector<NodeId> pred;  // kNoNode for the source
};

namespace detail {

// Relaxation shared by both single-source variants: a strictly shorter
// distance always wins; on an exact tie the smaller predecessor id wins.
inline void relax(ShortestPathTree& t, const std::vector<char>& done, NodeId u,
                  const Neighbor& nb, bool& improved) {
  const double nd = t.dist[u] + nb.weight;
  improved = false;
  if (done[nb.node]) return;
  if (nd < t.dist[nb.node]) {
    t.dist[nb.node] = nd;
    t.pred[nb.node] = u;
    improved = true;
  } else if (nd == t.dist[nb.node] && u < t.pred[nb.node]) {
    t.pred[nb.node] = u;
  }
}

}  // namespace detail

/// Binary-heap Dijkstra.
inline ShortestPathTree dijkstra_heap(const Network& g, NodeId source) {
  const std::size_t n = g.size();
  ShortestPathTree t{std::vector<double>(n, kInfinity), std::vector<NodeId>(n, kNoNode)};
  std::vector<char> done(n, 0);
  using Item = std::pair<double, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  t.dist[source] = 0.0;
  heap.push({0.0, source});
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (done[u] || d != t.dist[u]) continue;
    done[u] = 1;
    for (const auto& nb : g.neighbors(u)) {
      bool improved;
      detail::relax(t, done, u, nb, improved);
      if (improved) heap.push({t.dist[nb.node], nb.node});
    }
  }
  return t;
}

/// Array-scan Dijkstra, O(n^2) per source; preferable on dense graphs.
inline ShortestPathTree dijkstra_dense(const Network& g, NodeId source) {
  const std::size_t n = g.size();
  ShortestPathTree t{std::vector<double>(n, kInfinity), std::vector<NodeId>(n, kNoNode)};
  std::vector<char> done(n, 0);
  t.dist[source] = 0.0;
  for (std::size_t round = 0; round < n; ++round) {
    NodeId u = kNoNode;
    for (NodeId x = 0; x < n; ++x)
      if (!done[x] && (u == kNoNode || t.dist[x] < t.dist[u])) u = x;
    if (u == kNoNode || t.dist[u] == kInfinity) break;
    done[u] = 1;
    for (const auto& nb : g.neighbors(u)) {
      bool improved;
      detail::relax(t, done, u, nb, improved);
    }
  }
  return t;
}

/// Arc density (2|E| / n^2) above which the dense variant is used.
inline constexpr double kDenseThreshold = 0.5;

inline bool prefers_dense(const Network& g) {
  const double n = static_cast<double>(g.size());
  return n > 0 && 2.0 * static_cast<double>(g.edge_count()) / (n * n) > kDenseThreshold;
}

inline ShortestPathTree single_source(const Network& g, NodeId source) {
  return prefers_dense(g) ? dijkstra_dense(g, source) : dijkstra_heap(g, source);
}

/// The shortest-path metric of g. Entry (x, y) with x < y is the distance
/// from the single-source run at x, mirrored to (y, x), so the table is
/// exactly symmetric.
inline FiniteMetricSpace canonical_projection(const Network& g) {
  const std::size_t n = g.size();
  DistanceMatrix d(n);
  for (NodeId s = 0; s + 1 < n; ++s) {
    auto t = single_source(g, s);
    for (NodeId y = s + 1; y < n; ++y) d.set(s, y, t.dist[y]);
  }
  return FiniteMetricSpace::trusted(std::move(d));
}

struct ShortestPath {
  double length;
  Path path;
};

/// A minimum-length path between x and y. Among equal-length paths the one
/// whose predecessor chain (rooted at min(x, y)) uses the smallest ids wins.
inline ShortestPath shortest_path(const Network& g, NodeId x, NodeId y) {
  if (x >= g.size()) throw NodeOutOfRangeError(x, g.size());
  if (y >= g.size()) throw NodeOutOfRangeError(y, g.size());
  if (x == y) return {0.0, Path::trivial(x)};
  const NodeId source = std::min(x, y);
  const NodeId target = std::max(x, y);
  auto t = single_source(g, source);
  std::vector<NodeId> chain;
  for (NodeId v = target; v != kNoNode; v = t.pred[v]) chain.push_back(v);
  if (x == source) std::reverse(chain.begin(), chain.end());
  return {t.dist[target], Path(std::move(chain))};
}

// ---------------------------------------------------------------------------
// Node maps
// ---------------------------------------------------------------------------

struct NodeMap {
  std::vector<NodeId> image;  // image[x] = phi(x)

  std::size_t source_size() const { return image.size(); }
  NodeId operator()(NodeId x) const { return image[x]; }

  static NodeMap identity(std::size_t n) {
    NodeMap m;
    m.image.resize(n);
    std::iota(m.image.begin(), m.image.end(), NodeId{0});
    return m;
  }
};

enum class MapDefect { kSizeMismatch, kOutOfRange, kNotInjective, kEdgeNotPreserved, kWeightIncreased };

inline const char* to_string(MapDefect d) {
  switch (d) {
    case MapDefect::kSizeMismatch: return "size mismatch";
    case MapDefect::kOutOfRange: return "image out of range";
    case MapDefect::kNotInjective: return "not injective";
    case MapDefect::kEdgeNotPreserved: return "edge not preserved";
    case MapDefect::kWeightIncreased: return "weight increased";
  }
  return "?";
}

struct MapViolation {
  MapDefect defect;
  NodeId x = 0;
  NodeId y = 0;
  double weight = 0.0;         // W(x, y) in the source
  double mapped_weight = 0.0;  // W'(phi x, phi y), when the edge exists

  std::string describe() const {
    return std::string(to_string(defect)) + " at (" + std::to_string(x) + ", " +
           std::to_string(y) + ")";
  }
};

/// Checks that phi is injective and sends every edge of g to an edge of
/// g_prime whose weight is no larger.
inline std::optional<MapViolation> is_dissimilarity_reducing(const Network& g,
                                                             const Network& g_prime,
                                                             const NodeMap& phi) {
  if (phi.source_size() != g.size()) return MapViolation{MapDefect::kSizeMismatch};
  std::vector<NodeId> owner(g_prime.size(), kNoNode);
  for (NodeId x = 0; x < phi.source_size(); ++x) {
    const NodeId fx = phi(x);
    if (fx >= g_prime.size()) return MapViolation{MapDefect::kOutOfRange, x, x};
    if (owner[fx] != kNoNode) return MapViolation{MapDefect::kNotInjective, owner[fx], x};
    owner[fx] = x;
  }
  for (const auto& e : g.edges()) {
    auto w = g_prime.weight(phi(e.u), phi(e.v));
    if (!w) return MapViolation{MapDefect::kEdgeNotPreserved, e.u, e.v, e.weight};
    if (*w > e.weight)
      return MapViolation{MapDefect::kWeightIncreased, e.u, e.v, e.weight, *w};
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Projections
// ---------------------------------------------------------------------------

/// Candidate projection: any map from a network to a distance table on the
/// same node set. The output need not be metric.
using ProjectionFn = std::function<DistanceMatrix(const Network&)>;

struct NamedProjection {
  std::string name;
  ProjectionFn fn;
};

/// Every pair of distinct nodes at distance one.
inline FiniteMetricSpace discrete_projection(const Network& g) {
  return FiniteMetricSpace::trusted(DistanceMatrix(g.size(), 1.0));
}

inline ProjectionFn canonical() {
  return [](const Network& g) { return canonical_projection(g).matrix(); };
}

inline ProjectionFn discrete() {
  return [](const Network& g) { return discrete_projection(g).matrix(); };
}

inline ProjectionFn scaled_canonical(double c) {
  return [c](const Network& g) {
    DistanceMatrix d = canonical_projection(g).matrix();
    for (std::size_t i = 0; i < d.size(); ++i)
      for (std::size_t j = 0; j < d.size(); ++j) d.at(i, j) *= c;
    return d;
  };
}

inline ProjectionFn capped_canonical(double cap) {
  return [cap](const Network& g) {
    DistanceMatrix d = canonical_projection(g).matrix();
    for (std::size_t i = 0; i < d.size(); ++i)
      for (std::size_t j = 0; j < d.size(); ++j) d.at(i, j) = std::min(d(i, j), cap);
    return d;
  };
}

/// Edge weights where an edge exists, `missing` elsewhere, with no repair of
/// triangle violations.
inline ProjectionFn raw_edge_projection(double missing) {
  return [missing](const Network& g) {
    DistanceMatrix d(g.size(), missing);
    for (const auto& e : g.edges()) d.set(e.u, e.v, e.weight);
    return d;
  };
}

inline constexpr double kZooCap = 5.0;

/// Canonical projection first, then the alternatives it is tested against.
inline std::vector<NamedProjection> projection_zoo() {
  return {
      {"canonical", canonical()},
      {"discrete", discrete()},
      {"scaled-0.5", scaled_canonical(0.5)},
      {"scaled-2", scaled_canonical(2.0)},
      {"capped-5", capped_canonical(kZooCap)},
  };
}

// ---------------------------------------------------------------------------
// Axiom checkers
// ---------------------------------------------------------------------------

/// P(M) differs from M at (x, y).
struct ProjectionCounterExample {
  NodeId x, y;
  double expected;
  double got;
};

/// Fixed-point check: P applied to the complete network carried by M must
/// return M entrywise, within kTriangleRelTol * max(M).
inline std::optional<ProjectionCounterExample> check_axiom_projection(const ProjectionFn& p,
                                                                      const FiniteMetricSpace& m) {
  const DistanceMatrix out = p(complete_network(m.matrix()));
  if (out.size() != m.size())
    throw std::logic_error("projection changed the node count");
  const double eps = kTriangleRelTol * m.matrix().max_entry();
  for (NodeId x = 0; x < m.size(); ++x)
    for (NodeId y = 0; y < m.size(); ++y)
      if (std::abs(out(x, y) - m(x, y)) > eps) return ProjectionCounterExample{x, y, m(x, y), out(x, y)};
  return std::nullopt;
}

class PreconditionViolated : public std::invalid_argument {
 public:
  explicit PreconditionViolated(const MapViolation& v)
      : std::invalid_argument("map is not dissimilarity-reducing: " + v.describe()), violation(v) {}
  MapViolation violation;
};

/// d(x, x') < d'(phi x, phi x') beyond tolerance.
struct TransformationCounterExample {
  NodeId x, y;
  double source_dist;
  double target_dist;
};

/// Distances must not grow under a dissimilarity-reducing map. Throws
/// PreconditionViolated when phi is not one.
inline std::optional<TransformationCounterExample> check_axiom_transformation(
    const ProjectionFn& p, const Network& g, const Network& g_prime, const NodeMap& phi) {
  if (auto v = is_dissimilarity_reducing(g, g_prime, phi)) throw PreconditionViolated(*v);
  const DistanceMatrix d = p(g);
  const DistanceMatrix dp = p(g_prime);
  if (d.size() != g.size() || dp.size() != g_prime.size())
    throw std::logic_error("projection changed the node count");
  const double eps = kTriangleRelTol * std::max(d.max_entry(), dp.max_entry());
  for (NodeId x = 0; x < g.size(); ++x)
    for (NodeId y = 0; y < g.size(); ++y)
      if (d(x, y) < dp(phi(x), phi(y)) - eps)
        return TransformationCounterExample{x, y, d(x, y), dp(phi(x), phi(y))};
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Instance generation
// ---------------------------------------------------------------------------

struct TransformationInstance {
  Network source;
  Network target;
  NodeMap phi;
};

struct InstanceParams {
  std::size_t min_nodes = 3;
  std::size_t max_nodes = 32;
  std::size_t max_extra_target_nodes = 4;
  double edge_prob = 0.3;
  double max_weight = 10.0;
  int quantum = 0;
};

inline RandomGraphParams graph_params(const InstanceParams& p, std::size_t n) {
  return {n, p.edge_prob, p.max_weight, p.quantum};
}

/// A random connected network with n drawn from [min_nodes, max_nodes].
inline Network random_instance_network(Rng& rng, const InstanceParams& p) {
  const auto n = static_cast<std::size_t>(rng.uniform_int(p.min_nodes, p.max_nodes));
  return random_connected_network(rng, graph_params(p, n));
}

/// (G, G', phi) with phi dissimilarity-reducing by construction: G' and an
/// injective phi are sampled, every image of a G-edge is added to G' if
/// missing, and each G-edge weight is lifted to at least its image's weight.
inline TransformationInstance random_transformation_instance(Rng& rng, const InstanceParams& p) {
  const auto n = static_cast<std::size_t>(rng.uniform_int(p.min_nodes, p.max_nodes));
  const auto n_prime = n + static_cast<std::size_t>(rng.uniform_int(0, p.max_extra_target_nodes));
  const RandomGraphParams gp = graph_params(p, n);
  auto source_edges = random_connected_edges(rng, gp);
  auto target_edges = random_connected_edges(rng, graph_params(p, n_prime));

  std::vector<NodeId> perm(n_prime);
  std::iota(perm.begin(), perm.end(), NodeId{0});
  rng.shuffle(perm);
  NodeMap phi{std::vector<NodeId>(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n))};

  DistanceMatrix target_w(n_prime, 0.0);
  for (const auto& e : target_edges) target_w.set(e.u, e.v, e.weight);
  for (auto& e : source_edges) {
    const NodeId a = phi(static_cast<NodeId>(e.u));
    const NodeId b = phi(static_cast<NodeId>(e.v));
    if (target_w(a, b) == 0.0) {
      const double w = sample_weight(rng, gp);
      target_w.set(a, b, w);
      target_edges.push_back({a, b, w});
    }
    e.weight = std::max(e.weight, target_w(a, b));
  }
  return {validate_network(source_edges, n), validate_network(target_edges, n_prime), std::move(phi)};
}

// ---------------------------------------------------------------------------
// Suite runner
// ---------------------------------------------------------------------------

struct AxiomSuiteReport {
  std::string name;
  std::size_t instances = 0;
  std::size_t projection_failures = 0;
  std::size_t transformation_failures = 0;
  std::size_t metric_failures = 0;  // outputs that are not metric spaces
  std::optional<FiniteMetricSpace> projection_witness;
  std::optional<ProjectionCounterExample> projection_detail;
  std::optional<TransformationInstance> transformation_witness;
  std::optional<TransformationCounterExample> transformation_detail;

  bool admissible() const { return projection_failures == 0 && transformation_failures == 0; }
};

/// Runs both axioms on `instances` generated inputs each. Instance i uses
/// streams derived from (seed, i), so every projection sees the same inputs.
inline AxiomSuiteReport run_axiom_suite(const NamedProjection& p, std::uint64_t seed,
                                        std::size_t instances, const InstanceParams& params = {}) {
  AxiomSuiteReport r;
  r.name = p.name;
  r.instances = instances;
  const Rng root(seed);
  for (std::size_t i = 0; i < instances; ++i) {
    Rng metric_rng = root.split(2 * i);
    Rng transform_rng = root.split(2 * i + 1);

    auto m = canonical_projection(random_instance_network(metric_rng, params));
    if (auto cx = check_axiom_projection(p.fn, m)) {
      if (r.projection_failures++ == 0) {
        r.projection_witness = m;
        r.projection_detail = *cx;
      }
    }

    auto inst = random_transformation_instance(transform_rng, params);
    if (auto cx = check_axiom_transformation(p.fn, inst.source, inst.target, inst.phi)) {
      if (r.transformation_failures++ == 0) {
        r.transformation_witness = inst;
        r.transformation_detail = *cx;
      }
    }
    if (is_metric(p.fn(inst.source))) ++r.metric_failures;
  }
  return r;
}

}  // namespace metricnet

#endif  // METRICNET_PROJECTION_HPP
