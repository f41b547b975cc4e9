// Core network and metric-space types.
//
// A Network is a finite, undirected, connected graph with strictly positive
// edge weights. A DistanceMatrix is a dense symmetric n x n candidate distance
// table; a FiniteMetricSpace is a DistanceMatrix known to satisfy the metric
// axioms (either checked on construction or produced by a routine that
// guarantees it).

#ifndef METRICNET_GRAPH_HPP
#define METRICNET_GRAPH_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace metricnet {

using NodeId = std::uint32_t;

/// Relative triangle-inequality tolerance; the absolute slack is this times
/// the largest entry of the matrix under test.
inline constexpr double kTriangleRelTol = 1e-9;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class NetworkError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SelfLoopError : public NetworkError {
 public:
  explicit SelfLoopError(NodeId x)
      : NetworkError("self-loop at node " + std::to_string(x)), node(x) {}
  NodeId node;
};

class NonPositiveWeightError : public NetworkError {
 public:
  NonPositiveWeightError(NodeId x, NodeId y, double w)
      : NetworkError("non-positive weight " + std::to_string(w) + " on edge (" +
                     std::to_string(x) + ", " + std::to_string(y) + ")"),
        u(x), v(y), weight(w) {}
  NodeId u, v;
  double weight;
};

class AsymmetricWeightError : public NetworkError {
 public:
  AsymmetricWeightError(NodeId x, NodeId y, double w1, double w2)
      : NetworkError("conflicting weights " + std::to_string(w1) + " and " +
                     std::to_string(w2) + " for edge (" + std::to_string(x) +
                     ", " + std::to_string(y) + ")"),
        u(x), v(y), first(w1), second(w2) {}
  NodeId u, v;
  double first, second;
};

class DisconnectedError : public NetworkError {
 public:
  explicit DisconnectedError(std::vector<std::size_t> sizes)
      : NetworkError(describe(sizes)), component_sizes(std::move(sizes)) {}
  std::vector<std::size_t> component_sizes;

 private:
  static std::string describe(const std::vector<std::size_t>& sizes) {
    std::string s = "network is disconnected; component sizes [";
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(sizes[i]);
    }
    return s + "]";
  }
};

class NodeOutOfRangeError : public NetworkError {
 public:
  NodeOutOfRangeError(std::int64_t x, std::size_t n)
      : NetworkError("node " + std::to_string(x) + " out of range for n=" +
                     std::to_string(n)),
        node(x) {}
  std::int64_t node;
};

class InvalidPathError : public std::invalid_argument {
 public:
  explicit InvalidPathError(std::size_t i)
      : std::invalid_argument("path step " + std::to_string(i) +
                              " is not an edge"),
        step(i) {}
  std::size_t step;
};

class EndpointMismatchError : public std::invalid_argument {
 public:
  EndpointMismatchError()
      : std::invalid_argument("concatenated paths do not share an endpoint") {}
};

class NotMetricError : public std::invalid_argument {
 public:
  explicit NotMetricError(const std::string& what)
      : std::invalid_argument("not a metric: " + what) {}
};

// ---------------------------------------------------------------------------
// Network
// ---------------------------------------------------------------------------

struct WeightedEdge {
  std::int64_t u;
  std::int64_t v;
  double weight;
};

struct Neighbor {
  NodeId node;
  double weight;
};

class Network {
 public:
  struct Edge {
    NodeId u;  // u < v
    NodeId v;
    double weight;
    friend bool operator==(const Edge&, const Edge&) = default;
  };

  std::size_t size() const { return adjacency_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  /// Edges with u < v, sorted lexicographically.
  std::span<const Edge> edges() const { return edges_; }

  /// Neighbors of x, sorted by id.
  std::span<const Neighbor> neighbors(NodeId x) const { return adjacency_[x]; }

  std::optional<double> weight(NodeId x, NodeId y) const {
    if (x >= size() || y >= size()) return std::nullopt;
    const auto& adj = adjacency_[x];
    auto it = std::lower_bound(
        adj.begin(), adj.end(), y,
        [](const Neighbor& nb, NodeId id) { return nb.node < id; });
    if (it == adj.end() || it->node != y) return std::nullopt;
    return it->weight;
  }

  bool has_edge(NodeId x, NodeId y) const { return weight(x, y).has_value(); }

  bool is_complete() const {
    const std::size_t n = size();
    return edges_.size() == n * (n - 1) / 2;
  }

  friend bool operator==(const Network& a, const Network& b) {
    return a.size() == b.size() && a.edges_ == b.edges_;
  }

 private:
  friend Network validate_network(std::span<const WeightedEdge>, std::size_t);
  std::vector<Edge> edges_;
  std::vector<std::vector<Neighbor>> adjacency_;
};

/// Builds a Network from raw (u, v, w) triples over n nodes. Symmetric
/// duplicates with equal weight are merged; everything else that breaks the
/// network invariants throws.
inline Network validate_network(std::span<const WeightedEdge> raw,
                                std::size_t n) {
  std::vector<Network::Edge> edges;
  edges.reserve(raw.size());
  for (const auto& e : raw) {
    if (e.u < 0 || static_cast<std::size_t>(e.u) >= n)
      throw NodeOutOfRangeError(e.u, n);
    if (e.v < 0 || static_cast<std::size_t>(e.v) >= n)
      throw NodeOutOfRangeError(e.v, n);
    if (e.u == e.v) throw SelfLoopError(static_cast<NodeId>(e.u));
    if (!(e.weight > 0.0) || !std::isfinite(e.weight))
      throw NonPositiveWeightError(static_cast<NodeId>(e.u),
                                   static_cast<NodeId>(e.v), e.weight);
    auto a = static_cast<NodeId>(std::min(e.u, e.v));
    auto b = static_cast<NodeId>(std::max(e.u, e.v));
    edges.push_back({a, b, e.weight});
  }
  std::stable_sort(edges.begin(), edges.end(), [](const auto& p, const auto& q) {
    return std::pair(p.u, p.v) < std::pair(q.u, q.v);
  });
  std::vector<Network::Edge> merged;
  merged.reserve(edges.size());
  for (const auto& e : edges) {
    if (!merged.empty() && merged.back().u == e.u && merged.back().v == e.v) {
      if (merged.back().weight != e.weight)
        throw AsymmetricWeightError(e.u, e.v, merged.back().weight, e.weight);
      continue;
    }
    merged.push_back(e);
  }

  Network g;
  g.adjacency_.assign(n, {});
  for (const auto& e : merged) {
    g.adjacency_[e.u].push_back({e.v, e.weight});
    g.adjacency_[e.v].push_back({e.u, e.weight});
  }
  for (auto& adj : g.adjacency_)
    std::sort(adj.begin(), adj.end(),
              [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
  g.edges_ = std::move(merged);

  // Connectivity: component sizes in order of their smallest node.
  std::vector<std::size_t> sizes;
  std::vector<char> seen(n, 0);
  std::vector<NodeId> stack;
  for (NodeId s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::size_t count = 0;
    seen[s] = 1;
    stack.push_back(s);
    while (!stack.empty()) {
      NodeId x = stack.back();
      stack.pop_back();
      ++count;
      for (const auto& nb : g.adjacency_[x])
        if (!seen[nb.node]) {
          seen[nb.node] = 1;
          stack.push_back(nb.node);
        }
    }
    sizes.push_back(count);
  }
  if (sizes.size() > 1) throw DisconnectedError(std::move(sizes));
  return g;
}

inline Network validate_network(std::initializer_list<WeightedEdge> raw,
                                std::size_t n) {
  return validate_network(std::span<const WeightedEdge>(raw.begin(), raw.size()), n);
}

// ---------------------------------------------------------------------------
// Dense distance tables
// ---------------------------------------------------------------------------

class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n, double fill = 0.0)
      : n_(n), data_(n * n, fill) {
    for (std::size_t i = 0; i < n; ++i) data_[i * n + i] = 0.0;
  }
  DistanceMatrix(std::size_t n, std::vector<double> row_major)
      : n_(n), data_(std::move(row_major)) {
    if (data_.size() != n * n)
      throw std::invalid_argument("distance matrix must have n*n entries");
  }

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  double& at(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }

  /// Sets both (i, j) and (j, i).
  void set(std::size_t i, std::size_t j, double d) {
    data_[i * n_ + j] = d;
    data_[j * n_ + i] = d;
  }

  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * n_, n_};
  }
  std::span<const double> values() const { return data_; }

  double max_entry() const {
    double m = 0.0;
    for (double d : data_) m = std::max(m, d);
    return m;
  }

  friend bool operator==(const DistanceMatrix&, const DistanceMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

enum class MetricProperty { kSquare, kSymmetry, kIdentity, kNonNegative, kTriangle };

inline const char* to_string(MetricProperty p) {
  switch (p) {
    case MetricProperty::kSquare: return "square";
    case MetricProperty::kSymmetry: return "symmetry";
    case MetricProperty::kIdentity: return "identity";
    case MetricProperty::kNonNegative: return "non-negativity";
    case MetricProperty::kTriangle: return "triangle";
  }
  return "?";
}

/// First witness of a broken metric property. For the triangle case the
/// violated inequality is d(x, y) <= d(x, z) + d(z, y).
struct MetricViolation {
  MetricProperty property;
  NodeId x = 0;
  NodeId y = 0;
  NodeId z = 0;

  std::string describe() const {
    std::string s = std::string(to_string(property)) + " violated at (" +
                    std::to_string(x) + ", " + std::to_string(y);
    if (property == MetricProperty::kTriangle) s += ", " + std::to_string(z);
    return s + ")";
  }
};

/// Checks the metric axioms. Symmetry and identity are exact; the triangle
/// inequality allows kTriangleRelTol * max(d) slack. Returns the first
/// violation in (x, y, z) lexicographic order, or nullopt.
inline std::optional<MetricViolation> is_metric(const DistanceMatrix& d) {
  const std::size_t n = d.size();
  for (NodeId x = 0; x < n; ++x)
    for (NodeId y = 0; y < n; ++y) {
      double v = d(x, y);
      if (std::isnan(v) || v < 0.0)
        return MetricViolation{MetricProperty::kNonNegative, x, y};
      if (v != d(y, x)) return MetricViolation{MetricProperty::kSymmetry, x, y};
      if ((x == y) != (v == 0.0))
        return MetricViolation{MetricProperty::kIdentity, x, y};
    }
  const double eps = kTriangleRelTol * d.max_entry();
  for (NodeId x = 0; x < n; ++x)
    for (NodeId y = 0; y < n; ++y) {
      if (x == y) continue;
      const double dxy = d(x, y);
      for (NodeId z = 0; z < n; ++z)
        if (dxy > d(x, z) + d(z, y) + eps)
          return MetricViolation{MetricProperty::kTriangle, x, y, z};
    }
  return std::nullopt;
}

/// Overload for a raw row-major candidate of n x n entries.
inline std::optional<MetricViolation> is_metric(std::span<const double> values,
                                                std::size_t n) {
  if (values.size() != n * n) return MetricViolation{MetricProperty::kSquare};
  return is_metric(DistanceMatrix(n, std::vector<double>(values.begin(), values.end())));
}

class FiniteMetricSpace {
 public:
  FiniteMetricSpace() = default;

  /// Throws NotMetricError when the matrix fails is_metric.
  static FiniteMetricSpace validated(DistanceMatrix d) {
    if (auto v = is_metric(d)) throw NotMetricError(v->describe());
    return FiniteMetricSpace(std::move(d));
  }

  /// For producers whose output is metric by construction.
  static FiniteMetricSpace trusted(DistanceMatrix d) {
    return FiniteMetricSpace(std::move(d));
  }

  std::size_t size() const { return d_.size(); }
  double operator()(std::size_t i, std::size_t j) const { return d_(i, j); }
  const DistanceMatrix& matrix() const { return d_; }

  friend bool operator==(const FiniteMetricSpace&, const FiniteMetricSpace&) = default;

 private:
  explicit FiniteMetricSpace(DistanceMatrix d) : d_(std::move(d)) {}
  DistanceMatrix d_;
};

/// The complete network (X, X x X, d) carried by a distance table. Zero
/// off-diagonal entries are rejected by validate_network.
inline Network complete_network(const DistanceMatrix& d) {
  std::vector<WeightedEdge> raw;
  const std::size_t n = d.size();
  raw.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      raw.push_back({static_cast<std::int64_t>(i), static_cast<std::int64_t>(j), d(i, j)});
  return validate_network(raw, n);
}

/// Dense view of a complete network. Throws if any pair is missing.
inline DistanceMatrix to_matrix(const Network& g) {
  if (!g.is_complete())
    throw std::invalid_argument("network is not complete");
  DistanceMatrix d(g.size());
  for (const auto& e : g.edges()) d.set(e.u, e.v, e.weight);
  return d;
}

// ---------------------------------------------------------------------------
// Paths
// ---------------------------------------------------------------------------

/// Ordered node sequence. A single node x stands for the trivial path [x, x].
class Path {
 public:
  Path() = default;
  Path(std::initializer_list<NodeId> nodes) : nodes_(nodes) { normalize(); }
  explicit Path(std::vector<NodeId> nodes) : nodes_(std::move(nodes)) { normalize(); }

  static Path trivial(NodeId x) { return Path({x}); }

  std::span<const NodeId> nodes() const { return nodes_; }
  bool empty() const { return nodes_.empty(); }
  NodeId front() const { return nodes_.front(); }
  NodeId back() const { return nodes_.back(); }
  /// Number of edges traversed.
  std::size_t hops() const { return nodes_.empty() ? 0 : nodes_.size() - 1; }

  friend bool operator==(const Path&, const Path&) = default;

 private:
  // [x, x] is stored as [x].
  void normalize() {
    if (nodes_.size() == 2 && nodes_[0] == nodes_[1]) nodes_.pop_back();
  }
  std::vector<NodeId> nodes_;
};

/// Sum of edge weights along the path, accumulated from the first node.
inline double path_length(const Network& g, const Path& p) {
  double total = 0.0;
  auto nodes = p.nodes();
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    auto w = g.weight(nodes[i], nodes[i + 1]);
    if (!w) throw InvalidPathError(i);
    total += *w;
  }
  return total;
}

/// p1 followed by p2, with the shared endpoint appearing once.
inline Path concatenate(const Path& p1, const Path& p2) {
  if (p1.empty() || p2.empty() || p1.back() != p2.front())
    throw EndpointMismatchError();
  std::vector<NodeId> out(p1.nodes().begin(), p1.nodes().end());
  out.insert(out.end(), p2.nodes().begin() + 1, p2.nodes().end());
  return Path(std::move(out));
}

}  // namespace metricnet

#endif  // METRICNET_GRAPH_HPP
