// Monotone cost functions and metric lower bounds.
//
// For a cost f that never decreases when an edge weight grows, f evaluated on
// the shortest-path metric of G is a lower bound on f(G), and no other metric
// that stays below W on the edges gives a larger one.

#ifndef METRICNET_OPTIM_HPP
#define METRICNET_OPTIM_HPP

#include <algorithm>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "metricnet/graph.hpp"
#include "metricnet/projection.hpp"

namespace metricnet {

class TooLargeError : public std::invalid_argument {
 public:
  TooLargeError(std::size_t n, std::size_t max_n)
      : std::invalid_argument("n=" + std::to_string(n) + " exceeds exact limit " + std::to_string(max_n)) {}
};

class NotMonotoneError : public std::invalid_argument {
 public:
  explicit NotMonotoneError(const std::string& name)
      : std::invalid_argument("cost function '" + name + "' is not declared monotone") {}
};

inline constexpr std::size_t kExactTspMaxNodes = 11;

// ---------------------------------------------------------------------------
// Spanning trees
// ---------------------------------------------------------------------------

/// Prim's algorithm on a complete table; parent[root] = kNoNode. Ties go to
/// the smaller id.
inline std::vector<NodeId> mst_parents(const DistanceMatrix& d, NodeId root = 0) {
  const std::size_t n = d.size();
  std::vector<NodeId> parent(n, kNoNode);
  if (n == 0) return parent;
  std::vector<double> key(n, kInfinity);
  std::vector<char> in_tree(n, 0);
  key[root] = 0.0;
  for (std::size_t round = 0; round < n; ++round) {
    NodeId u = kNoNode;
    for (NodeId x = 0; x < n; ++x)
      if (!in_tree[x] && (u == kNoNode || key[x] < key[u])) u = x;
    in_tree[u] = 1;
    for (NodeId v = 0; v < n; ++v)
      if (!in_tree[v] && d(u, v) < key[v]) {
        key[v] = d(u, v);
        parent[v] = u;
      }
  }
  return parent;
}

/// Total weight of a minimum spanning tree of the complete structure.
inline double mst_cost(const DistanceMatrix& d) {
  const auto parent = mst_parents(d);
  double total = 0.0;
  for (NodeId v = 0; v < d.size(); ++v)
    if (parent[v] != kNoNode) total += d(parent[v], v);
  return total;
}

inline double mst_cost(const FiniteMetricSpace& m) { return mst_cost(m.matrix()); }

/// MST over the edges actually present in g (Kruskal).
inline double mst_cost(const Network& g) {
  std::vector<Network::Edge> edges(g.edges().begin(), g.edges().end());
  std::stable_sort(edges.begin(), edges.end(),
                   [](const auto& a, const auto& b) { return a.weight < b.weight; });
  std::vector<NodeId> parent(g.size());
  std::iota(parent.begin(), parent.end(), NodeId{0});
  auto find = [&](NodeId x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  double total = 0.0;
  for (const auto& e : edges) {
    const NodeId a = find(e.u), b = find(e.v);
    if (a == b) continue;
    parent[a] = b;
    total += e.weight;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Traveling salesman
// ---------------------------------------------------------------------------

/// Minimum Hamiltonian cycle cost by Held-Karp over subsets containing node 0.
/// n = 1 costs 0; n = 2 is the round trip 0 -> 1 -> 0.
inline double tsp_cost_exact(const DistanceMatrix& d, std::size_t max_n = kExactTspMaxNodes) {
  const std::size_t n = d.size();
  if (n > max_n) throw TooLargeError(n, max_n);
  if (n <= 1) return 0.0;
  // best[mask][j]: shortest path from 0 through the nodes of mask (over nodes
  // 1..n-1) ending at node j+1, where j+1 is in mask.
  const std::size_t m = n - 1;
  const std::size_t full = (std::size_t{1} << m);
  std::vector<double> best(full * m, kInfinity);
  for (std::size_t j = 0; j < m; ++j) best[(std::size_t{1} << j) * m + j] = d(0, j + 1);
  for (std::size_t mask = 1; mask < full; ++mask)
    for (std::size_t j = 0; j < m; ++j) {
      if (!(mask & (std::size_t{1} << j))) continue;
      const double cur = best[mask * m + j];
      if (cur == kInfinity) continue;
      for (std::size_t k = 0; k < m; ++k) {
        if (mask & (std::size_t{1} << k)) continue;
        const std::size_t next = mask | (std::size_t{1} << k);
        best[next * m + k] = std::min(best[next * m + k], cur + d(j + 1, k + 1));
      }
    }
  double answer = kInfinity;
  for (std::size_t j = 0; j < m; ++j) answer = std::min(answer, best[(full - 1) * m + j] + d(j + 1, 0));
  return answer;
}

inline double tsp_cost_exact(const FiniteMetricSpace& m, std::size_t max_n = kExactTspMaxNodes) {
  return tsp_cost_exact(m.matrix(), max_n);
}

struct Tour {
  std::vector<NodeId> order;  // each node once; the cycle closes back to order[0]
  double cost = 0.0;
};

inline double tour_cost(const DistanceMatrix& d, std::span<const NodeId> order) {
  double total = 0.0;
  for (std::size_t i = 0; i < order.size(); ++i) total += d(order[i], order[(i + 1) % order.size()]);
  return order.size() < 2 ? 0.0 : total;
}

/// MST doubling with shortcuts: preorder walk of a minimum spanning tree
/// rooted at node 0, children in increasing id. At most twice the optimum on
/// metric input; throws NotMetricError otherwise.
inline Tour tsp_metric_approx(const FiniteMetricSpace& m) {
  const DistanceMatrix& d = m.matrix();
  if (auto v = is_metric(d)) throw NotMetricError(v->describe());
  const std::size_t n = d.size();
  Tour tour;
  if (n == 0) return tour;
  const auto parent = mst_parents(d);
  std::vector<std::vector<NodeId>> children(n);
  for (NodeId v = 0; v < n; ++v)
    if (parent[v] != kNoNode) children[parent[v]].push_back(v);
  std::vector<NodeId> stack{0};
  while (!stack.empty()) {
    const NodeId u = stack.back();
    stack.pop_back();
    tour.order.push_back(u);
    for (auto it = children[u].rbegin(); it != children[u].rend(); ++it) stack.push_back(*it);
  }
  tour.cost = tour_cost(d, tour.order);
  return tour;
}

// ---------------------------------------------------------------------------
// Cost functions and lower bounds
// ---------------------------------------------------------------------------

struct CostFunction {
  std::string name;
  std::function<double(const DistanceMatrix&)> evaluate;
  bool monotone = false;
};

inline CostFunction mst_cost_function() {
  return {"mst", [](const DistanceMatrix& d) { return mst_cost(d); }, true};
}

inline CostFunction tsp_exact_cost_function(std::size_t max_n = kExactTspMaxNodes) {
  return {"tsp-exact", [max_n](const DistanceMatrix& d) { return tsp_cost_exact(d, max_n); }, true};
}

struct LowerBound {
  double bound;
  FiniteMetricSpace metric;
};

/// f on the canonical projection of g.
inline LowerBound lower_bound(const Network& g, const CostFunction& f) {
  if (!f.monotone) throw NotMonotoneError(f.name);
  auto metric = canonical_projection(g);
  const double bound = f.evaluate(metric.matrix());
  return {bound, std::move(metric)};
}

/// f on g itself, which must be complete.
inline double evaluate_on_network(const Network& g, const CostFunction& f) {
  return f.evaluate(to_matrix(g));
}

/// The complete closure of g: its own weights on edges, shortest-path
/// distances on missing pairs.
inline DistanceMatrix complete_closure(const Network& g) {
  DistanceMatrix d = canonical_projection(g).matrix();
  for (const auto& e : g.edges()) d.set(e.u, e.v, e.weight);
  return d;
}

// ---------------------------------------------------------------------------
// Feasible metrics
// ---------------------------------------------------------------------------

/// Smallest edge weight of g; the discrete metric scaled by it stays below W.
inline double min_edge_weight(const Network& g) {
  double w = kInfinity;
  for (const auto& e : g.edges()) w = std::min(w, e.weight);
  return w;
}

struct FeasibleMetric {
  std::string label;
  DistanceMatrix distances;
};

/// Metrics d with d <= W on every edge of g, built from the canonical metric
/// d*: c * d* for each c in `scales`, the discrete metric scaled to the
/// smallest edge weight, and lambda * c * d* + (1 - lambda) * w_min * discrete
/// for each lambda in `mixes`. Dyadic coefficients keep the arithmetic exact
/// on dyadic weights.
inline std::vector<FeasibleMetric> feasible_metric_family(const Network& g, const FiniteMetricSpace& canonical,
                                                          std::span<const double> scales,
                                                          std::span<const double> mixes) {
  const std::size_t n = g.size();
  const double w_min = n > 1 ? min_edge_weight(g) : 0.0;
  const DistanceMatrix& ds = canonical.matrix();
  std::vector<FeasibleMetric> out;
  auto combine = [&](double a, double b) {
    DistanceMatrix d(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) d.set(i, j, a * ds(i, j) + b * w_min);
    return d;
  };
  for (double c : scales) out.push_back({"scaled " + std::to_string(c), combine(c, 0.0)});
  out.push_back({"discrete x w_min", combine(0.0, 1.0)});
  for (double c : scales)
    for (double lambda : mixes)
      out.push_back({"mix c=" + std::to_string(c) + " lambda=" + std::to_string(lambda),
                     combine(lambda * c, 1.0 - lambda)});
  return out;
}

inline constexpr double kDefaultScales[] = {0.25, 0.5, 0.75, 1.0};
inline constexpr double kDefaultMixes[] = {0.125, 0.5, 0.875};

}  // namespace metricnet

#endif  // METRICNET_OPTIM_HPP
