// Vantage-point tree over a node set with an arbitrary dissimilarity.
//
// Construction: pick a vantage point v uniformly at random from the block,
// take the lower median mu of the distances from v to the rest of the block,
// send {x : d(x, v) <= mu} left and the others right. The vantage point is
// stored at its tree node and is not part of either child block. A block of
// one node becomes a leaf; an empty block becomes an empty child.
//
// Search keeps the best distance tau (initially +inf), compares the query
// with each visited vantage point, and chooses children with the current tau:
//   d <= mu - tau        left only
//   mu - tau < d <= mu + tau   both
//   mu + tau < d         right only
// The child on the query's side of mu is visited first. Exact in metric
// spaces; the same rules are applied verbatim to non-metric inputs.

#ifndef METRICNET_VPTREE_HPP
#define METRICNET_VPTREE_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <functional>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

#include "metricnet/graph.hpp"
#include "metricnet/random.hpp"

namespace metricnet {

inline constexpr std::uint32_t kTreeFormatVersion = 1;

class EmptySetError : public std::invalid_argument {
 public:
  EmptySetError() : std::invalid_argument("node set is empty") {}
};

class NotInSubsetError : public std::invalid_argument {
 public:
  explicit NotInSubsetError(NodeId x)
      : std::invalid_argument("node " + std::to_string(x) + " is not in the indexed set") {}
};

struct VpNode {
  enum class Kind : std::uint8_t { kEmpty = 0, kLeaf = 1, kInternal = 2 };
  Kind kind = Kind::kEmpty;
  NodeId vantage = 0;
  double median = 0.0;
  std::int32_t left = -1;   // indices into VpTree::nodes(); internal only
  std::int32_t right = -1;

  friend bool operator==(const VpNode&, const VpNode&) = default;
};

class VpTree {
 public:
  VpTree() = default;

  /// Nodes in preorder; the root is at index 0.
  std::span<const VpNode> nodes() const { return nodes_; }
  const VpNode& root() const { return nodes_.front(); }
  std::size_t indexed_count() const { return indexed_; }
  bool empty() const { return nodes_.empty(); }

  /// Number of levels holding a vantage point or leaf.
  std::size_t depth() const { return nodes_.empty() ? 0 : depth_from(0); }

  /// Vantage points and leaves under `index`, in-order (left, self, right).
  std::vector<NodeId> members(std::int32_t index = 0) const {
    std::vector<NodeId> out;
    if (!nodes_.empty()) collect(index, out);
    return out;
  }

  friend bool operator==(const VpTree&, const VpTree&) = default;

 private:
  template <typename Distance>
  friend VpTree build_vp_tree(const Distance&, std::span<const NodeId>, std::uint64_t);
  friend VpTree read_vp_tree(std::istream&);

  std::size_t depth_from(std::int32_t i) const {
    const auto& n = nodes_[static_cast<std::size_t>(i)];
    switch (n.kind) {
      case VpNode::Kind::kEmpty: return 0;
      case VpNode::Kind::kLeaf: return 1;
      case VpNode::Kind::kInternal: return 1 + std::max(depth_from(n.left), depth_from(n.right));
    }
    return 0;
  }

  void collect(std::int32_t i, std::vector<NodeId>& out) const {
    const auto& n = nodes_[static_cast<std::size_t>(i)];
    if (n.kind == VpNode::Kind::kEmpty) return;
    if (n.kind == VpNode::Kind::kLeaf) {
      out.push_back(n.vantage);
      return;
    }
    collect(n.left, out);
    out.push_back(n.vantage);
    collect(n.right, out);
  }

  std::vector<VpNode> nodes_;
  std::size_t indexed_ = 0;
};

namespace detail {

template <typename Distance>
class VpBuilder {
 public:
  VpBuilder(const Distance& dist, std::uint64_t seed, std::vector<VpNode>& out)
      : dist_(dist), root_(seed), out_(out) {}

  std::int32_t build(std::vector<NodeId> block) {
    const auto index = static_cast<std::int32_t>(out_.size());
    out_.emplace_back();
    if (block.empty()) return index;
    if (block.size() == 1) {
      out_[index] = {VpNode::Kind::kLeaf, block.front()};
      return index;
    }

    Rng rng = root_.split(static_cast<std::uint64_t>(index));
    const auto pick = rng.uniform_int(0, block.size() - 1);
    const NodeId vantage = block[pick];
    block.erase(block.begin() + static_cast<std::ptrdiff_t>(pick));

    std::vector<double> dists(block.size());
    for (std::size_t i = 0; i < block.size(); ++i) dists[i] = dist_(vantage, block[i]);
    std::vector<double> sorted = dists;
    const std::size_t mid = (sorted.size() - 1) / 2;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(mid), sorted.end());
    const double median = sorted[mid];

    std::vector<NodeId> inside, outside;
    for (std::size_t i = 0; i < block.size(); ++i)
      (dists[i] <= median ? inside : outside).push_back(block[i]);
    block.clear();
    block.shrink_to_fit();

    out_[index] = {VpNode::Kind::kInternal, vantage, median};
    const auto left = build(std::move(inside));
    const auto right = build(std::move(outside));
    out_[index].left = left;
    out_[index].right = right;
    return index;
  }

 private:
  const Distance& dist_;
  Rng root_;
  std::vector<VpNode>& out_;
};

}  // namespace detail

/// Builds a tree over `subset`. `dist(a, b)` gives the dissimilarity between
/// two indexed nodes (DistanceMatrix and FiniteMetricSpace both qualify).
/// Deterministic in (dist, subset order, seed).
template <typename Distance>
VpTree build_vp_tree(const Distance& dist, std::span<const NodeId> subset, std::uint64_t seed) {
  if (subset.empty()) throw EmptySetError();
  VpTree t;
  t.indexed_ = subset.size();
  t.nodes_.reserve(2 * subset.size());
  detail::VpBuilder<Distance> builder(dist, seed, t.nodes_);
  builder.build(std::vector<NodeId>(subset.begin(), subset.end()));
  return t;
}

inline std::vector<NodeId> all_nodes(std::size_t n) {
  std::vector<NodeId> v(n);
  std::iota(v.begin(), v.end(), NodeId{0});
  return v;
}

// ---------------------------------------------------------------------------
// Queries
// ---------------------------------------------------------------------------

/// Dissimilarity from a fixed query to any indexed node, with a call count.
class QueryOracle {
 public:
  explicit QueryOracle(std::function<double(NodeId)> fn) : fn_(std::move(fn)) {}

  double operator()(NodeId x) {
    ++calls_;
    return fn_(x);
  }
  std::size_t calls() const { return calls_; }
  void reset() { calls_ = 0; }

 private:
  std::function<double(NodeId)> fn_;
  std::size_t calls_ = 0;
};

/// Oracle for a query that is itself a node of the indexed table.
template <typename Distance>
QueryOracle node_query(const Distance& dist, NodeId q) {
  return QueryOracle([&dist, q](NodeId x) { return dist(q, x); });
}

struct SearchResult {
  NodeId best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  std::size_t comparisons = 0;
};

/// Tree nodes whose subtrees were pruned during a search.
struct SearchTrace {
  std::vector<std::int32_t> skipped;
};

namespace detail {

class VpSearch {
 public:
  VpSearch(const VpTree& t, QueryOracle& oracle, SearchTrace* trace)
      : nodes_(t.nodes()), oracle_(oracle), trace_(trace) {}

  void visit(std::int32_t i) {
    const VpNode& n = nodes_[static_cast<std::size_t>(i)];
    if (n.kind == VpNode::Kind::kEmpty) return;
    const double d = oracle_(n.vantage);
    if (d < tau_) {
      tau_ = d;
      best_ = n.vantage;
    }
    if (n.kind == VpNode::Kind::kLeaf) return;
    if (d <= n.median) {
      maybe_left(n, d);
      maybe_right(n, d);
    } else {
      maybe_right(n, d);
      maybe_left(n, d);
    }
  }

  SearchResult result() const { return {best_, tau_, oracle_.calls()}; }

 private:
  // Left is excluded only when d > mu + tau.
  void maybe_left(const VpNode& n, double d) {
    if (d > n.median + tau_) skip(n.left);
    else visit(n.left);
  }
  // Right is excluded only when d <= mu - tau.
  void maybe_right(const VpNode& n, double d) {
    if (d <= n.median - tau_) skip(n.right);
    else visit(n.right);
  }
  void skip(std::int32_t i) {
    if (trace_ && nodes_[static_cast<std::size_t>(i)].kind != VpNode::Kind::kEmpty)
      trace_->skipped.push_back(i);
  }

  std::span<const VpNode> nodes_;
  QueryOracle& oracle_;
  SearchTrace* trace_;
  double tau_ = std::numeric_limits<double>::infinity();
  NodeId best_ = 0;
};

}  // namespace detail

/// Nearest-neighbor search. `comparisons` counts oracle calls made by this
/// search only.
inline SearchResult nn_search(const VpTree& t, QueryOracle& oracle, SearchTrace* trace = nullptr) {
  if (t.empty()) throw EmptySetError();
  const std::size_t before = oracle.calls();
  detail::VpSearch search(t, oracle, trace);
  search.visit(0);
  SearchResult r = search.result();
  r.comparisons -= before;
  return r;
}

/// Linear scan; ties go to the smaller id.
inline SearchResult exhaustive_nn(std::span<const NodeId> subset, QueryOracle& oracle) {
  if (subset.empty()) throw EmptySetError();
  const std::size_t before = oracle.calls();
  SearchResult r;
  bool first = true;
  for (NodeId x : subset) {
    const double d = oracle(x);
    if (first || d < r.best_dist || (d == r.best_dist && x < r.best)) {
      r.best = x;
      r.best_dist = d;
      first = false;
    }
  }
  r.comparisons = oracle.calls() - before;
  return r;
}

/// Fraction of the subset strictly closer to the query than `found`.
inline double rank_of(std::span<const NodeId> subset, QueryOracle& oracle, NodeId found) {
  if (std::find(subset.begin(), subset.end(), found) == subset.end()) throw NotInSubsetError(found);
  const double ref = oracle(found);
  std::size_t closer = 0;
  for (NodeId x : subset)
    if (oracle(x) < ref) ++closer;
  return static_cast<double>(closer) / static_cast<double>(subset.size());
}

/// Same, from precomputed dissimilarities to every node 0..n-1.
inline double rank_of(std::span<const double> dissimilarity, NodeId found) {
  if (found >= dissimilarity.size()) throw NotInSubsetError(found);
  const double ref = dissimilarity[found];
  std::size_t closer = 0;
  for (double d : dissimilarity)
    if (d < ref) ++closer;
  return static_cast<double>(closer) / static_cast<double>(dissimilarity.size());
}

// ---------------------------------------------------------------------------
// Binary serialization
//
//   "MNVPTREE"  8 bytes magic
//   u32         format version
//   u64         indexed node count
//   u64         tree node count
//   preorder records:
//     u8 tag (0 empty, 1 leaf, 2 internal)
//     leaf:     u32 vantage
//     internal: u32 vantage, f64 median, left subtree, right subtree
// All integers and doubles little-endian.
// ---------------------------------------------------------------------------

class TreeFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline constexpr char kTreeMagic[8] = {'M', 'N', 'V', 'P', 'T', 'R', 'E', 'E'};

template <typename T>
void put_le(std::ostream& out, T v) {
  static_assert(std::is_unsigned_v<T>);
  for (std::size_t i = 0; i < sizeof(T); ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xff));
}

template <typename T>
T get_le(std::istream& in) {
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    const int c = in.get();
    if (c == std::char_traits<char>::eof()) throw TreeFormatError("truncated tree file");
    v |= static_cast<T>(static_cast<std::uint8_t>(c)) << (8 * i);
  }
  return v;
}

}  // namespace detail

inline void write_vp_tree(std::ostream& out, const VpTree& t) {
  out.write(detail::kTreeMagic, sizeof detail::kTreeMagic);
  detail::put_le<std::uint32_t>(out, kTreeFormatVersion);
  detail::put_le<std::uint64_t>(out, t.indexed_count());
  detail::put_le<std::uint64_t>(out, t.nodes().size());
  // Nodes are stored in preorder already.
  for (const auto& n : t.nodes()) {
    out.put(static_cast<char>(n.kind));
    if (n.kind == VpNode::Kind::kEmpty) continue;
    detail::put_le<std::uint32_t>(out, n.vantage);
    if (n.kind == VpNode::Kind::kInternal)
      detail::put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(n.median));
  }
}

inline VpTree read_vp_tree(std::istream& in) {
  char magic[8];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, detail::kTreeMagic, sizeof magic) != 0)
    throw TreeFormatError("not a vp-tree file");
  const auto version = detail::get_le<std::uint32_t>(in);
  if (version != kTreeFormatVersion)
    throw TreeFormatError("unsupported tree format version " + std::to_string(version));
  VpTree t;
  t.indexed_ = detail::get_le<std::uint64_t>(in);
  const auto count = detail::get_le<std::uint64_t>(in);
  if (count > (std::uint64_t{1} << 31)) throw TreeFormatError("tree too large");
  t.nodes_.resize(count);

  // Rebuild child links from the preorder layout.
  std::size_t next = 0;
  std::function<std::int32_t()> parse = [&]() -> std::int32_t {
    if (next >= count) throw TreeFormatError("tree node count mismatch");
    const auto index = static_cast<std::int32_t>(next++);
    VpNode node;
    const int tag = in.get();
    if (tag == std::char_traits<char>::eof()) throw TreeFormatError("truncated tree file");
    if (tag > 2) throw TreeFormatError("bad node tag");
    node.kind = static_cast<VpNode::Kind>(tag);
    if (node.kind != VpNode::Kind::kEmpty) node.vantage = detail::get_le<std::uint32_t>(in);
    if (node.kind == VpNode::Kind::kInternal) {
      node.median = std::bit_cast<double>(detail::get_le<std::uint64_t>(in));
      node.left = parse();
      node.right = parse();
    }
    t.nodes_[static_cast<std::size_t>(index)] = node;
    return index;
  };
  if (count > 0) parse();
  if (next != count) throw TreeFormatError("tree node count mismatch");
  return t;
}

}  // namespace metricnet

#endif  // METRICNET_VPTREE_HPP
