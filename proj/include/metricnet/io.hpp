// Text formats.
//
// Edge list:
//   n
//   u v w        (one edge per line; '#' starts a comment; blank lines ok)
// Metric matrix:
//   n
//   n lines of n space-separated floats
// Label table (optional sidecar): one label per line, line i names node i.
//
// Writers emit the canonical encoding: edges with u < v in lexicographic
// order, floats in shortest round-trip form, LF line endings.

#ifndef METRICNET_IO_HPP
#define METRICNET_IO_HPP

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <unordered_map>
#include <vector>

#include "metricnet/graph.hpp"

namespace metricnet {

inline constexpr int kEdgeListFormatVersion = 1;
inline constexpr int kMatrixFormatVersion = 1;

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line_no, const std::string& why)
      : std::runtime_error("parse error at line " + std::to_string(line_no) +
                           ": " + why),
        line(line_no) {}
  std::size_t line;
};

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if constexpr (std::is_floating_point_v<T>) {
    if (!s.empty() && s.front() == '+') ++first;
  }
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

/// Reads non-comment, non-blank lines, tagging each with its 1-based number.
struct Line {
  std::size_t number;
  std::vector<std::string_view> fields;
};

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(Line& out) {
    while (std::getline(in_, buffer_)) {
      ++number_;
      std::string_view view(buffer_);
      if (auto hash = view.find('#'); hash != std::string_view::npos)
        view = view.substr(0, hash);
      auto fields = split_fields(view);
      if (fields.empty()) continue;
      out = {number_, std::move(fields)};
      return true;
    }
    return false;
  }
  std::size_t line_number() const { return number_; }

 private:
  std::istream& in_;
  std::string buffer_;
  std::size_t number_ = 0;
};

inline std::size_t read_header(LineReader& reader) {
  Line line;
  if (!reader.next(line)) throw ParseError(reader.line_number() + 1, "missing node count");
  std::size_t n = 0;
  if (line.fields.size() != 1 || !parse_number(line.fields[0], n))
    throw ParseError(line.number, "expected a single node count");
  return n;
}

inline std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return in;
}

inline std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

}  // namespace detail

/// Shortest decimal form that parses back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

/// Parses the edge-list format into raw triples without validating them.
inline std::pair<std::size_t, std::vector<WeightedEdge>> parse_edge_list(std::istream& in) {
  detail::LineReader reader(in);
  const std::size_t n = detail::read_header(reader);
  std::vector<WeightedEdge> raw;
  detail::Line line;
  while (reader.next(line)) {
    if (line.fields.size() != 3)
      throw ParseError(line.number, "expected 'u v w'");
    WeightedEdge e{};
    if (!detail::parse_number(line.fields[0], e.u) ||
        !detail::parse_number(line.fields[1], e.v))
      throw ParseError(line.number, "node ids must be integers");
    if (!detail::parse_number(line.fields[2], e.weight))
      throw ParseError(line.number, "weight must be a number");
    raw.push_back(e);
  }
  return {n, std::move(raw)};
}

inline Network read_edge_list(std::istream& in) {
  auto [n, raw] = parse_edge_list(in);
  return validate_network(raw, n);
}

inline Network read_edge_list(const std::filesystem::path& path) {
  auto in = detail::open_input(path);
  return read_edge_list(in);
}

inline void write_edge_list(std::ostream& out, const Network& g) {
  out << g.size() << '\n';
  for (const auto& e : g.edges())
    out << e.u << ' ' << e.v << ' ' << format_double(e.weight) << '\n';
}

inline void write_edge_list(const std::filesystem::path& path, const Network& g) {
  auto out = detail::open_output(path);
  write_edge_list(out, g);
}

/// Reads an n x n table without checking metric properties.
inline DistanceMatrix read_distance_matrix(std::istream& in) {
  detail::LineReader reader(in);
  const std::size_t n = detail::read_header(reader);
  std::vector<double> values;
  values.reserve(n * n);
  detail::Line line;
  std::size_t rows = 0;
  while (reader.next(line)) {
    if (rows == n) throw ParseError(line.number, "more than n rows");
    if (line.fields.size() != n)
      throw ParseError(line.number, "expected " + std::to_string(n) + " entries");
    for (auto f : line.fields) {
      double v = 0.0;
      if (!detail::parse_number(f, v)) throw ParseError(line.number, "bad number");
      values.push_back(v);
    }
    ++rows;
  }
  if (rows != n) throw ParseError(reader.line_number() + 1, "expected " + std::to_string(n) + " rows");
  return DistanceMatrix(n, std::move(values));
}

inline DistanceMatrix read_distance_matrix(const std::filesystem::path& path) {
  auto in = detail::open_input(path);
  return read_distance_matrix(in);
}

/// Reads a matrix and requires it to be metric.
inline FiniteMetricSpace read_metric_matrix(std::istream& in) {
  return FiniteMetricSpace::validated(read_distance_matrix(in));
}

inline FiniteMetricSpace read_metric_matrix(const std::filesystem::path& path) {
  auto in = detail::open_input(path);
  return read_metric_matrix(in);
}

inline void write_matrix(std::ostream& out, const DistanceMatrix& d) {
  const std::size_t n = d.size();
  out << n << '\n';
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j) out << ' ';
      out << format_double(d(i, j));
    }
    out << '\n';
  }
}

inline void write_metric_matrix(std::ostream& out, const FiniteMetricSpace& m) {
  write_matrix(out, m.matrix());
}

inline void write_metric_matrix(const std::filesystem::path& path, const FiniteMetricSpace& m) {
  auto out = detail::open_output(path);
  write_metric_matrix(out, m);
}

inline void write_matrix(const std::filesystem::path& path, const DistanceMatrix& d) {
  auto out = detail::open_output(path);
  write_matrix(out, d);
}

// ---------------------------------------------------------------------------
// Label sidecar
// ---------------------------------------------------------------------------

class LabelTable {
 public:
  LabelTable() = default;
  explicit LabelTable(std::vector<std::string> labels) : labels_(std::move(labels)) {
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (!index_.emplace(labels_[i], static_cast<NodeId>(i)).second)
        throw std::invalid_argument("duplicate label '" + labels_[i] + "'");
    }
  }

  std::size_t size() const { return labels_.size(); }
  const std::string& label(NodeId id) const { return labels_.at(id); }
  std::optional<NodeId> find(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> index_;
};

inline LabelTable read_label_table(std::istream& in) {
  std::vector<std::string> labels;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    labels.push_back(line);
  }
  return LabelTable(std::move(labels));
}

inline void write_label_table(std::ostream& out, const LabelTable& t) {
  for (NodeId i = 0; i < t.size(); ++i) out << t.label(i) << '\n';
}

}  // namespace metricnet

#endif  // METRICNET_IO_HPP
