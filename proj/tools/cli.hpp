// metricnet command-line front end.
//
// Exit codes: 0 success, 1 domain violation (invalid network, failed metric
// check, counterexample under --strict), 2 usage, parse or I/O error.
// Data goes to `out` (or -o files); diagnostics go to `err`.

#ifndef METRICNET_TOOLS_CLI_HPP
#define METRICNET_TOOLS_CLI_HPP

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "metricnet/metricnet.hpp"

namespace metricnet::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string version_string() {
  return std::string("metricnet ") + METRICNET_VERSION + " (edge-list format " +
         std::to_string(kEdgeListFormatVersion) + ", matrix format " + std::to_string(kMatrixFormatVersion) +
         ", tree-file format " + std::to_string(kTreeFormatVersion) + ")";
}

namespace detail {

inline ExperimentConfig load_config(const std::string& path, ExperimentConfig cfg) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("bad config JSON: " + std::string(e.what()));
  }
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  try {
    for (auto& [key, value] : j.items()) {
      if (key == "seed") cfg.seed = value.get<std::uint64_t>();
      else if (key == "sizes") cfg.sizes = value.get<std::vector<std::size_t>>();
      else if (key == "dim") cfg.dim = value.get<std::size_t>();
      else if (key == "n_queries") cfg.n_queries = value.get<std::size_t>();
      else if (key == "perturb_prob") cfg.perturb_prob = value.get<double>();
      else if (key == "perturb_probs") cfg.perturb_probs = value.get<std::vector<double>>();
      else if (key == "n_seeds") cfg.n_seeds = value.get<std::size_t>();
      else if (key == "delta_max") cfg.delta_max = value.get<double>();
      else throw UsageError("unknown config field '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("bad config value: " + std::string(e.what()));
  }
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

inline std::vector<double> parse_csv_doubles(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto fields = metricnet::detail::split_fields(item);
    double v = 0.0;
    if (fields.size() != 1 || !metricnet::detail::parse_number(fields[0], v))
      throw UsageError("bad value '" + item + "' in --vector");
    out.push_back(v);
  }
  return out;
}

inline void write_node_map(const std::filesystem::path& path, const NodeMap& phi) {
  std::ofstream out(path, std::ios::binary);
  out << phi.source_size() << '\n';
  for (NodeId x = 0; x < phi.source_size(); ++x) out << x << ' ' << phi(x) << '\n';
}

}  // namespace detail

struct Options {
  std::uint64_t seed = 0;
  std::string input;
  std::string second_input;
  std::string output;
  bool check_metric = false;
  bool zoo = false;
  bool strict = false;
  std::size_t instances = 100;
  std::string cex_dir = "metricnet-counterexamples";
  std::int64_t query_node = -1;
  std::string query_vector;
  bool exact_check = false;
  bool closure = false;
  std::string config;
};

inline int cmd_validate(const Options& o, std::ostream& out, std::ostream& err) {
  try {
    auto g = read_edge_list(std::filesystem::path(o.input));
    out << "ok n=" << g.size() << " edges=" << g.edge_count() << '\n';
    return kExitOk;
  } catch (const NetworkError& e) {
    err << "invalid: " << e.what() << '\n';
  } catch (const ParseError& e) {
    err << "invalid: " << e.what() << '\n';
  }
  return kExitViolation;
}

inline int cmd_project(const Options& o, std::ostream& out, std::ostream& err) {
  const auto g = read_edge_list(std::filesystem::path(o.input));
  const auto m = canonical_projection(g);
  if (o.check_metric) {
    if (auto v = is_metric(m.matrix())) {
      err << "metric check failed: " << v->describe() << '\n';
      return kExitViolation;
    }
  }
  if (o.output.empty()) write_metric_matrix(out, m);
  else write_metric_matrix(std::filesystem::path(o.output), m);
  return kExitOk;
}

inline int cmd_axioms(const Options& o, std::ostream& out, std::ostream& err) {
  std::vector<NamedProjection> projections = projection_zoo();
  if (!o.zoo) projections.resize(1);
  bool any_failure = false;
  out << "projection,instances,axiom_projection,axiom_transformation,non_metric_outputs,counterexample\n";
  for (const auto& p : projections) {
    const auto r = run_axiom_suite(p, o.seed, o.instances);
    std::string files;
    if (!r.admissible()) {
      any_failure = true;
      std::filesystem::create_directories(o.cex_dir);
      const std::filesystem::path dir(o.cex_dir);
      if (r.projection_witness) {
        auto f = dir / (p.name + ".axiom1.matrix");
        write_metric_matrix(f, *r.projection_witness);
        files += f.string();
      }
      if (r.transformation_witness) {
        auto base = dir / (p.name + ".axiom2");
        write_edge_list(std::filesystem::path(base.string() + ".source.edges"), r.transformation_witness->source);
        write_edge_list(std::filesystem::path(base.string() + ".target.edges"), r.transformation_witness->target);
        detail::write_node_map(std::filesystem::path(base.string() + ".phi"), r.transformation_witness->phi);
        if (!files.empty()) files += ";";
        files += base.string() + ".{source.edges,target.edges,phi}";
      }
    }
    out << p.name << ',' << r.instances << ',' << (r.projection_failures ? "FAIL" : "pass") << ','
        << (r.transformation_failures ? "FAIL" : "pass") << ',' << r.metric_failures << ','
        << (files.empty() ? "-" : files) << '\n';
  }
  if (any_failure && o.strict) {
    err << "counterexample found\n";
    return kExitViolation;
  }
  return kExitOk;
}

inline int cmd_index(const Options& o, std::ostream& out, std::ostream& err) {
  const auto d = read_distance_matrix(std::filesystem::path(o.input));
  if (d.size() == 0) throw UsageError("matrix is empty");
  if (auto v = is_metric(d)) err << "warning: indexing a non-metric table (" << v->describe() << ")\n";
  const auto tree = build_vp_tree(d, all_nodes(d.size()), o.seed);
  std::ofstream f(o.output, std::ios::binary);
  if (!f) throw UsageError("cannot write " + o.output);
  write_vp_tree(f, tree);
  out << "indexed " << tree.indexed_count() << " nodes, depth " << tree.depth() << '\n';
  return kExitOk;
}

inline int cmd_query(const Options& o, std::ostream& out, std::ostream&) {
  std::ifstream f(o.input, std::ios::binary);
  if (!f) throw UsageError("cannot open " + o.input);
  const auto tree = read_vp_tree(f);
  const auto d = read_distance_matrix(std::filesystem::path(o.second_input));
  if (tree.indexed_count() > d.size()) throw UsageError("tree indexes more nodes than the matrix has");
  for (NodeId x : tree.members())
    if (x >= d.size()) throw UsageError("tree references node outside the matrix");

  std::vector<double> w;
  if (o.query_node >= 0) {
    if (static_cast<std::size_t>(o.query_node) >= d.size()) throw UsageError("--node out of range");
    auto row = d.row(static_cast<std::size_t>(o.query_node));
    w.assign(row.begin(), row.end());
  } else if (!o.query_vector.empty()) {
    w = detail::parse_csv_doubles(o.query_vector);
    if (w.size() != d.size())
      throw UsageError("--vector needs " + std::to_string(d.size()) + " values, got " + std::to_string(w.size()));
  } else {
    throw UsageError("query needs --node or --vector");
  }
  QueryOracle oracle([&w](NodeId x) { return w[x]; });
  const auto r = nn_search(tree, oracle);
  out << "best " << r.best << '\n'
      << "distance " << format_double(r.best_dist) << '\n'
      << "comparisons " << r.comparisons << '\n';
  return kExitOk;
}

inline int cmd_tsp_bound(const Options& o, std::ostream& out, std::ostream& err) {
  const auto g = read_edge_list(std::filesystem::path(o.input));
  const std::size_t n = g.size();
  if (n <= kExactTspMaxNodes) {
    const auto lb = lower_bound(g, tsp_exact_cost_function());
    out << "bound " << format_double(lb.bound) << '\n';
    if (o.exact_check) {
      DistanceMatrix target;
      if (g.is_complete()) {
        target = to_matrix(g);
      } else if (o.closure) {
        target = complete_closure(g);
      } else {
        err << "network is not complete; pass --closure to evaluate on its completion\n";
        return kExitUsage;
      }
      const double exact = tsp_cost_exact(target);
      const auto approx = tsp_metric_approx(lb.metric);
      out << "exact_metric " << format_double(lb.bound) << '\n'
          << "exact_network " << format_double(exact) << '\n'
          << "approx_metric " << format_double(approx.cost) << '\n';
      const bool holds = lb.bound <= exact;
      out << "inequality " << (holds ? "holds" : "VIOLATED") << '\n';
      if (!holds) return kExitViolation;
    }
  } else {
    const auto lb = lower_bound(g, mst_cost_function());
    const auto approx = tsp_metric_approx(lb.metric);
    out << "bound " << format_double(lb.bound) << '\n'
        << "approx_metric " << format_double(approx.cost) << '\n';
    if (o.exact_check) err << "n=" << n << " exceeds the exact limit; skipping exact check\n";
  }
  return kExitOk;
}

inline int cmd_bench(const std::string& kind, const Options& o, bool seed_given, std::ostream& out) {
  ExperimentConfig cfg =
      kind == "scaling" ? ExperimentConfig::scaling_defaults() : ExperimentConfig::perturbation_defaults();
  if (!o.config.empty()) cfg = detail::load_config(o.config, cfg);
  if (seed_given) cfg.seed = o.seed;
  std::ofstream file;
  std::ostream* sink = &out;
  if (!o.output.empty()) {
    file.open(o.output, std::ios::binary);
    if (!file) throw UsageError("cannot write " + o.output);
    sink = &file;
  }
  if (kind == "scaling") write_scaling_csv(*sink, run_scaling_study(cfg));
  else write_perturbation_csv(*sink, run_perturbation_study(cfg).rows);
  return kExitOk;
}

inline int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"metricnet: metric projections of networks and vp-tree search"};
  app.require_subcommand(1);
  app.set_version_flag("--version", version_string());
  Options o;

  auto add_seed = [&](CLI::App* sub) { return sub->add_option("--seed", o.seed, "Random seed"); };

  auto* validate = app.add_subcommand("validate", "Check an edge-list file");
  validate->add_option("file", o.input, "Edge-list file")->required();
  add_seed(validate);

  auto* project = app.add_subcommand("project", "Shortest-path metric of a network");
  project->add_option("edge-list", o.input)->required();
  project->add_option("-o,--output", o.output, "Matrix output file (default stdout)");
  project->add_flag("--check-metric", o.check_metric, "Verify the output is metric");
  add_seed(project);

  auto* axioms = app.add_subcommand("axioms", "Run the admissibility axioms on generated instances");
  axioms->add_flag("--zoo", o.zoo, "Also test the alternative projections");
  axioms->add_option("--instances", o.instances, "Instances per axiom")->check(CLI::PositiveNumber);
  axioms->add_option("--cex-dir", o.cex_dir, "Directory for counterexample files");
  axioms->add_flag("--strict", o.strict, "Exit 1 when any counterexample is found");
  add_seed(axioms);

  auto* index = app.add_subcommand("index", "Build a vp-tree over a distance matrix");
  index->add_option("matrix-file", o.input)->required();
  index->add_option("-o,--output", o.output, "Tree file")->required();
  add_seed(index);

  auto* query = app.add_subcommand("query", "Nearest-neighbor query against a vp-tree");
  query->add_option("tree-file", o.input)->required();
  query->add_option("matrix-file", o.second_input)->required();
  auto* node_opt = query->add_option("--node", o.query_node, "Query with row q of the matrix");
  auto* vec_opt = query->add_option("--vector", o.query_vector, "Comma-separated dissimilarities to every node");
  node_opt->excludes(vec_opt);
  add_seed(query);

  auto* tsp = app.add_subcommand("tsp-bound", "Metric lower bound for the traveling salesman cost");
  tsp->add_option("edge-list", o.input)->required();
  tsp->add_flag("--exact-check", o.exact_check, "Also solve both sides exactly when n <= 11");
  tsp->add_flag("--closure", o.closure, "Evaluate incomplete networks on their completion");
  add_seed(tsp);

  auto* bench = app.add_subcommand("bench", "Seeded experiments, CSV output");
  bench->require_subcommand(1);
  for (const char* kind : {"scaling", "perturb"}) {
    auto* sub = bench->add_subcommand(kind, std::string(kind) + " study");
    sub->add_option("--config", o.config, "JSON config");
    sub->add_option("-o,--output", o.output, "CSV output file (default stdout)");
    add_seed(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << version_string() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    for (auto* sub : app.get_subcommands()) err << sub->help();
    return kExitUsage;
  }

  try {
    if (*validate) return cmd_validate(o, out, err);
    if (*project) return cmd_project(o, out, err);
    if (*axioms) return cmd_axioms(o, out, err);
    if (*index) return cmd_index(o, out, err);
    if (*query) return cmd_query(o, out, err);
    if (*tsp) return cmd_tsp_bound(o, out, err);
    if (*bench) {
      auto* sub = bench->get_subcommands().front();
      return cmd_bench(sub->get_name(), o, sub->get_option("--seed")->count() > 0, out);
    }
  } catch (const NetworkError& e) {
    err << "invalid network: " << e.what() << '\n';
    return kExitViolation;
  } catch (const NotMetricError& e) {
    err << e.what() << '\n';
    return kExitViolation;
  } catch (const ParseError& e) {
    err << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace metricnet::cli

#endif  // METRICNET_TOOLS_CLI_HPP
