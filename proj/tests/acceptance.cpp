// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "metricnet/metricnet.hpp"
#include "oracles.hpp"

using namespace metricnet;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

int failures = 0;

void criterion(const std::string& id, const std::string& title, double limit_seconds,
               const std::function<Outcome()>& body) {
  const auto start = Clock::now();
  Outcome o{false, ""};
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  if (secs >= limit_seconds) {
    o.pass = false;
    o.detail += "; exceeded " + std::to_string(limit_seconds) + " s";
  }
  if (!o.pass) ++failures;
  char timing[32];
  std::snprintf(timing, sizeof timing, "%.2f s", secs);
  std::cout << (o.pass ? "PASS " : "FAIL ") << id << "  " << title << "  [" << o.detail << "; " << timing << "]"
            << std::endl;
}

// 1 ------------------------------------------------------------------------
Outcome oracle_equivalence() {
  std::size_t mismatches = 0;
  Rng root(1);
  for (std::size_t i = 0; i < 1000; ++i) {
    Rng rng = root.split(i);
    RandomGraphParams p{static_cast<std::size_t>(rng.uniform_int(1, 8)), rng.uniform(0.1, 1.0), 10.0};
    auto g = random_connected_network(rng, p);
    if (canonical_projection(g).matrix() != oracle::all_simple_paths_metric(g)) ++mismatches;
  }
  return {mismatches == 0, std::to_string(mismatches) + " mismatching graphs of 1000"};
}

// 2 ------------------------------------------------------------------------
Outcome admissibility() {
  auto report = run_axiom_suite({"canonical", canonical()}, 2, 500);
  std::size_t euclid_failures = 0;
  for (std::uint64_t s = 0; s < 500; ++s) {
    Rng rng(s);
    auto inst = gen_euclidean_metric(rng.uniform_int(2, 32), rng.uniform_int(1, 10), rng.next());
    if (check_axiom_projection(canonical(), inst.metric)) ++euclid_failures;
    if (is_metric(canonical_projection(complete_network(inst.metric.matrix())).matrix())) ++euclid_failures;
  }
  std::ostringstream d;
  d << "non-metric " << report.metric_failures << ", axiom1 " << report.projection_failures << "+" << euclid_failures
    << ", axiom2 " << report.transformation_failures << " over 500 instances";
  return {report.metric_failures == 0 && report.projection_failures == 0 && report.transformation_failures == 0 &&
              euclid_failures == 0,
          d.str()};
}

// 3 ------------------------------------------------------------------------
Outcome uniqueness() {
  bool ok = true;
  std::ostringstream d;
  auto zoo = projection_zoo();
  for (std::size_t k = 1; k < zoo.size(); ++k) {
    auto r = run_axiom_suite(zoo[k], 3, 200);
    const bool found = !r.admissible();
    ok = ok && found;
    d << zoo[k].name << ": " << (found ? "counterexample" : "none") << " (a1 " << r.projection_failures << ", a2 "
      << r.transformation_failures << "); ";
  }
  std::size_t discrete_passes = 0, tested = 0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    auto inst = gen_euclidean_metric(2 + s % 30, 1 + s % 6, 1000 + s);
    bool has_non_unit = false;
    for (double v : inst.metric.matrix().values())
      if (v != 0.0 && v != 1.0) has_non_unit = true;
    if (!has_non_unit) continue;
    ++tested;
    if (!check_axiom_projection(discrete(), inst.metric)) ++discrete_passes;
  }
  ok = ok && discrete_passes == 0 && tested > 0;
  d << "discrete fixed " << discrete_passes << " of " << tested << " non-unit spaces";
  return {ok, d.str()};
}

// 4 ------------------------------------------------------------------------
Outcome vptree_exactness() {
  std::size_t mismatches = 0, queries = 0;
  for (std::uint64_t s = 0; s < 500; ++s) {
    Rng rng(10'000 + s);
    const std::size_t n = rng.uniform_int(1, 2000);
    auto inst = gen_euclidean_metric(n, rng.uniform_int(1, 8), rng.next());
    const auto nodes = all_nodes(n);
    const auto tree = build_vp_tree(inst.points, nodes, rng.next());
    for (int q = 0; q < 10; ++q) {
      const auto z = inst.next_query();
      QueryOracle oracle([&](NodeId x) { return inst.points.distance_to(z, x); });
      if (nn_search(tree, oracle).best != exhaustive_nn(nodes, oracle).best) ++mismatches;
      ++queries;
    }
  }

  auto cfg = ExperimentConfig::scaling_defaults();
  cfg.seed = 4;
  const auto rows = run_scaling_study(cfg);
  bool sublinear = true;
  std::ostringstream curve;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    curve << rows[i].n << ":" << rows[i].vptree_mean << " ";
    if (rows[i].exhaustive_mean != static_cast<double>(rows[i].n)) sublinear = false;
    if (i > 0 && !(rows[i].vptree_mean < 1.5 * rows[i - 1].vptree_mean)) sublinear = false;
  }
  const auto& last = rows.back();
  const bool small = last.n == 16384 && last.vptree_mean < static_cast<double>(last.n) / 10.0;
  std::ostringstream d;
  d << mismatches << "/" << queries << " mismatches; mean comparisons " << curve.str();
  return {mismatches == 0 && sublinear && small, d.str()};
}

// 5 ------------------------------------------------------------------------
Outcome perturbation_ordering() {
  auto cfg = ExperimentConfig::perturbation_defaults();  // n=300, dim=20, 300 queries, 10 seeds
  cfg.seed = 0;
  const auto study = run_perturbation_study(cfg);
  auto row = [&](double r, Scheme s) {
    for (const auto& x : study.rows)
      if (x.r == r && x.scheme == s) return x;
    throw std::logic_error("missing row");
  };
  bool ok = true;
  std::ostringstream d;
  const auto raw0 = row(0.0, Scheme::kRawNetwork), proj0 = row(0.0, Scheme::kProjected);
  ok = ok && raw0.perfect_pct == 100.0 && proj0.perfect_pct == 100.0;
  d << "r=0 perfect " << raw0.perfect_pct << "/" << proj0.perfect_pct << "; ";
  for (double r : {0.2, 0.4, 0.6, 0.8}) {
    const auto raw = row(r, Scheme::kRawNetwork), proj = row(r, Scheme::kProjected);
    ok = ok && proj.perfect_pct >= raw.perfect_pct;
    d << "r=" << r << " perfect raw " << raw.perfect_pct << " proj " << proj.perfect_pct << ", mean pos raw "
      << raw.mean_rel_pos_pct << "% proj " << proj.mean_rel_pos_pct << "%; ";
  }
  ok = ok && row(0.6, Scheme::kProjected).mean_rel_pos_pct < row(0.6, Scheme::kRawNetwork).mean_rel_pos_pct;
  return {ok, d.str()};
}

// 6 ------------------------------------------------------------------------
Outcome optimality() {
  std::size_t domination = 0, family_violations = 0, approx_violations = 0, bound_violations = 0, metrics = 0;
  const auto mst = mst_cost_function();
  const auto tsp = tsp_exact_cost_function();
  for (std::uint64_t s = 0; s < 200; ++s) {
    Rng rng(20'000 + s);
    // Weights on a 1/16 grid: every sum below is exact.
    auto g = random_complete_network(rng, {static_cast<std::size_t>(rng.uniform_int(2, 11)), 1.0, 10.0, 16});
    const auto star = canonical_projection(g);
    for (const auto& e : g.edges())
      if (!(star(e.u, e.v) <= e.weight)) ++domination;
    for (const auto& f : {mst, tsp}) {
      const double at_star = f.evaluate(star.matrix());
      if (!(at_star <= evaluate_on_network(g, f))) ++bound_violations;
      for (const auto& fm : feasible_metric_family(g, star, kDefaultScales, kDefaultMixes)) {
        ++metrics;
        if (!(f.evaluate(fm.distances) <= at_star)) ++family_violations;
      }
    }
    const double exact = tsp_cost_exact(star);
    const double approx = tsp_metric_approx(star).cost;
    if (!(approx >= exact && approx <= 2.0 * exact)) ++approx_violations;
  }
  std::ostringstream d;
  d << "edge domination " << domination << ", family " << family_violations << "/" << metrics << ", f(d*)>f(G) "
    << bound_violations << ", approx ratio " << approx_violations << " violations";
  return {domination == 0 && family_violations == 0 && approx_violations == 0 && bound_violations == 0, d.str()};
}

// 7 ------------------------------------------------------------------------
std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / "metricnet_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string cli = METRICNET_CLI_PATH;

  // Inputs.
  Rng rng(7);
  auto g = random_connected_network(rng, {9, 0.4, 10.0});
  write_edge_list(dir / "g.edges", g);
  auto inst = gen_euclidean_metric(200, 3, 7);
  write_metric_matrix(dir / "m.matrix", inst.metric);
  std::ofstream(dir / "scaling.json") << R"({"sizes": [64, 256, 1024], "n_queries": 100})";
  std::ofstream(dir / "perturb.json")
      << R"({"sizes": [60], "dim": 5, "n_queries": 30, "perturb_probs": [0.0, 0.6], "n_seeds": 2})";
  std::string vec;
  for (NodeId x = 0; x < 200; ++x) vec += (x ? "," : "") + format_double(inst.metric(3, x) + 0.01);

  // {run} is replaced with the run index. Paths echoed on stdout stay fixed;
  // those outputs are read back right after each run.
  const std::vector<std::pair<std::string, std::vector<std::string>>> commands = {
      {"validate g.edges --seed 5", {}},
      {"project g.edges --check-metric --seed 5 -o proj{run}.matrix", {"proj{run}.matrix"}},
      {"axioms --zoo --seed 5 --instances 20 --cex-dir cex",
       {"cex/discrete.axiom1.matrix", "cex/scaled-2.axiom1.matrix"}},
      {"index m.matrix --seed 5 -o m{run}.tree", {"m{run}.tree"}},
      {"query m0.tree m.matrix --node 3 --seed 5", {}},
      {"query m0.tree m.matrix --vector " + vec + " --seed 5", {}},
      {"tsp-bound g.edges --exact-check --closure --seed 5", {}},
      {"bench scaling --config scaling.json --seed 5", {}},
      {"bench perturb --config perturb.json --seed 5 -o p{run}.csv", {"p{run}.csv"}},
      {"--version", {}},
  };
  auto subst = [](std::string s, int run) {
    for (auto pos = s.find("{run}"); pos != std::string::npos; pos = s.find("{run}"))
      s.replace(pos, 5, std::to_string(run));
    return s;
  };

  std::size_t differing = 0, failed = 0;
  std::ostringstream d;
  for (std::size_t c = 0; c < commands.size(); ++c) {
    std::string outputs[2];
    for (int run = 0; run < 2; ++run) {
      const std::string stdout_file = "out" + std::to_string(c) + "_" + std::to_string(run) + ".txt";
      const std::string cmd = "cd '" + dir.string() + "' && '" + cli + "' " + subst(commands[c].first, run) + " > " +
                              stdout_file + " 2> /dev/null";
      if (std::system(cmd.c_str()) != 0) {
        ++failed;
        d << "exit!=0: " << commands[c].first << "; ";
      }
      outputs[run] = slurp(dir / stdout_file);
      for (const auto& f : commands[c].second) {
        const auto path = dir / subst(f, run);
        if (!fs::exists(path)) {
          ++failed;
          d << "missing " << path.filename().string() << "; ";
        }
        outputs[run] += "\x1f" + slurp(path);
      }
    }
    if (outputs[0] != outputs[1] || outputs[0].empty()) {
      ++differing;
      d << "differs: " << commands[c].first.substr(0, 40) << "; ";
    }
  }
  fs::remove_all(dir);
  d << commands.size() << " commands, " << differing << " differing, " << failed << " failed";
  return {differing == 0 && failed == 0, d.str()};
}

}  // namespace

int main() {
  std::cout << "metricnet acceptance suite" << std::endl;
  criterion("AC1", "canonical projection equals all-simple-paths oracle (1000 graphs, n<=8, exact)", 30,
            oracle_equivalence);
  criterion("AC2", "canonical projection is admissible (500 instances, zero failures)", 600, admissibility);
  criterion("AC3", "every non-canonical zoo member has a counterexample within 200 trials", 600, uniqueness);
  criterion("AC4", "vp-tree exact in metric spaces; comparisons sub-linear and < n/10 at 2^14", 300,
            vptree_exactness);
  criterion("AC5", "projected-M beats raw-G on perturbed networks; r=0 perfect", 600, perturbation_ordering);
  criterion("AC6", "optimality: d*<=W, feasible family bounded by d*, 2-approx TSP (200 networks)", 120,
            optimality);
  criterion("AC7", "every CLI subcommand is byte-deterministic under a fixed seed", 600, determinism);
  std::cout << (failures == 0 ? "ALL CRITERIA PASSED" : std::to_string(failures) + " CRITERIA FAILED") << std::endl;
  return failures == 0 ? 0 : 1;
}
