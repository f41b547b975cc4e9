#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "cli.hpp"

namespace metricnet::cli {
namespace {

namespace fs = std::filesystem;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run Invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "metricnet");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("metricnet_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Write(const std::string& name, const std::string& body) {
    auto p = dir_ / name;
    std::ofstream(p, std::ios::binary) << body;
    return p.string();
  }
  std::string Path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, ValidateGoodAndBad) {
  auto good = Invoke({"validate", Write("good.edges", "3\n0 1 1.0\n1 2 1.0\n")});
  EXPECT_EQ(good.code, 0);
  EXPECT_EQ(good.out, "ok n=3 edges=2\n");

  auto loop = Invoke({"validate", Write("loop.edges", "2\n0 1 1\n1 1 2\n")});
  EXPECT_EQ(loop.code, 1);
  EXPECT_NE(loop.err.find("self-loop at node 1"), std::string::npos);

  auto malformed = Invoke({"validate", Write("bad.edges", "3\n0 1\n")});
  EXPECT_EQ(malformed.code, 1);
  EXPECT_NE(malformed.err.find("line 2"), std::string::npos);

  auto disconnected = Invoke({"validate", Write("dis.edges", "3\n0 1 1\n")});
  EXPECT_EQ(disconnected.code, 1);
  EXPECT_NE(disconnected.err.find("[2,1]"), std::string::npos);
}

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(Invoke({}).code, 2);
  EXPECT_EQ(Invoke({"frobnicate"}).code, 2);
  EXPECT_EQ(Invoke({"validate"}).code, 2);
  EXPECT_EQ(Invoke({"project", Path("missing.edges")}).code, 2);
  auto v = Invoke({"--version"});
  EXPECT_EQ(v.code, 0);
  EXPECT_NE(v.out.find("tree-file format 1"), std::string::npos);
}

TEST_F(CliTest, ProjectToStdoutAndFile) {
  auto edges = Write("tri.edges", "3\n0 1 1\n1 2 1\n0 2 3\n");
  auto r = Invoke({"project", edges, "--check-metric"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "3\n0 1 2\n1 0 1\n2 1 0\n");
  auto f = Invoke({"project", edges, "-o", Path("tri.matrix"), "--seed", "4"});
  EXPECT_EQ(f.code, 0);
  EXPECT_EQ(Slurp(Path("tri.matrix")), r.out);
  auto invalid = Invoke({"project", Write("z.edges", "2\n0 1 0\n")});
  EXPECT_EQ(invalid.code, 1);
}

TEST_F(CliTest, AxiomsTableAndCounterexampleFiles) {
  auto r = Invoke({"axioms", "--zoo", "--seed", "3", "--instances", "10", "--cex-dir", Path("cex")});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line.rfind("projection,", 0), 0u);
  std::getline(lines, line);
  EXPECT_EQ(line, "canonical,10,pass,pass,0,-");
  int failing = 0;
  while (std::getline(lines, line)) {
    EXPECT_NE(line.find("FAIL"), std::string::npos) << line;
    ++failing;
  }
  EXPECT_EQ(failing, 4);
  EXPECT_TRUE(fs::exists(Path("cex/discrete.axiom1.matrix")));
  std::ifstream witness(Path("cex/discrete.axiom1.matrix"));
  EXPECT_NO_THROW(read_metric_matrix(witness));

  auto strict = Invoke({"axioms", "--zoo", "--strict", "--instances", "5", "--cex-dir", Path("cex2")});
  EXPECT_EQ(strict.code, 1);
  auto canonical_only = Invoke({"axioms", "--strict", "--instances", "5"});
  EXPECT_EQ(canonical_only.code, 0);
}

TEST_F(CliTest, IndexAndQuery) {
  auto inst = gen_euclidean_metric(60, 3, 5);
  write_metric_matrix(fs::path(Path("m.matrix")), inst.metric);
  auto built = Invoke({"index", Path("m.matrix"), "--seed", "9", "-o", Path("m.tree")});
  ASSERT_EQ(built.code, 0) << built.err;
  auto q = Invoke({"query", Path("m.tree"), Path("m.matrix"), "--node", "17"});
  ASSERT_EQ(q.code, 0) << q.err;
  EXPECT_EQ(q.out.substr(0, q.out.find('\n')), "best 17");
  EXPECT_NE(q.out.find("distance 0\n"), std::string::npos);

  std::string csv;
  auto z = inst.next_query();
  std::vector<double> w(60);
  for (NodeId x = 0; x < 60; ++x) {
    w[x] = inst.points.distance_to(z, x);
    csv += (x ? "," : "") + format_double(w[x]);
  }
  QueryOracle oracle([&](NodeId x) { return w[x]; });
  auto expected = exhaustive_nn(all_nodes(60), oracle);
  auto qv = Invoke({"query", Path("m.tree"), Path("m.matrix"), "--vector", csv});
  ASSERT_EQ(qv.code, 0) << qv.err;
  EXPECT_EQ(qv.out.substr(0, qv.out.find('\n')), "best " + std::to_string(expected.best));

  EXPECT_EQ(Invoke({"query", Path("m.tree"), Path("m.matrix")}).code, 2);
  EXPECT_EQ(Invoke({"query", Path("m.tree"), Path("m.matrix"), "--vector", "1,2"}).code, 2);
  EXPECT_EQ(Invoke({"query", Path("m.matrix"), Path("m.matrix"), "--node", "1"}).code, 2);
}

TEST_F(CliTest, TspBound) {
  auto edges = Write("k4.edges", "4\n0 1 1\n1 2 1\n2 3 1\n3 0 1\n0 2 5\n1 3 5\n");
  auto r = Invoke({"tsp-bound", edges, "--exact-check"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "bound 4\nexact_metric 4\nexact_network 4\napprox_metric 4\ninequality holds\n");

  auto sparse = Write("path.edges", "3\n0 1 1\n1 2 1\n");
  EXPECT_EQ(Invoke({"tsp-bound", sparse}).out, "bound 4\n");
  EXPECT_EQ(Invoke({"tsp-bound", sparse, "--exact-check"}).code, 2);
  auto closure = Invoke({"tsp-bound", sparse, "--exact-check", "--closure"});
  EXPECT_EQ(closure.code, 0);
  EXPECT_NE(closure.out.find("exact_network 4"), std::string::npos);

  std::string big = "12\n";
  for (int i = 0; i + 1 < 12; ++i) big += std::to_string(i) + " " + std::to_string(i + 1) + " 1\n";
  auto large = Invoke({"tsp-bound", Write("big.edges", big)});
  EXPECT_EQ(large.code, 0);
  EXPECT_EQ(large.out.substr(0, large.out.find('\n')), "bound 11");
}

TEST_F(CliTest, BenchWithConfig) {
  auto cfg = Write("s.json", R"({"seed": 2, "sizes": [64, 128], "dim": 2, "n_queries": 20})");
  auto a = Invoke({"bench", "scaling", "--config", cfg});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out.substr(0, a.out.find('\n')), "n,exhaustive_mean,vptree_mean,mismatches");
  EXPECT_EQ(Invoke({"bench", "scaling", "--config", cfg}).out, a.out);
  EXPECT_NE(Invoke({"bench", "scaling", "--config", cfg, "--seed", "5"}).out, a.out);

  auto pcfg = Write("p.json", R"({"seed": 1, "sizes": [40], "dim": 4, "n_queries": 10,
                                 "perturb_probs": [0.0, 0.5], "n_seeds": 1, "delta_max": 10})");
  auto p = Invoke({"bench", "perturb", "--config", pcfg, "-o", Path("p.csv")});
  ASSERT_EQ(p.code, 0) << p.err;
  auto csv = Slurp(Path("p.csv"));
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 7);

  EXPECT_EQ(Invoke({"bench", "scaling", "--config", Write("bad.json", R"({"bogus": 1})")}).code, 2);
  EXPECT_EQ(Invoke({"bench", "perturb", "--config", Write("bad2.json", R"({"perturb_prob": 3})")}).code, 2);
  EXPECT_EQ(Invoke({"bench", "scaling", "--config", Write("bad3.json", "not json")}).code, 2);
}

}  // namespace
}  // namespace metricnet::cli
