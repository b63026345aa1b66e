#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include "gtest/gtest.h"

#include "bpdn/cli.hpp"
#include "bpdn/instance_io.hpp"

namespace bpdn {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code;
  std::string out, err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("bpdn_cli_" + std::string(
        ::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(Cli, HelpListsExitCodes) {
  const CliRun r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("Exit codes"), std::string::npos);
  EXPECT_NE(r.out.find("gen"), std::string::npos);
}

TEST_F(Cli, BadFlags) {
  EXPECT_EQ(run({}).code, cli::kUsage);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kUsage);
  EXPECT_EQ(run({"gen", "--ensemble", "dct", "--n", "0", "--k", "1", "--sparsity", "1",
                 "--lambda", "0.1", "--seed", "1", "--out", path("x.json")})
                .code,
            cli::kUsage);
  EXPECT_EQ(run({"gen", "--ensemble", "dct", "--n", "10"}).code, cli::kUsage);
  EXPECT_EQ(run({"gen", "--ensemble", "fourier", "--n", "10", "--k", "5", "--sparsity", "1",
                 "--lambda", "0.1", "--seed", "1", "--out", path("x.json")})
                .code,
            cli::kUsage);
  EXPECT_EQ(run({"bench", "--out", path("b")}).code, cli::kUsage);
}

TEST_F(Cli, GenVerifySolveAllEnsembles) {
  const std::vector<std::vector<std::string>> ens = {
      {"--ensemble", "dct", "--n", "200", "--k", "60"},
      {"--ensemble", "bernoulli", "--n", "200", "--k", "60"},
      {"--ensemble", "threebases", "--n", "180", "--k", "60", "--dynrange", "50"},
      {"--ensemble", "banded", "--n", "100", "--k", "100", "--K", "6"}};
  for (std::size_t e = 0; e < ens.size(); ++e) {
    const std::string file = path("i" + std::to_string(e) + ".json");
    std::vector<std::string> args = {"gen"};
    args.insert(args.end(), ens[e].begin(), ens[e].end());
    for (const char* a : {"--sparsity", "6", "--lambda", "0.1", "--seed", "5", "--out"})
      args.push_back(a);
    args.push_back(file);
    const CliRun g = run(args);
    ASSERT_EQ(g.code, 0) << g.err;
    const CliRun v = run({"verify", file});
    EXPECT_EQ(v.code, 0) << v.err;
    EXPECT_NE(v.out.find("optimality_residual"), std::string::npos);
    EXPECT_NE(v.out.find("sigma"), std::string::npos);
    const CliRun s = run({"solve", file, "--solver", "Fista", "--trace", path("t.csv")});
    EXPECT_EQ(s.code, 0) << s.err;
    EXPECT_NE(s.out.find("Converged"), std::string::npos);
    const CliRun p = run({"plot", "--trace", path("t.csv"), "--out", path("plots")});
    EXPECT_EQ(p.code, 0) << p.err;
  }
}

TEST_F(Cli, GenDctPaperScale) {
  const CliRun g = run({"gen", "--ensemble", "dct", "--n", "1000", "--k", "200", "--sparsity", "20",
                     "--lambda", "0.1", "--seed", "42", "--out", path("i.json")});
  ASSERT_EQ(g.code, 0) << g.err;
  EXPECT_LE(load_instance(path("i.json")).optimality_residual, 1e-8);
}

TEST_F(Cli, GenHeaviside) {
  const CliRun g = run({"gen", "--ensemble", "banded", "--n", "300", "--k", "300", "--K", "300",
                     "--sparsity", "30", "--lambda", "0.1", "--seed", "7", "--out",
                     path("h.json")});
  ASSERT_EQ(g.code, 0) << g.err;
  std::ifstream in(path("h.json"));
  const auto j = nlohmann::json::parse(in);
  EXPECT_NEAR(j["coherence"].get<double>(), 0.9983, 5e-5);
}

TEST_F(Cli, GenInfeasiblePattern) {
  const CliRun g = run({"gen", "--ensemble", "bernoulli", "--n", "60", "--k", "5", "--sparsity",
                     "10", "--lambda", "0.1", "--seed", "3", "--method", "pocs", "--out",
                     path("x.json")});
  EXPECT_EQ(g.code, cli::kInfeasible);
  EXPECT_NE(g.err.find("POCS"), std::string::npos);
  EXPECT_NE(g.err.find("final gap"), std::string::npos);
  EXPECT_FALSE(fs::exists(path("x.json")));
}

TEST_F(Cli, VerifyDetectsEditsAndTruncation) {
  ASSERT_EQ(run({"gen", "--ensemble", "dct", "--n", "64", "--k", "32", "--sparsity", "4",
                 "--lambda", "0.1", "--seed", "2", "--out", path("i.json")})
                .code,
            0);
  std::ifstream in(path("i.json"));
  nlohmann::json j = nlohmann::json::parse(in);
  j["b"][0] = j["b"][0].get<double>() + 1.0;
  std::ofstream(path("edited.json")) << j.dump();
  EXPECT_EQ(run({"verify", path("edited.json")}).code, cli::kResidual);
  const std::string text = j.dump();
  std::ofstream(path("cut.json")) << text.substr(0, text.size() / 2);
  EXPECT_EQ(run({"verify", path("cut.json")}).code, cli::kParse);
  EXPECT_EQ(run({"verify", path("missing.json")}).code, cli::kParse);
}

TEST_F(Cli, SolveMaxIterStillWritesTrace) {
  ASSERT_EQ(run({"gen", "--ensemble", "dct", "--n", "128", "--k", "40", "--sparsity", "5",
                 "--lambda", "0.0001", "--seed", "2", "--out", path("i.json")})
                .code,
            0);
  const CliRun s = run({"solve", path("i.json"), "--solver", "ista", "--max-iter", "5", "--trace",
                     path("t.csv")});
  EXPECT_EQ(s.code, cli::kMaxIter);
  std::ifstream in(path("t.csv"));
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  EXPECT_EQ(lines, 6);
  EXPECT_EQ(run({"solve", path("i.json"), "--solver", "newton"}).code, cli::kUsage);
}

TEST_F(Cli, BenchUnknownExperiment) {
  const CliRun r = run({"bench", "--experiment", "nope", "--out", path("b")});
  EXPECT_EQ(r.code, cli::kUsage);
  EXPECT_NE(r.err.find("lambda"), std::string::npos);
  EXPECT_NE(r.err.find("coherence"), std::string::npos);
}

TEST_F(Cli, BenchConfigAndPlotRegeneration) {
  std::ofstream(path("cfg.json")) << R"({
    "name": "mini",
    "ensembles": [{"kind": "banded", "n": 60, "k": 60, "K": 3},
                  {"kind": "banded", "n": 60, "k": 60, "K": 60}],
    "solutions": [{"sparsity": 6, "law": "sign"}],
    "lambdas": [0.1],
    "solvers": ["Ista", "Fista", "Gpsr", "Admm"],
    "seeds": [1],
    "max_iter": 3000
  })";
  const CliRun b = run({"bench", "--config", path("cfg.json"), "--out", path("r")});
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_TRUE(fs::exists(path("r/summary.csv")));
  EXPECT_TRUE(fs::exists(path("r/traces.csv")));
  std::vector<fs::path> svgs;
  for (const auto& e : fs::directory_iterator(path("r")))
    if (e.path().extension() == ".svg") svgs.push_back(e.path());
  ASSERT_EQ(svgs.size(), 2u);

  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const CliRun p = run({"plot", "--trace", path("r/traces.csv"), "--out", path("again")});
  ASSERT_EQ(p.code, 0) << p.err;
  for (const auto& svg : svgs) EXPECT_EQ(slurp(svg), slurp(path("again") / svg.filename()));

  std::ofstream(path("bad.json")) << "{\"name\": ";
  EXPECT_EQ(run({"bench", "--config", path("bad.json"), "--out", path("r2")}).code, cli::kParse);
  std::ofstream(path("bad.csv")) << "nonsense\n";
  EXPECT_EQ(run({"plot", "--trace", path("bad.csv"), "--out", path("p")}).code, cli::kParse);
}

}  // namespace
}  // namespace bpdn
