#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "cli.hpp"

namespace {

struct Invocation {
  int code;
  std::string out;
  std::string err;
};

Invocation run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = en::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json parse(const Invocation& r) { return nlohmann::json::parse(r.out); }

TEST(Cli, HelpExitsCleanly) {
  const Invocation r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("selftest"), std::string::npos);
}

TEST(Cli, MissingSubcommandIsValidationError) {
  EXPECT_EQ(run({}).code, en::cli::kValidation);
  EXPECT_EQ(run({"frobnicate"}).code, en::cli::kValidation);
}

TEST(Cli, EvalEnvelope) {
  const Invocation r = run({"eval", "--a", "1", "--c", "1", "--d", "1", "--x", "1", "--y", "0.5"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = parse(r);
  EXPECT_EQ(j["command"], "eval");
  EXPECT_EQ(j["result"]["representation"], "closed");
  EXPECT_NEAR(j["result"]["value"].get<double>(), std::exp(-1.5), 1e-15);
  EXPECT_EQ(j["meta"]["seconds"].get<double>(), 0.0);
  const std::vector<std::string> keys{"command", "params", "result", "error_estimate", "meta"};
  std::vector<std::string> got;
  for (auto it = j.begin(); it != j.end(); ++it) got.push_back(it.key());
  std::sort(got.begin(), got.end());
  auto want = keys;
  std::sort(want.begin(), want.end());
  EXPECT_EQ(got, want);
}

TEST(Cli, EvalTableCsv) {
  const Invocation r = run({"--format", "csv", "eval", "--a", "1", "--c", "1", "--d", "5", "--x", "1,2",
                     "--y", "0.5"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "x,y,value,rep,err");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 2);
}

TEST(Cli, EvalRejectsBadParameters) {
  EXPECT_EQ(run({"eval", "--a", "-1", "--c", "1", "--d", "1", "--x", "1", "--y", "1"}).code,
            en::cli::kValidation);
  EXPECT_EQ(run({"eval", "--a", "1", "--c", "1", "--d", "5", "--x", "1", "--y", "1", "--rep",
                 "laplace"})
                .code,
            en::cli::kValidation);
  EXPECT_EQ(run({"eval", "--a", "1", "--c", "1", "--d", "1", "--x", "1", "--y", "1", "--rep",
                 "closed", "--crosscheck"})
                .code,
            en::cli::kValidation);
}

TEST(Cli, BudgetExhaustionExitCode) {
  const Invocation r = run({"--max-evals", "50", "eval", "--a", "1", "--c", "1", "--d", "5", "--x", "1",
                     "--y", "0.1"});
  EXPECT_EQ(r.code, en::cli::kBudget);
}

TEST(Cli, ClassifyWitness) {
  const Invocation r = run({"classify", "--a", "1", "--c", "1", "--d", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = parse(r);
  EXPECT_EQ(j["result"]["verdict"], "SignChanging");
  EXPECT_LT(j["result"]["witness"]["value"].get<double>(), 0.0);
  const auto pos = parse(run({"classify", "--a", "1", "--c", "1", "--d", "0.5"}));
  EXPECT_EQ(pos["result"]["verdict"], "Positive");
  EXPECT_FALSE(pos["result"].contains("witness"));
}

TEST(Cli, ScanIsDeterministic) {
  const std::vector<std::string> args{"scan", "--m", "5", "--window", "10,20,0,1", "--res", "4,3"};
  const Invocation a = run(args);
  const Invocation b = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.rfind("x,y,sign,value,err\n", 0), 0u);
  EXPECT_NE(a.out.find(",-,"), std::string::npos);
}

TEST(Cli, ProfileCsvAndZeros) {
  const Invocation csv = run({"profile", "--alpha-max", "1", "--step", "0.5"});
  ASSERT_EQ(csv.code, 0) << csv.err;
  EXPECT_EQ(csv.out.rfind("alpha,H,H_asym\n0,", 0), 0u);
  const Invocation js = run({"--format", "json", "profile", "--alpha-max", "5.5", "--step", "0.1"});
  ASSERT_EQ(js.code, 0) << js.err;
  EXPECT_EQ(parse(js)["result"]["zeros"].size(), 2u);
}

TEST(Cli, NdFaceIndicesAreOneBased) {
  const Invocation r = run({"nd", "--alphas", "1,1,2", "--d", "4", "--face", "1,2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = parse(r);
  EXPECT_EQ(j["result"]["verdict"], "SignChanging");
  EXPECT_EQ(j["result"]["face"]["i"], 1);
  EXPECT_EQ(run({"nd", "--alphas", "1,1,2", "--d", "4", "--face", "0,1"}).code,
            en::cli::kValidation);
}

TEST(Cli, GalerkinReportsGap) {
  const Invocation r = run({"galerkin", "--a", "1", "--c", "1", "--d", "5", "--L", "4", "--h", "0.25",
                     "--nonneg"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = parse(r)["result"];
  EXPECT_GE(j["gap"].get<double>(), j["lower_bound"].get<double>());
  EXPECT_TRUE(j["gap_holds"].get<bool>());
}

TEST(Cli, CapacityTable) {
  const Invocation r = run({"capacity", "--kmax", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("R,eps,energy\n", 0), 0u);
}

TEST(Cli, EvolveWritesFile) {
  const auto path = std::filesystem::temp_directory_path() / "en_cli_evolve.csv";
  const Invocation r = run({"--out", path.string(), "evolve", "--a", "1", "--c", "1", "--d", "5", "--n",
                     "64", "--L", "8"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "x,u");
  std::filesystem::remove(path);
}

TEST(Cli, ConfigFileSuppliesOptions) {
  const auto path = std::filesystem::temp_directory_path() / "en_cli_config.ini";
  {
    std::ofstream cfg(path);
    cfg << "format=json\n[classify]\na=1\nc=1\nd=0.5\n";
  }
  const Invocation r = run({"--config", path.string(), "classify"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(parse(r)["result"]["verdict"], "Positive");
  {
    std::ofstream cfg(path);
    cfg << "bogus=1\n";
  }
  EXPECT_EQ(run({"--config", path.string(), "classify", "--a", "1", "--c", "1", "--d", "1"}).code,
            en::cli::kValidation);
  std::filesystem::remove(path);
}

TEST(Cli, SelftestExitCodes) {
  const Invocation ok = run({"selftest", "--only", "1,3"});
  EXPECT_EQ(ok.code, 0) << ok.out;
  EXPECT_NE(ok.out.find("PASS  1"), std::string::npos);
  const Invocation bad = run({"selftest", "--only", "15", "--corrupt-multiplier"});
  EXPECT_EQ(bad.code, en::cli::kSelftestFailed);
  EXPECT_NE(bad.out.find("FAIL 15"), std::string::npos);
}

}  // namespace
