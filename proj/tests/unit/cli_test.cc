// Copyright 2026 The sparsepref Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "json.hpp"

namespace {

namespace fs = std::filesystem;

struct CliResult {
  int code = -1;
  std::string out;
};

CliResult Cli(const std::string& args) {
  const std::string cmd = std::string(SPARSEPREF_CLI_PATH) + " " + args + " 2>/dev/null";
  CliResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("sparsepref_cli_" +
            std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string Path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, HelpAndUsageErrors) {
  EXPECT_EQ(Cli("--help").code, 0);
  EXPECT_EQ(Cli("rate-curve --no-such-flag 1").code, 2);
  EXPECT_EQ(Cli("rate-curve --d ten").code, 2);
  EXPECT_EQ(Cli("rate-curve --repetitions 0").code, 2);
  EXPECT_EQ(Cli("simulate --d 5").code, 2);
}

TEST_F(CliTest, ExitCodesByErrorClass) {
  EXPECT_EQ(Cli("rate-curve --estimators l0 --d 100 --grid.n 10").code, 3);
  EXPECT_EQ(Cli("fit --data " + Path("missing.csv")).code, 4);
  EXPECT_EQ(Cli("rate-curve --config " + Path("missing.json")).code, 4);
  std::ofstream(Path("bad.json")) << "{";
  EXPECT_EQ(Cli("rate-curve --config " + Path("bad.json")).code, 2);
  std::ofstream(Path("kind.json")) << R"({"kind": "sparsity_curve"})";
  EXPECT_EQ(Cli("rate-curve --config " + Path("kind.json")).code, 2);
}

TEST_F(CliTest, SimulateThenFit) {
  ASSERT_EQ(Cli("simulate --d 8 --k 2 --n 200 --sigma 0.5 --seed 3 --out " +
                Path("data.csv") + " --theta-out " + Path("theta.json"))
                .code,
            0);
  ASSERT_TRUE(fs::exists(Path("data.csv")));
  ASSERT_TRUE(fs::exists(Path("theta.json")));
  const CliResult fit = Cli("fit --data " + Path("data.csv") + " --estimator l1 --sigma 0.5");
  ASSERT_EQ(fit.code, 0);
  const auto report = nlohmann::json::parse(fit.out);
  EXPECT_EQ(report.at("theta").size(), 8u);
  EXPECT_TRUE(report.contains("converged"));
  const CliResult l0 = Cli("fit --data " + Path("data.csv") + " --estimator l0 --k 2 --sigma 0.5");
  ASSERT_EQ(l0.code, 0);
  int nonzero = 0;
  for (double v : nlohmann::json::parse(l0.out).at("theta")) nonzero += v != 0.0;
  EXPECT_LE(nonzero, 2);
}

TEST_F(CliTest, ConfigWithFlagOverride) {
  std::ofstream(Path("rate.json"))
      << R"({"kind": "rate_curve", "d": 10, "repetitions": 2,
             "grid": {"n": [40, 80], "k": [2]}})";
  const CliResult base = Cli("rate-curve --config " + Path("rate.json"));
  ASSERT_EQ(base.code, 0);
  const CliResult over = Cli("rate-curve --config " + Path("rate.json") + " --grid.n 40");
  ASSERT_EQ(over.code, 0);
  auto lines = [](const std::string& s) {
    return std::count(s.begin(), s.end(), '\n');
  };
  EXPECT_EQ(lines(base.out), 1 + 2 * 2 * 2);
  EXPECT_EQ(lines(over.out), 1 + 1 * 2 * 2);
  // The n = 40 rows are the same whether or not n = 80 is in the grid.
  EXPECT_EQ(base.out.substr(0, over.out.size()), over.out);
}

TEST_F(CliTest, ByteIdenticalAcrossRunsAndThreads) {
  const std::string args =
      "sparsity-curve --d 12 --grid.n 60 --grid.k 1,3,12 --repetitions 3 --seed 9";
  ASSERT_EQ(Cli(args + " --out " + Path("a.csv")).code, 0);
  ASSERT_EQ(Cli(args + " --out " + Path("b.csv")).code, 0);
  ASSERT_EQ(Cli(args + " --threads 3 --out " + Path("c.csv")).code, 0);
  const std::string a = Slurp(Path("a.csv"));
  ASSERT_FALSE(a.empty());
  EXPECT_EQ(a, Slurp(Path("b.csv")));
  EXPECT_EQ(a, Slurp(Path("c.csv")));
}

TEST_F(CliTest, PlotFromCsv) {
  ASSERT_EQ(Cli("beta-contour --d 8 --grid.k 2 --repetitions 1 "
                "--contour.log10_n 1.5,2,0.5 --contour.log10_beta -2,-1,1 --out " +
                Path("c.csv"))
                .code,
            0);
  ASSERT_EQ(Cli("plot --in " + Path("c.csv") + " --out " + Path("plots")).code, 0);
  EXPECT_TRUE(fs::exists(Path("plots/beta_contour.svg")));
  std::ofstream(Path("empty.csv")) << "";
  EXPECT_NE(Cli("plot --in " + Path("empty.csv") + " --out " + Path("p2")).code, 0);
}

TEST_F(CliTest, DiagnoseReportsConstants) {
  const CliResult r = Cli("diagnose --d 6 --grid.k 1 --diagnose.pairs 50 --diagnose.trials 5 --out " +
                    Path("diag.csv"));
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("0.0983"), std::string::npos) << r.out;
  const std::string csv = Slurp(Path("diag.csv"));
  EXPECT_EQ(csv.rfind("check,detail,value,pass\n", 0), 0u);
  EXPECT_NE(csv.find("btl.gamma"), std::string::npos);
}

}  // namespace
