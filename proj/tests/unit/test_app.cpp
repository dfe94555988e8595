// Copyright 2026 The fracgreen Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "fracgreen/app.hpp"

namespace fracgreen {
namespace {

namespace fs = std::filesystem;

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("fracgreen-test-" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t line_count(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

TEST(Config, MinimalGetsDefaults) {
  const Config c = parse_config(R"({"n": 3, "alpha": 1.0})");
  EXPECT_EQ(c.n, 3);
  EXPECT_EQ(c.alpha, 1.0);
  EXPECT_FALSE(c.p);
  EXPECT_EQ(c.quad.jacobi_nodes, 48);
  EXPECT_EQ(c.quad.adaptive_tol, 1e-12);
  EXPECT_EQ(c.sweep.count, 64);
  EXPECT_TRUE(c.suites.empty());
}

TEST(Config, ValidationNamesTheKey) {
  auto key_of = [](const std::string& text) {
    try {
      (void)parse_config(text);
    } catch (const ConfigError& e) {
      return e.key_path;
    }
    return std::string("<none>");
  };
  EXPECT_EQ(key_of(R"({"n": 3, "alpha": 2.5})"), "alpha");
  EXPECT_EQ(key_of(R"({"n": 3, "alpha": 1.0, "alpha2": 1})"), "alpha2");
  EXPECT_EQ(key_of(R"({"n": 2, "alpha": 1.0})"), "n");
  EXPECT_EQ(key_of(R"({"alpha": 1.0})"), "n");
  EXPECT_EQ(key_of(R"({"n": 3, "alpha": 1.0, "p": 3.0})"), "p");
  EXPECT_EQ(key_of(R"({"n": 3, "alpha": 1.0, "grid": {"ball": {"radial": 1}}})"),
            "grid.ball.radial");
  EXPECT_EQ(key_of(R"({"n": 3, "alpha": 1.0, "grid": {"ball": {"radiall": 4}}})"),
            "grid.ball.radiall");
  EXPECT_EQ(key_of(R"({"n": 3, "alpha": 1.0, "solver": {"init": "warm"}})"), "solver.init");
  EXPECT_EQ(key_of(R"({"n": 3, "alpha": 1.0, "suites": [{"name": "nope"}]})"), "suites[0].name");
  EXPECT_EQ(key_of(R"({"n": 3, "alpha": 1.0, "sweep": {"axes": [4]}})"), "sweep.axes[0]");
  EXPECT_EQ(key_of(R"({"n": 3, "alpha": "one"})"), "alpha");
  EXPECT_EQ(key_of(R"({"n": 3, "alpha": 1.0)"), "<root>");
}

TEST(Config, MissingFile) {
  EXPECT_THROW(load_config("/nonexistent/fracgreen.json"), ConfigError);
}

TEST(Config, UnknownKeyMessageListsKey) {
  try {
    (void)parse_config(R"({"n": 3, "alpha": 1.0, "alpha2": 1})");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("alpha2"), std::string::npos);
  }
}

TEST(Writers, SweepCsvHasOneRowPerLambda) {
  SweepReport r;
  for (int k = 0; k < 64; ++k) {
    r.lambda_values.push_back(-1.0 + (k + 1) / 64.0);
    r.min_w.push_back(0.0);
    r.violation_counts.push_back(0);
    r.sigma_sizes.push_back(1);
    r.interp_error.push_back(0.0);
    r.skipped.push_back(false);
  }
  const std::string csv = sweep_csv(r);
  EXPECT_EQ(line_count(csv), 65u);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "lambda,min_w,violations,sigma_size,interp_error,skipped");
}

TEST(Commands, EmptySuiteListWritesEmptySummary) {
  Config c = parse_config(R"({"n": 3, "alpha": 1.0})");
  c.output_dir = scratch_dir("empty");
  std::ostringstream log;
  EXPECT_EQ(run_command("verify", c, log), kExitOk);
  EXPECT_EQ(slurp(c.output_dir / "summary.csv"), "suite,violations,worst_margin,runtime_ms\n");
}

TEST(Commands, UnknownCommandIsUsageError) {
  Config c = parse_config(R"({"n": 3, "alpha": 1.0})");
  c.output_dir = scratch_dir("unknown");
  std::ostringstream log;
  EXPECT_EQ(run_command("frobnicate", c, log), kExitUsage);
  EXPECT_NE(log.str().find("kernel-eval"), std::string::npos);
}

TEST(Commands, VerifyPassesAndTamperFails) {
  Config c = parse_config(
      R"({"n": 3, "alpha": 1.0, "suites": [{"name": "ball-lemma21", "samples": 500},
                                           {"name": "limits", "samples": 1}]})");
  c.output_dir = scratch_dir("verify");
  std::ostringstream log;
  EXPECT_EQ(run_command("verify", c, log), kExitOk);
  EXPECT_TRUE(fs::exists(c.output_dir / "reports" / "ball-lemma21.json"));
  EXPECT_EQ(line_count(slurp(c.output_dir / "summary.csv")), 3u);
  setenv("FRACGREEN_TEST_TAMPER_B", "1.5", 1);
  const int rc = run_command("verify", c, log);
  unsetenv("FRACGREEN_TEST_TAMPER_B");
  EXPECT_EQ(rc, kExitFailure);
}

TEST(Commands, KernelEvalAndScan) {
  Config c = parse_config(R"({"n": 3, "alpha": 1.0, "p": 1.5,
      "kernel_eval": {"domain": "half-space", "pairs": [{"x": [0, 0, 1], "y": [0, 0, 2]}]}})");
  c.output_dir = scratch_dir("kernel");
  std::ostringstream log;
  EXPECT_EQ(run_command("kernel-eval", c, log), kExitOk);
  const std::string csv = slurp(c.output_dir / "kernel_eval.csv");
  EXPECT_EQ(line_count(csv), 2u);
  EXPECT_NE(csv.find(",1,8,"), std::string::npos);
  EXPECT_EQ(run_command("liouville-scan", c, log), kExitOk);
  EXPECT_EQ(line_count(slurp(c.output_dir / "liouville_scan.csv")), 1u + 3u * 9u * 50u);
  EXPECT_TRUE(fs::exists(c.output_dir / "cascade.json"));
}

TEST(Commands, NonConvergenceExitsOne) {
  Config c = parse_config(R"({"n": 3, "alpha": 1.0, "p": 1.8,
      "grid": {"ball": {"solve_radial": 4}},
      "solver": {"max_iter": 1, "radial_fallback": false}})");
  c.output_dir = scratch_dir("nonconv");
  std::ostringstream log;
  EXPECT_EQ(run_command("solve-ball", c, log), kExitFailure);
}

TEST(Commands, AllIsDeterministic) {
  const std::string text = R"({"n": 3, "alpha": 1.0, "p": 1.8,
      "grid": {"ball": {"radial": 6, "angular": 24, "solve_radial": 6}},
      "suites": [{"name": "ball-lemma21", "samples": 300}, {"name": "kelvin", "samples": 50}]})";
  Config a = parse_config(text), b = parse_config(text);
  a.output_dir = scratch_dir("det-a");
  b.output_dir = scratch_dir("det-b");
  std::ostringstream log;
  ASSERT_EQ(run_command("all", a, log), kExitOk) << log.str();
  ASSERT_EQ(run_command("all", b, log), kExitOk) << log.str();
  for (const char* f : {"field_u.csv", "sweep_axis1.csv", "sweep_axis3.csv", "liouville_scan.csv",
                        "solve.json", "sweep.json", "cascade.json"}) {
    EXPECT_EQ(slurp(a.output_dir / f), slurp(b.output_dir / f)) << f;
  }
  EXPECT_EQ(line_count(slurp(a.output_dir / "sweep_axis2.csv")), 65u);
}

}  // namespace
}  // namespace fracgreen
