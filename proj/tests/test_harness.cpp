// Copyright 2026 The adasamp Authors
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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "adasamp/errors.hpp"
#include "adasamp/harness.hpp"
#include "test_support.hpp"

namespace adasamp {
namespace {

namespace fs = std::filesystem;
using harness::validate_spec;

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string config_error(const std::string& text) {
  try {
    validate_spec(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

class TempDir {
 public:
  explicit TempDir(const std::string& name)
      : path_(fs::temp_directory_path() / ("adasamp_" + name)) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

TEST(Config, MinimalSpecUsesDefaults) {
  const auto spec = validate_spec("[solver.a]\n");
  ASSERT_EQ(spec.solvers.size(), 1u);
  const auto& c = spec.solvers[0].config;
  EXPECT_EQ(c.method, Method::cd);
  EXPECT_EQ(c.sampler, SamplerKind::safe_adaptive);
  EXPECT_EQ(c.stepsize, StepsizeMode::big_adaptive);
  EXPECT_EQ(c.tracker, TrackerMode::cd_cauchy_schwarz);
  EXPECT_EQ(c.epochs, 10u);
  EXPECT_EQ(spec.problem.lambda, 0.1);
  EXPECT_EQ(spec.data.synthetic.rows, 50u);
  EXPECT_EQ(spec.seeds, 1u);

  const auto sgd = validate_spec("[solver.b]\nmethod = sgd\n");
  EXPECT_EQ(sgd.solvers[0].config.stepsize, StepsizeMode::inv_mu_k);
  EXPECT_EQ(sgd.solvers[0].config.tracker, TrackerMode::sgd_cauchy_schwarz);
}

TEST(Config, UnknownKeyNamesNearestMatch) {
  const auto msg = config_error("[solver.a]\nstepsizee = big_adaptive\n");
  EXPECT_NE(msg.find("stepsizee"), std::string::npos) << msg;
  EXPECT_NE(msg.find("stepsize"), std::string::npos) << msg;
  EXPECT_NE(msg.find("did you mean"), std::string::npos) << msg;
}

TEST(Config, RejectsBadValuesAndCollectsAllErrors) {
  const auto msg = config_error(
      "[problem]\nlambda = -1\nloss = hinge\n[run]\nseeds = 0\n[solver.a]\nepochs = x\n[bogus]\n");
  EXPECT_NE(msg.find("lambda"), std::string::npos) << msg;
  EXPECT_NE(msg.find("hinge"), std::string::npos) << msg;
  EXPECT_NE(msg.find("seeds"), std::string::npos) << msg;
  EXPECT_NE(msg.find("epochs"), std::string::npos) << msg;
  EXPECT_NE(msg.find("bogus"), std::string::npos) << msg;
  EXPECT_FALSE(config_error("[data]\nrows = 5\n").empty());
  EXPECT_FALSE(config_error("[solver.a]\nmethod = sgd\nstepsize = big_adaptive\n").empty());
  EXPECT_FALSE(config_error("[data]\nsource = libsvm\npath = /nonexistent.svm\n[solver.a]\n").empty());
  EXPECT_FALSE(config_error("[solver.a\n").empty());
}

TEST(Config, Levenshtein) {
  EXPECT_EQ(harness::levenshtein("stepsizee", "stepsize"), 1u);
  EXPECT_EQ(harness::levenshtein("", "abc"), 3u);
  EXPECT_EQ(harness::levenshtein("kitten", "sitting"), 3u);
}

TEST(Config, DescribeListsEveryKey) {
  const auto text = harness::describe_config_keys();
  for (const char* key : {"rows", "lambda", "base_seed", "sampler", "tracker", "gram_limit"}) {
    EXPECT_NE(text.find(key), std::string::npos) << key;
  }
}

TEST(Config, RelativeLibsvmPathResolvesAgainstConfig) {
  TempDir dir("cfg_path");
  std::ofstream(dir.path() / "tiny.svm") << "1 1:1 2:0.5\n-1 2:2\n1 1:-1\n";
  std::ofstream(dir.path() / "exp.ini") << "[data]\nsource = libsvm\npath = tiny.svm\n"
                                           "[problem]\nloss = logistic\n[solver.a]\nepochs = 2\n";
  const auto spec = harness::load_spec((dir.path() / "exp.ini").string());
  const auto problem = harness::build_problem(spec);
  EXPECT_EQ(problem.A.rows(), 3u);
  EXPECT_EQ(problem.A.cols(), 2u);
}

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(harness::format_double(0.1), "0.1");
  EXPECT_EQ(harness::format_double(2.0), "2");
  EXPECT_EQ(std::stod(harness::format_double(1.0 / 3.0)), 1.0 / 3.0);
}

constexpr const char* kThreeSamplers = R"(
[data]
rows = 30
cols = 20
density = 0.5
seed = 3

[problem]
lambda = 0.1

[run]
base_seed = 10
seeds = 1

[solver.uniform]
sampler = uniform
epochs = 3

[solver.safe]
sampler = safe_adaptive
epochs = 3

[solver.optimal]
sampler = optimal_full_info
epochs = 3
)";

TEST(RunExperiment, WritesOneTracePerRunAndSummary) {
  TempDir dir("run_files");
  const auto spec = validate_spec(kThreeSamplers);
  harness::RunOptions opts;
  opts.out_dir = dir.path().string();
  const auto result = harness::run_experiment(spec, opts);
  EXPECT_TRUE(result.ok);
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(dir.path())) {
    (void)e;
    ++files;
  }
  EXPECT_EQ(files, 4u);
  EXPECT_TRUE(fs::exists(dir.path() / "safe_seed10.csv"));
  const auto trace = read_file(dir.path() / "safe_seed10.csv");
  EXPECT_EQ(trace.substr(0, trace.find('\n')), harness::kTraceHeader);
  const auto summary = read_file(result.summary_path);
  EXPECT_EQ(summary.substr(0, summary.find('\n')),
            "solver,sampler,stepsize_mode,seed,status,iterations,final_fval,total_s,sampling_s,"
            "gradient_s,overhead_ratio");
  EXPECT_NE(summary.find("safe,safe_adaptive,big_adaptive,10,completed,60,"), std::string::npos)
      << summary;
}

TEST(RunExperiment, DeterministicAcrossRunsAndJobCounts) {
  TempDir a("det_a");
  TempDir b("det_b");
  auto spec = validate_spec(kThreeSamplers);
  spec.seeds = 2;
  harness::RunOptions oa;
  oa.out_dir = a.path().string();
  oa.jobs = 1;
  harness::RunOptions ob;
  ob.out_dir = b.path().string();
  ob.jobs = 3;
  harness::run_experiment(spec, oa);
  harness::run_experiment(spec, ob);
  for (const auto& e : fs::directory_iterator(a.path())) {
    const auto name = e.path().filename();
    const bool summary = name == "summary.csv";
    const auto& cols = summary ? testing::kSummaryTimeColumns : testing::kTraceTimeColumns;
    EXPECT_EQ(testing::drop_columns(read_file(e.path()), cols),
              testing::drop_columns(read_file(b.path() / name), cols))
        << name;
  }
}

TEST(RunExperiment, SeedOverrideShiftsSeeds) {
  TempDir dir("seed_override");
  const auto spec = validate_spec(kThreeSamplers);
  harness::RunOptions opts;
  opts.out_dir = dir.path().string();
  opts.seed = 100;
  const auto result = harness::run_experiment(spec, opts);
  EXPECT_EQ(result.runs[0].seed, 100u);
  EXPECT_TRUE(fs::exists(dir.path() / "uniform_seed100.csv"));
}

TEST(RunExperiment, DivergenceMarksRunFailed) {
  TempDir dir("diverge");
  const auto spec = validate_spec(
      "[data]\nrows = 20\ncols = 10\n[problem]\nlambda = 0\n"
      "[solver.boom]\nmethod = sgd\nsampler = uniform\nstepsize = constant\n"
      "step_constant = 1e8\nepochs = 50\n");
  harness::RunOptions opts;
  opts.out_dir = dir.path().string();
  const auto result = harness::run_experiment(spec, opts);
  EXPECT_FALSE(result.ok);
  EXPECT_TRUE(result.runs[0].failed);
  EXPECT_NE(read_file(result.summary_path).find(",diverged,"), std::string::npos);
}

TEST(WriteFileAtomic, ReplacesContent) {
  TempDir dir("atomic");
  const auto path = (dir.path() / "x.csv").string();
  harness::write_file_atomic(path, "one\n");
  harness::write_file_atomic(path, "two\n");
  EXPECT_EQ(read_file(path), "two\n");
}

TEST(Bench, LogLogFit) {
  std::vector<harness::BenchPoint> pts{{1000, 1.0}, {10000, 10.0}, {100000, 100.0}};
  EXPECT_NEAR(harness::fit_loglog_exponent(pts), 1.0, 1e-12);
  const auto p = harness::bench_sampler(100, 3);
  EXPECT_EQ(p.n, 100u);
  EXPECT_GT(p.seconds, 0.0);
  EXPECT_THROW(harness::bench_sampler(0, 3), InvalidArgument);
}

TEST(DropColumns, Helper) {
  EXPECT_EQ(testing::drop_columns("a,b,c\n1,2,3\n", {1}), "a,c\n1,3\n");
  EXPECT_EQ(testing::drop_columns("a,b\n", {0}), "b\n");
}

}  // namespace
}  // namespace adasamp
