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

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "adasamp/data.hpp"
#include "adasamp/glm.hpp"
#include "adasamp/solvers.hpp"

namespace adasamp::harness {

struct DataSpec {
  // "synthetic" or "libsvm".
  std::string source = "synthetic";
  std::string path;
  SyntheticSpec synthetic;
  bool binarize = false;
  std::size_t subsample_rows = 0;
  std::size_t subsample_cols = 0;
  std::uint64_t subsample_seed = 0;
};

struct ProblemSpec {
  LossKind loss = LossKind::square;
  RegKind reg = RegKind::l2;
  double lambda = 0.1;
  LipschitzMode lipschitz = LipschitzMode::per_coordinate;
};

struct NamedSolver {
  std::string name;
  SolverConfig config;
  std::uint64_t seed_offset = 0;
};

struct ExperimentSpec {
  DataSpec data;
  ProblemSpec problem;
  std::vector<NamedSolver> solvers;
  std::uint64_t base_seed = 0;
  std::size_t seeds = 1;
  std::size_t jobs = 1;
  std::string out_dir = "out";
};

// Parses INI text with sections [data], [problem], [run] and one
// [solver.NAME] per solver. Collects every problem before throwing
// ConfigError. `base_dir` resolves relative dataset paths.
ExperimentSpec validate_spec(const std::string& text, const std::string& base_dir = ".");
ExperimentSpec load_spec(const std::string& path);

// Keys accepted in each section, with defaults, for --help.
std::string describe_config_keys();

// Edit distance used for "did you mean" hints.
std::size_t levenshtein(const std::string& a, const std::string& b);

Dataset build_dataset(const DataSpec& spec);
GlmProblem build_problem(const ExperimentSpec& spec);

inline constexpr const char* kTraceHeader =
    "iteration,epoch,time_s,fval,v_k,v_k_over_trL,sampler,stepsize_mode,seed";

std::string format_double(double v);
std::string trace_csv(const MetricsTrace& trace);

// Writes to a temporary sibling and renames it into place.
void write_file_atomic(const std::string& path, const std::string& content);

struct RunRecord {
  std::string solver;
  std::uint64_t seed = 0;
  std::string trace_path;
  MetricsTrace trace;
  bool failed = false;
  std::string error;
};

struct ExperimentResult {
  std::vector<RunRecord> runs;
  std::string summary_path;
  bool ok = true;
};

struct RunOptions {
  std::optional<std::string> out_dir;
  std::optional<std::size_t> jobs;
  std::optional<std::uint64_t> seed;
};

ExperimentResult run_experiment(const ExperimentSpec& spec, const RunOptions& options = {});

struct BenchPoint {
  std::size_t n = 0;
  double seconds = 0.0;
};

// Median time of one safe-sampling solve on random mixed boxes.
BenchPoint bench_sampler(std::size_t n, std::size_t reps, std::uint64_t seed = 7);
std::vector<BenchPoint> bench_sampler_sweep(const std::vector<std::size_t>& sizes,
                                            std::size_t reps, std::uint64_t seed = 7);
// Least-squares slope of log(seconds) against log(n).
double fit_loglog_exponent(const std::vector<BenchPoint>& points);

}  // namespace adasamp::harness
