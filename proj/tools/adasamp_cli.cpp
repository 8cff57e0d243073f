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

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "adasamp/errors.hpp"
#include "adasamp/harness.hpp"
#include "adasamp/kernels.hpp"
#include "adasamp/oracle.hpp"
#include "adasamp/sampling.hpp"

namespace {

using adasamp::harness::format_double;

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("adasamp");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  const char* env = std::getenv("ADASAMP_LOG");
  spdlog::set_level(env != nullptr ? spdlog::level::from_str(env) : spdlog::level::info);
}

std::vector<double> read_vector(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw adasamp::Error("cannot read " + path);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) {
    double v = 0.0;
    const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size()) {
      throw adasamp::Error(path + ": bad number '" + tok + "'");
    }
    out.push_back(v);
  }
  return out;
}

void print_vector(const char* name, const std::vector<double>& v) {
  std::cout << name << " =";
  for (double x : v) std::cout << ' ' << format_double(x);
  std::cout << '\n';
}

int cmd_run(const std::string& config, const adasamp::harness::RunOptions& opts) {
  const auto spec = adasamp::harness::load_spec(config);
  const auto result = adasamp::harness::run_experiment(spec, opts);
  std::cout << "wrote " << result.runs.size() << " traces and " << result.summary_path << '\n';
  return result.ok ? 0 : 2;
}

int cmd_validate(const std::string& config) {
  const auto spec = adasamp::harness::load_spec(config);
  std::cout << "ok: " << spec.solvers.size() << " solver(s) x " << spec.seeds << " seed(s)\n";
  return 0;
}

int cmd_sample_demo(const std::string& lf, const std::string& uf, const std::string& Lf,
                    bool with_oracle) {
  adasamp::GradientBox box(read_vector(lf), read_vector(uf));
  const adasamp::LipschitzProfile L(read_vector(Lf));
  const auto sol = adasamp::compute_safe_sampling(box, L);
  print_vector("c", sol.c);
  print_vector("p", sol.p);
  std::cout << "v = " << format_double(sol.v) << '\n';
  std::cout << "alpha = " << format_double(sol.alpha) << '\n';
  std::cout << "v/trace = " << format_double(sol.v / L.trace()) << '\n';
  std::cout << "decided = " << sol.decided << ", excluded = " << sol.excluded << '\n';
  if (with_oracle) {
    const auto ref = adasamp::oracle::brute_force_minimax(box, L);
    std::cout << "oracle v = " << format_double(ref.value) << '\n';
    print_vector("oracle c", ref.certificate);
  }
  return 0;
}

int cmd_bench(std::size_t n, std::size_t reps, bool sweep) {
  std::cout << "kernels: " << adasamp::kernels::isa_name(adasamp::kernels::active().isa) << '\n';
  std::vector<std::size_t> sizes;
  if (sweep) {
    for (std::size_t m = 1000; m <= n; m *= 10) sizes.push_back(m);
  } else {
    sizes.push_back(n);
  }
  const auto points = adasamp::harness::bench_sampler_sweep(sizes, reps);
  std::cout << "n,seconds_per_solve\n";
  for (const auto& p : points) std::cout << p.n << ',' << format_double(p.seconds) << '\n';
  if (points.size() >= 2) {
    std::cout << "loglog_exponent = " << format_double(adasamp::harness::fit_loglog_exponent(points))
              << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive importance sampling for coordinate descent and SGD"};
  app.require_subcommand(1);
  app.footer("Config keys and defaults:\n" + adasamp::harness::describe_config_keys());

  std::string config;
  std::string out_dir;
  std::size_t jobs = 0;
  std::uint64_t seed = 0;

  auto* run = app.add_subcommand("run", "Run every solver and seed of an experiment config");
  run->add_option("config-file", config, "INI config file");
  run->add_option("--config", config, "INI config file");
  run->add_option("--out-dir", out_dir, "Output directory (overrides [run] out_dir)");
  run->add_option("--jobs", jobs, "Parallel runs (overrides [run] jobs)");
  run->add_option("--seed", seed, "Base seed (overrides [run] base_seed)");

  auto* validate = app.add_subcommand("validate", "Check a config and report every problem");
  validate->add_option("config-file", config, "INI config file");
  validate->add_option("--config", config, "INI config file");

  std::string lf;
  std::string uf;
  std::string Lf;
  bool oracle = false;
  auto* demo = app.add_subcommand("sample-demo", "Solve one safe-sampling problem from files");
  demo->add_option("l-file", lf, "Lower bounds")->required();
  demo->add_option("u-file", uf, "Upper bounds (inf allowed)")->required();
  demo->add_option("L-file", Lf, "Smoothness constants")->required();
  demo->add_flag("--oracle", oracle, "Also print the brute-force reference (n <= 8)");

  std::size_t bench_n = 0;
  std::size_t reps = 0;
  bool sweep = false;
  auto* bench = app.add_subcommand("bench-sampler", "Time the safe-sampling solver");
  bench->add_option("n", bench_n, "Problem size (largest size with --sweep)")->required();
  bench->add_option("reps", reps, "Repetitions per size")->required();
  bench->add_flag("--sweep", sweep, "Time every power of ten from 1000 up to n");

  CLI11_PARSE(app, argc, argv);
  setup_logging();

  try {
    if (*run || *validate) {
      if (config.empty()) throw adasamp::ConfigError("no config given");
    }
    if (*run) {
      adasamp::harness::RunOptions opts;
      if (!out_dir.empty()) opts.out_dir = out_dir;
      if (run->count("--jobs") > 0) opts.jobs = jobs;
      if (run->count("--seed") > 0) opts.seed = seed;
      return cmd_run(config, opts);
    }
    if (*validate) return cmd_validate(config);
    if (*demo) return cmd_sample_demo(lf, uf, Lf, oracle);
    if (*bench) return cmd_bench(bench_n, reps, sweep);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
