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

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <random>
#include <thread>

#include <spdlog/spdlog.h>

#include "adasamp/errors.hpp"
#include "adasamp/harness.hpp"
#include "adasamp/rng.hpp"
#include "adasamp/sampling.hpp"

namespace adasamp::harness {

namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string trace_csv(const MetricsTrace& trace) {
  std::string out = kTraceHeader;
  out.push_back('\n');
  const std::string tail =
      "," + trace.sampler + "," + trace.stepsize_mode + "," + std::to_string(trace.seed) + "\n";
  for (const TraceRow& r : trace.rows) {
    out += std::to_string(r.iteration);
    out += ',' + format_double(r.epoch);
    out += ',' + format_double(r.time_s);
    out += ',' + format_double(r.fval);
    out += ',' + (r.v_k ? format_double(*r.v_k) : std::string());
    out += ',' + (r.v_k_over_trace ? format_double(*r.v_k_over_trace) : std::string());
    out += tail;
  }
  return out;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error("write failed: " + tmp.string());
  }
  fs::rename(tmp, target);
}

namespace {

std::string file_stem(const std::string& name) {
  std::string s = name;
  for (char& ch : s) {
    const bool ok = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') ||
                    (ch >= '0' && ch <= '9') || ch == '-' || ch == '_';
    if (!ok) ch = '_';
  }
  return s;
}

std::string summary_csv(const std::vector<RunRecord>& runs) {
  std::string out =
      "solver,sampler,stepsize_mode,seed,status,iterations,final_fval,total_s,sampling_s,"
      "gradient_s,overhead_ratio\n";
  for (const RunRecord& r : runs) {
    const MetricsTrace& t = r.trace;
    out += r.solver + ',' + t.sampler + ',' + t.stepsize_mode + ',' + std::to_string(r.seed) + ',';
    out += r.failed ? (r.error.empty() ? std::string("diverged") : std::string("error"))
                    : std::string(to_string(t.status));
    out += ',' + std::to_string(t.iterations_run);
    out += ',' + (r.error.empty() ? format_double(t.final_fval) : std::string());
    out += ',' + format_double(t.total_s);
    out += ',' + format_double(t.sampling_s);
    out += ',' + format_double(t.gradient_s);
    out += ',' + (t.gradient_s > 0.0 ? format_double(t.sampling_s / t.gradient_s) : std::string());
    out += '\n';
  }
  return out;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec, const RunOptions& options) {
  const std::string out_dir = options.out_dir.value_or(spec.out_dir);
  const std::size_t jobs = std::max<std::size_t>(1, options.jobs.value_or(spec.jobs));
  const std::uint64_t base_seed = options.seed.value_or(spec.base_seed);

  const GlmProblem problem = build_problem(spec);
  spdlog::info("problem: {} x {}, nnz {}, loss {}, reg {}, lambda {}", problem.A.rows(),
               problem.A.cols(), problem.A.nnz(), to_string(problem.loss), to_string(problem.reg),
               problem.lambda);
  fs::create_directories(out_dir);

  ExperimentResult result;
  for (const NamedSolver& s : spec.solvers) {
    for (std::size_t r = 0; r < spec.seeds; ++r) {
      RunRecord rec;
      rec.solver = s.name;
      rec.seed = base_seed + s.seed_offset + r;
      rec.trace_path =
          (fs::path(out_dir) / (file_stem(s.name) + "_seed" + std::to_string(rec.seed) + ".csv"))
              .string();
      result.runs.push_back(std::move(rec));
    }
  }

  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  const auto worker = [&]() {
    for (std::size_t j = next++; j < result.runs.size(); j = next++) {
      RunRecord& rec = result.runs[j];
      const NamedSolver& s = *std::find_if(spec.solvers.begin(), spec.solvers.end(),
                                           [&](const NamedSolver& x) { return x.name == rec.solver; });
      SolverConfig config = s.config;
      config.seed = rec.seed;
      try {
        rec.trace = run_solver(problem, config);
        rec.failed = rec.trace.status == RunStatus::diverged;
        write_file_atomic(rec.trace_path, trace_csv(rec.trace));
      } catch (const std::exception& e) {
        rec.failed = true;
        rec.error = e.what();
        rec.trace.sampler = std::string(to_string(config.sampler));
        rec.trace.stepsize_mode = std::string(to_string(config.stepsize));
        rec.trace.seed = rec.seed;
      }
      std::lock_guard<std::mutex> lock(log_mutex);
      if (rec.failed) {
        spdlog::warn("{} seed {}: failed {}", rec.solver, rec.seed, rec.error);
      } else {
        spdlog::info("{} seed {}: {} after {} iterations, f = {}", rec.solver, rec.seed,
                     to_string(rec.trace.status), rec.trace.iterations_run, rec.trace.final_fval);
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < std::min(jobs, result.runs.size()); ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  result.summary_path = (fs::path(out_dir) / "summary.csv").string();
  write_file_atomic(result.summary_path, summary_csv(result.runs));
  result.ok = std::none_of(result.runs.begin(), result.runs.end(),
                           [](const RunRecord& r) { return r.failed; });
  return result;
}

namespace {

void random_box(std::size_t n, Rng& rng, GradientBox& box, std::vector<double>& l) {
  std::normal_distribution<double> normal(0.0, 1.0);
  box = GradientBox(n);
  l.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double scale = std::exp(normal(rng));
    box.lower[i] = uniform01(rng) * scale;
    box.upper[i] = uniform01(rng) < 0.1 ? kInf : box.lower[i] + 2.0 * uniform01(rng) * scale;
    l[i] = 0.1 + 9.9 * uniform01(rng);
  }
}

}  // namespace

BenchPoint bench_sampler(std::size_t n, std::size_t reps, std::uint64_t seed) {
  if (n == 0 || reps == 0) throw InvalidArgument("bench_sampler: n and reps must be positive");
  Rng rng(seed + n);
  GradientBox box;
  std::vector<double> l;
  random_box(n, rng, box, l);
  const LipschitzProfile L(l);
  SafeSamplingSolver solver;
  SafeSamplingSolution sol;
  solver.solve(box, L, sol);

  const std::size_t batch = std::max<std::size_t>(1, 200000 / n);
  std::vector<double> times;
  for (std::size_t r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    for (std::size_t b = 0; b < batch; ++b) solver.solve(box, L, sol);
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    times.push_back(dt / static_cast<double>(batch));
  }
  std::nth_element(times.begin(), times.begin() + static_cast<std::ptrdiff_t>(times.size() / 2),
                   times.end());
  return {n, times[times.size() / 2]};
}

std::vector<BenchPoint> bench_sampler_sweep(const std::vector<std::size_t>& sizes,
                                            std::size_t reps, std::uint64_t seed) {
  std::vector<BenchPoint> out;
  for (std::size_t n : sizes) out.push_back(bench_sampler(n, reps, seed));
  return out;
}

double fit_loglog_exponent(const std::vector<BenchPoint>& points) {
  if (points.size() < 2) throw InvalidArgument("fit_loglog_exponent: need two points");
  double sx = 0.0;
  double sy = 0.0;
  for (const auto& p : points) {
    sx += std::log(static_cast<double>(p.n));
    sy += std::log(p.seconds);
  }
  const double k = static_cast<double>(points.size());
  const double mx = sx / k;
  const double my = sy / k;
  double sxy = 0.0;
  double sxx = 0.0;
  for (const auto& p : points) {
    const double dx = std::log(static_cast<double>(p.n)) - mx;
    sxy += dx * (std::log(p.seconds) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

}  // namespace adasamp::harness
