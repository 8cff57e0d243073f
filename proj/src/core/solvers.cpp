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
#include <chrono>
#include <cmath>
#include <string>

#include "adasamp/errors.hpp"
#include "adasamp/kernels.hpp"
#include "adasamp/oracle.hpp"
#include "adasamp/rng.hpp"
#include "adasamp/solvers.hpp"

namespace adasamp {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Accumulates wall time into a slot for the lifetime of the object.
class ScopedTimer {
 public:
  explicit ScopedTimer(double& slot) : slot_(slot), t0_(Clock::now()) {}
  ~ScopedTimer() { slot_ += seconds_since(t0_); }
  ScopedTimer(const ScopedTimer&) = delete;
  ScopedTimer& operator=(const ScopedTimer&) = delete;

 private:
  double& slot_;
  Clock::time_point t0_;
};

std::size_t uniform_draw(Rng& rng, std::size_t n) {
  const auto i = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n));
  return std::min(i, n - 1);
}

std::size_t total_iterations(const SolverConfig& c, std::size_t n) {
  return c.iterations > 0 ? c.iterations : c.epochs * n;
}

// Shared checkpoint bookkeeping. Objective evaluation time is excluded from
// the reported clock.
class Recorder {
 public:
  Recorder(MetricsTrace& trace, std::size_t n, double trace_l)
      : trace_(trace), n_(static_cast<double>(n)), trace_l_(trace_l), start_(Clock::now()) {}

  bool record(std::size_t iteration, double fval, std::optional<double> v) {
    TraceRow row;
    row.iteration = iteration;
    row.epoch = static_cast<double>(iteration) / n_;
    row.time_s = seconds_since(start_) - excluded_s_;
    row.fval = fval;
    if (v) {
      row.v_k = *v;
      row.v_k_over_trace = *v / trace_l_;
    }
    trace_.rows.push_back(row);
    return std::isfinite(fval);
  }

  double& excluded() { return excluded_s_; }
  double elapsed() const { return seconds_since(start_) - excluded_s_; }

 private:
  MetricsTrace& trace_;
  double n_;
  double trace_l_;
  Clock::time_point start_;
  double excluded_s_ = 0.0;
};

MetricsTrace make_trace(const SolverConfig& config) {
  MetricsTrace trace;
  trace.sampler = std::string(to_string(config.sampler));
  trace.stepsize_mode = std::string(to_string(config.stepsize));
  trace.seed = config.seed;
  return trace;
}

}  // namespace

std::string_view to_string(Method m) { return m == Method::cd ? "cd" : "sgd"; }

std::string_view to_string(SamplerKind s) {
  switch (s) {
    case SamplerKind::uniform:
      return "uniform";
    case SamplerKind::fixed_li:
      return "fixed_li";
    case SamplerKind::optimal_full_info:
      return "optimal_full_info";
    case SamplerKind::safe_adaptive:
      return "safe_adaptive";
  }
  return "unknown";
}

std::string_view to_string(StepsizeMode s) {
  switch (s) {
    case StepsizeMode::big_adaptive:
      return "big_adaptive";
    case StepsizeMode::small_fixed:
      return "small_fixed";
    case StepsizeMode::inv_mu_k:
      return "inv_mu_k";
    case StepsizeMode::constant:
      return "constant";
    case StepsizeMode::inv_sqrt_k:
      return "inv_sqrt_k";
  }
  return "unknown";
}

std::string_view to_string(RunStatus s) {
  switch (s) {
    case RunStatus::completed:
      return "completed";
    case RunStatus::converged:
      return "converged";
    case RunStatus::diverged:
      return "diverged";
  }
  return "unknown";
}

Method parse_method(std::string_view s) {
  if (s == "cd") return Method::cd;
  if (s == "sgd") return Method::sgd;
  throw InvalidArgument("unknown method '" + std::string(s) + "'");
}

SamplerKind parse_sampler(std::string_view s) {
  if (s == "uniform") return SamplerKind::uniform;
  if (s == "fixed_li") return SamplerKind::fixed_li;
  if (s == "optimal_full_info" || s == "optimal") return SamplerKind::optimal_full_info;
  if (s == "safe_adaptive" || s == "safe") return SamplerKind::safe_adaptive;
  throw InvalidArgument("unknown sampler '" + std::string(s) + "'");
}

StepsizeMode parse_stepsize_mode(std::string_view s) {
  if (s == "big_adaptive" || s == "big") return StepsizeMode::big_adaptive;
  if (s == "small_fixed" || s == "small") return StepsizeMode::small_fixed;
  if (s == "inv_mu_k") return StepsizeMode::inv_mu_k;
  if (s == "constant") return StepsizeMode::constant;
  if (s == "inv_sqrt_k") return StepsizeMode::inv_sqrt_k;
  throw InvalidArgument("unknown stepsize mode '" + std::string(s) + "'");
}

void SolverConfig::validate() const {
  if (epochs == 0 && iterations == 0) throw ConfigError("solver: need epochs or iterations");
  const bool cd_mode = stepsize == StepsizeMode::big_adaptive || stepsize == StepsizeMode::small_fixed;
  if (method == Method::cd && !cd_mode) {
    throw ConfigError("solver: coordinate descent takes big_adaptive or small_fixed stepsizes");
  }
  if (method == Method::sgd && cd_mode) {
    throw ConfigError("solver: sgd takes inv_mu_k, constant or inv_sqrt_k stepsizes");
  }
  if (!(step_constant > 0.0) || !std::isfinite(step_constant)) {
    throw ConfigError("solver: step_constant must be positive");
  }
  if (!(mu >= 0.0)) throw ConfigError("solver: mu must be >= 0");
  if (sampler == SamplerKind::safe_adaptive) {
    const bool sgd_tracker = tracker == TrackerMode::sgd_cauchy_schwarz;
    if ((method == Method::sgd) != sgd_tracker) {
      throw ConfigError("solver: tracker mode '" + std::string(to_string(tracker)) +
                        "' does not fit method '" + std::string(to_string(method)) + "'");
    }
  }
}

MetricsTrace run_solver(const GlmProblem& problem, const SolverConfig& config,
                        const Observer& observer) {
  return config.method == Method::cd ? run_cd(problem, config, observer)
                                     : run_sgd(problem, config, observer);
}

MetricsTrace run_cd(const GlmProblem& problem, const SolverConfig& config,
                    const Observer& observer) {
  config.validate();
  if (config.method != Method::cd) throw ConfigError("run_cd: method is not cd");
  problem.check();

  const std::size_t n = problem.dim();
  const LipschitzProfile L = coordinate_lipschitz(problem, config.lipschitz);
  const bool l1 = problem.reg == RegKind::l1;
  const bool big = config.stepsize == StepsizeMode::big_adaptive;
  const std::size_t iters = total_iterations(config, n);
  const std::size_t interval = config.metric_interval > 0 ? config.metric_interval : n;

  MetricsTrace trace = make_trace(config);
  CoordinateState state(problem, std::vector<double>(n, 0.0));
  Rng rng(config.seed);
  Recorder rec(trace, n, L.trace());

  const Sampling fixed = fixed_li_sampling(L);
  CategoricalSampler fixed_draw(fixed.p);
  CategoricalSampler adaptive_draw;
  SafeSamplingSolver safe_solver;
  SafeSamplingSolution sol;
  Sampling opt;
  std::vector<double> grad(n);

  const bool safe = config.sampler == SamplerKind::safe_adaptive;
  std::optional<BoundTracker> tracker;
  if (safe) {
    tracker.emplace(problem, config.tracker, config.tracker_options);
    for (std::size_t i = 0; i < n; ++i) {
      if (problem.A.col_norm(i) == 0.0) tracker->observe_exact(i, std::abs(state.coordinate_gradient(i)));
    }
    if (config.tracker == TrackerMode::cd_exact_gram) {
      for (std::size_t i = 0; i < n; ++i) grad[i] = state.coordinate_gradient(i);
      tracker->refresh_exact(grad);
    }
  }

  double h2 = state.h2_total();
  std::optional<double> last_v;
  {
    ScopedTimer t(rec.excluded());
    rec.record(0, objective(problem, state.x(), Form::cd), std::nullopt);
  }

  std::size_t k = 0;
  for (; k < iters; ++k) {
    std::span<const double> p;
    double alpha = 0.0;
    std::optional<double> v;
    const CategoricalSampler* draw_from = nullptr;
    bool uniform = false;

    {
      ScopedTimer t(trace.sampling_s);
      if (tracker && config.refresh_interval > 0 && k > 0 && k % config.refresh_interval == 0) {
        for (std::size_t i = 0; i < n; ++i) grad[i] = state.coordinate_gradient(i);
        tracker->refresh_exact(grad);
      }
    }

    try {
      switch (config.sampler) {
        case SamplerKind::uniform:
          uniform = true;
          alpha = 1.0 / (static_cast<double>(n) * L.l_max());
          break;
        case SamplerKind::fixed_li:
          p = fixed.p;
          alpha = fixed.alpha;
          draw_from = &fixed_draw;
          break;
        case SamplerKind::optimal_full_info: {
          {
            ScopedTimer t(trace.gradient_s);
            for (std::size_t i = 0; i < n; ++i) grad[i] = std::abs(state.coordinate_gradient(i));
          }
          ScopedTimer t(trace.sampling_s);
          opt = optimal_sampling(grad, L);
          adaptive_draw.reset(opt.p);
          p = opt.p;
          alpha = big ? opt.alpha : fixed.alpha;
          v = 1.0 / opt.alpha;
          draw_from = &adaptive_draw;
          break;
        }
        case SamplerKind::safe_adaptive: {
          ScopedTimer t(trace.sampling_s);
          safe_solver.solve(tracker->box(), L, sol);
          trace.monotonicity_violations += sol.monotonicity_violations;
          if (std::isfinite(sol.v) && sol.v > 0.0) {
            adaptive_draw.reset(sol.p);
            p = sol.p;
            alpha = big ? sol.alpha : fixed.alpha;
            v = sol.v;
            draw_from = &adaptive_draw;
          } else {
            p = fixed.p;
            alpha = fixed.alpha;
            draw_from = &fixed_draw;
          }
          break;
        }
      }
    } catch (const StationaryPointError&) {
      trace.status = RunStatus::converged;
      break;
    }
    if (v) last_v = v;

    std::vector<double> uniform_p;
    if (observer) {
      if (uniform) {
        uniform_p.assign(n, 1.0 / static_cast<double>(n));
        p = uniform_p;
      }
      IterationView view;
      view.iteration = k;
      view.x = state.x();
      view.p = p;
      view.alpha = alpha;
      view.v = v;
      view.box = tracker ? &tracker->box() : nullptr;
      view.state = &state;
      observer(view);
    }

    std::size_t i = 0;
    double p_i = 0.0;
    {
      ScopedTimer t(trace.sampling_s);
      if (uniform) {
        i = uniform_draw(rng, n);
        p_i = 1.0 / static_cast<double>(n);
      } else {
        i = draw_from->draw(rng);
        p_i = p[i];
      }
    }

    double delta = 0.0;
    double observed = 0.0;
    CoordinateState::StepInfo info;
    {
      ScopedTimer t(trace.gradient_s);
      const double g = state.coordinate_gradient(i);
      const double gamma = alpha / p_i;
      if (l1) {
        const double xi = state.x()[i];
        delta = prox_step(RegKind::l1, problem.lambda, gamma, xi - gamma * g) - xi;
      } else {
        delta = -gamma * g;
      }
      if (delta != 0.0) info = state.apply(i, delta);
      if (tracker) observed = state.coordinate_gradient(i);
    }

    if (tracker) {
      ScopedTimer t(trace.sampling_s);
      const double h2_prev = h2;
      h2 += info.h2_change;
      CdStep step;
      step.index = i;
      step.delta = delta;
      step.observed = observed;
      step.z_support_norm = info.z_support_norm;
      step.h_norm_bound = 2.0 * std::sqrt(std::max({h2_prev, h2, 0.0}));
      tracker->cd_update(step);
    }

    const std::size_t done = k + 1;
    if (done % n == 0) h2 = state.h2_total();
    if (done % interval == 0 || done == iters) {
      ScopedTimer t(rec.excluded());
      if (!rec.record(done, objective(problem, state.x(), Form::cd), last_v)) {
        trace.status = RunStatus::diverged;
        ++k;
        break;
      }
    }
  }

  trace.iterations_run = k;
  if (trace.rows.back().iteration != k) {
    ScopedTimer t(rec.excluded());
    rec.record(k, objective(problem, state.x(), Form::cd), last_v);
  }
  trace.final_fval = trace.rows.back().fval;
  if (!std::isfinite(trace.final_fval)) trace.status = RunStatus::diverged;
  trace.total_s = rec.elapsed();
  trace.x.assign(state.x().begin(), state.x().end());
  return trace;
}

MetricsTrace run_sgd(const GlmProblem& problem, const SolverConfig& config,
                     const Observer& observer) {
  config.validate();
  if (config.method != Method::sgd) throw ConfigError("run_sgd: method is not sgd");
  problem.check();

  const SparseDesign& A = problem.A;
  const std::size_t n = A.rows();
  const std::size_t d = A.cols();
  const double dn = static_cast<double>(n);
  const double lambda = problem.lambda;
  const bool has_prox = lambda > 0.0;
  const std::size_t iters = total_iterations(config, n);
  const std::size_t interval = config.metric_interval > 0 ? config.metric_interval : n;

  double mu = config.mu > 0.0 ? config.mu : 2.0 * lambda;
  if (config.stepsize == StepsizeMode::inv_mu_k && !(mu > 0.0)) {
    throw ConfigError("run_sgd: inv_mu_k needs mu > 0 (or lambda > 0)");
  }

  // Safe and optimal sampling use unit constants so that p follows the
  // component gradient norms.
  const LipschitzProfile unit(std::vector<double>(n, 1.0));
  const LipschitzProfile Lc = component_lipschitz(problem, config.lipschitz);
  const Sampling fixed = fixed_li_sampling(Lc);
  CategoricalSampler fixed_draw(fixed.p);
  CategoricalSampler adaptive_draw;
  SafeSamplingSolver safe_solver;
  SafeSamplingSolution sol;
  Sampling opt;
  std::vector<double> norms(n);
  std::vector<double> uniform_p;

  MetricsTrace trace = make_trace(config);
  std::vector<double> x(d, 0.0);
  std::vector<double> y(d, 0.0);
  Rng rng(config.seed);
  Recorder rec(trace, n, unit.trace());

  const bool safe = config.sampler == SamplerKind::safe_adaptive;
  std::optional<BoundTracker> tracker;
  if (safe) {
    tracker.emplace(problem, TrackerMode::sgd_cauchy_schwarz, config.tracker_options);
    for (std::size_t i = 0; i < n; ++i) {
      if (A.row_norm(i) == 0.0) tracker->observe_exact(i, 0.0);
    }
  }

  double x_norm = 0.0;
  std::optional<double> last_v;
  {
    ScopedTimer t(rec.excluded());
    rec.record(0, objective(problem, x, Form::sgd), std::nullopt);
  }

  std::size_t k = 0;
  for (; k < iters; ++k) {
    std::span<const double> p;
    std::optional<double> v;
    const CategoricalSampler* draw_from = nullptr;
    bool uniform = config.sampler == SamplerKind::uniform;

    {
      ScopedTimer t(trace.sampling_s);
      if (tracker && config.refresh_interval > 0 && k > 0 && k % config.refresh_interval == 0) {
        for (std::size_t i = 0; i < n; ++i) norms[i] = component_gradient_norm(problem, x, i);
        tracker->refresh_exact(norms);
      }
    }

    try {
      switch (config.sampler) {
        case SamplerKind::uniform:
          break;
        case SamplerKind::fixed_li:
          p = fixed.p;
          draw_from = &fixed_draw;
          break;
        case SamplerKind::optimal_full_info: {
          {
            ScopedTimer t(trace.gradient_s);
            for (std::size_t i = 0; i < n; ++i) norms[i] = component_gradient_norm(problem, x, i);
          }
          ScopedTimer t(trace.sampling_s);
          opt = optimal_sampling(norms, unit);
          adaptive_draw.reset(opt.p);
          p = opt.p;
          v = 1.0 / opt.alpha;
          draw_from = &adaptive_draw;
          break;
        }
        case SamplerKind::safe_adaptive: {
          ScopedTimer t(trace.sampling_s);
          safe_solver.solve(tracker->box(), unit, sol);
          trace.monotonicity_violations += sol.monotonicity_violations;
          if (std::isfinite(sol.v) && sol.v > 0.0) {
            adaptive_draw.reset(sol.p);
            p = sol.p;
            v = sol.v;
            draw_from = &adaptive_draw;
          } else {
            p = fixed.p;
            draw_from = &fixed_draw;
          }
          break;
        }
      }
    } catch (const StationaryPointError&) {
      // Every loss gradient vanishes. With a regularizer the iterate still
      // moves, so fall back to uniform draws.
      if (!has_prox) {
        trace.status = RunStatus::converged;
        break;
      }
      uniform = true;
      p = {};
    }
    if (v) last_v = v;

    const double kk = static_cast<double>(k + 1);
    double eta = config.step_constant;
    if (config.stepsize == StepsizeMode::inv_mu_k) eta = 1.0 / (mu * kk);
    if (config.stepsize == StepsizeMode::inv_sqrt_k) eta = config.step_constant / std::sqrt(kk);

    if (observer) {
      if (uniform) {
        uniform_p.assign(n, 1.0 / dn);
        p = uniform_p;
      }
      IterationView view;
      view.iteration = k;
      view.x = x;
      view.p = p;
      view.alpha = eta;
      view.v = v;
      view.box = tracker ? &tracker->box() : nullptr;
      observer(view);
    }

    std::size_t i = 0;
    double p_i = 0.0;
    {
      ScopedTimer t(trace.sampling_s);
      if (uniform) {
        i = uniform_draw(rng, n);
        p_i = 1.0 / dn;
      } else {
        i = draw_from->draw(rng);
        p_i = p[i];
      }
    }

    double gamma = 0.0;
    double residual = 0.0;
    double x_post_norm = x_norm;
    double observed = 0.0;
    {
      ScopedTimer t(trace.gradient_s);
      const double theta = component_loss_derivative(problem, x, i);
      gamma = -eta / (dn * p_i) * theta;
      const auto row = A.row(i);
      if (!has_prox) {
        if (gamma != 0.0) {
          for (std::size_t q = 0; q < row.nnz(); ++q) x[row.index[q]] += gamma * row.values[q];
          x_post_norm = std::sqrt(kernels::sum_squares(x));
        }
      } else {
        y = x;
        for (std::size_t q = 0; q < row.nnz(); ++q) y[row.index[q]] += gamma * row.values[q];
        double rr = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
          const double post = prox_step(problem.reg, lambda, eta, y[j]);
          const double diff = y[j] - post;
          rr += diff * diff;
          x[j] = post;
        }
        residual = std::sqrt(rr);
        x_post_norm = std::sqrt(kernels::sum_squares(x));
      }
      if (tracker) observed = component_gradient_norm(problem, x, i);
    }

    if (tracker) {
      ScopedTimer t(trace.sampling_s);
      SgdStep step;
      step.index = i;
      step.gamma = gamma;
      step.residual = residual;
      step.observed = observed;
      step.x_norm_bound =
          std::max(x_norm, x_post_norm) + residual + std::abs(gamma) * A.row_norm(i);
      tracker->sgd_update(step);
    }
    x_norm = x_post_norm;

    const std::size_t done = k + 1;
    if (done % interval == 0 || done == iters) {
      ScopedTimer t(rec.excluded());
      if (!rec.record(done, objective(problem, x, Form::sgd), last_v)) {
        trace.status = RunStatus::diverged;
        ++k;
        break;
      }
    }
  }

  trace.iterations_run = k;
  if (trace.rows.back().iteration != k) {
    ScopedTimer t(rec.excluded());
    rec.record(k, objective(problem, x, Form::sgd), last_v);
  }
  trace.final_fval = trace.rows.back().fval;
  if (!std::isfinite(trace.final_fval)) trace.status = RunStatus::diverged;
  trace.total_s = rec.elapsed();
  trace.x = std::move(x);
  return trace;
}

double model_optimal_alpha(std::span<const double> p, std::span<const double> g,
                           const LipschitzProfile& L) {
  double q = 0.0;
  for (double gi : g) q += gi * gi;
  return q / effective_value(p, g, L);
}

ProgressCheck expected_progress_check(const GlmProblem& problem, std::span<const double> x,
                                      std::span<const double> p, double alpha) {
  if (problem.reg == RegKind::l1 && problem.lambda > 0.0) {
    throw InvalidArgument("expected_progress_check: nonsmooth regularizer");
  }
  const LipschitzProfile L = coordinate_lipschitz(problem);
  const auto g = smooth_gradient(problem, x, Form::cd);
  double q = 0.0;
  for (double gi : g) q += gi * gi;
  ProgressCheck out;
  out.lhs = oracle::exhaustive_expected_value(problem, x, p, alpha);
  out.rhs = smooth_objective(problem, x, Form::cd) - alpha * q +
            0.5 * alpha * alpha * effective_value(p, g, L);
  return out;
}

}  // namespace adasamp
