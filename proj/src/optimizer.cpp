// Copyright 2026 The gqspi Authors
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

#include "gqspi/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>

#include "gqspi/errors.hpp"
#include "gqspi/laurent_poly.hpp"
#include "gqspi/response.hpp"

namespace gqspi {

namespace {

constexpr double kFdStep = 1e-6;
constexpr double kMaxStep = 1.0;

template <class E>
bool rethrow_as(const std::exception& e, const std::string& ctx) {
  if (auto* p = dynamic_cast<const E*>(&e)) throw E(ctx + ": " + p->what());
  return false;
}

[[noreturn]] void rethrow_with_context(std::exception_ptr ep, const std::string& ctx) {
  try {
    std::rethrow_exception(ep);
  } catch (const std::exception& e) {
    rethrow_as<TruncationError>(e, ctx);
    rethrow_as<ConvergenceError>(e, ctx);
    rethrow_as<ConsistencyError>(e, ctx);
    rethrow_as<NumericRangeError>(e, ctx);
    rethrow_as<CapacityError>(e, ctx);
    rethrow_as<std::invalid_argument>(e, ctx);
    throw std::runtime_error(ctx + ": " + e.what());
  }
}

struct RestartOutcome {
  std::vector<double> x;
  double initial = 0.0;
  double value = 0.0;
  bool converged = false;
  std::vector<TracePoint> trace;
};

class Restart {
 public:
  Restart(const OptimizationProblem& pb, int index) : pb_(pb), index_(index) {}

  RestartOutcome run(std::vector<double> x) {
    const std::size_t n = x.size();
    RestartOutcome out;
    double f = eval(x);
    out.initial = f;
    std::vector<double> g = gradient(x);
    std::vector<double> H(n * n, 0.0);
    reset(H, n);
    std::vector<double> p(n), xn(n), s(n), y(n), Hy(n);
    out.trace.push_back({0, f});
    for (iter_ = 1; iter_ <= pb_.max_iters; ++iter_) {
      if (norm(g) < pb_.tolerance) {
        out.converged = true;
        break;
      }
      for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc -= H[i * n + j] * g[j];
        p[i] = acc;
      }
      double slope = dot(g, p);
      if (!(slope < 0.0)) {
        reset(H, n);
        for (std::size_t i = 0; i < n; ++i) p[i] = -g[i];
        slope = dot(g, p);
      }
      double t = std::min(1.0, kMaxStep / norm(p));
      double fn = 0.0;
      bool accepted = false;
      while (t > 1e-14) {
        for (std::size_t i = 0; i < n; ++i) xn[i] = x[i] + t * p[i];
        fn = eval(xn);
        if (fn <= f + 1e-4 * t * slope) {
          accepted = true;
          break;
        }
        t *= 0.5;
      }
      if (!accepted) break;
      std::vector<double> gn = gradient(xn);
      for (std::size_t i = 0; i < n; ++i) {
        s[i] = xn[i] - x[i];
        y[i] = gn[i] - g[i];
      }
      double sy = dot(s, y);
      if (sy > 1e-14) {
        for (std::size_t i = 0; i < n; ++i) {
          double acc = 0.0;
          for (std::size_t j = 0; j < n; ++j) acc += H[i * n + j] * y[j];
          Hy[i] = acc;
        }
        double yHy = dot(y, Hy);
        double rho = 1.0 / sy;
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t j = 0; j < n; ++j) {
            H[i * n + j] += rho * ((1.0 + rho * yHy) * s[i] * s[j] - Hy[i] * s[j] - s[i] * Hy[j]);
          }
        }
      }
      x.swap(xn);
      g.swap(gn);
      f = fn;
      out.trace.push_back({iter_, f});
    }
    out.x = PhaseAngles::from_vector(pb_.degree, x).to_vector();
    out.value = eval(out.x);
    return out;
  }

 private:
  double eval(const std::vector<double>& x) {
    try {
      return objective_value(pb_, PhaseAngles::from_vector(pb_.degree, x));
    } catch (...) {
      rethrow_with_context(std::current_exception(), "restart " + std::to_string(index_) +
                                                          ", iteration " + std::to_string(iter_));
    }
  }

  std::vector<double> gradient(std::vector<double> x) {
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      double keep = x[i];
      x[i] = keep + kFdStep;
      double up = eval(x);
      x[i] = keep - kFdStep;
      double dn = eval(x);
      x[i] = keep;
      g[i] = (up - dn) / (2.0 * kFdStep);
    }
    return g;
  }

  static void reset(std::vector<double>& H, std::size_t n) {
    std::fill(H.begin(), H.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) H[i * n + i] = 1.0;
  }
  static double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
  }
  static double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

  const OptimizationProblem& pb_;
  int index_;
  int iter_ = 0;
};

std::vector<double> initial_point(const OptimizationProblem& pb, int index) {
  if (index == 0 && pb.warm_start) return pb.warm_start->to_vector();
  SplitMix64 rng(derive_seed(pb.seed, static_cast<std::uint64_t>(index)));
  std::vector<double> x(static_cast<std::size_t>(2 * pb.degree + 3));
  for (double& v : x) v = (2.0 * rng.uniform() - 1.0) * std::numbers::pi;
  return x;
}

}  // namespace

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  SplitMix64 a(stream);
  SplitMix64 b(seed ^ a.next());
  return b.next();
}

void OptimizationProblem::validate() const {
  if (degree < 0) throw std::invalid_argument("degree must be non-negative");
  if (restarts < 1) throw std::invalid_argument("restarts must be at least 1");
  if (max_iters < 0) throw std::invalid_argument("max_iters must be non-negative");
  if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
  thresholds.validate();
  switch (objective) {
    case Objective::single:
      if (thresholds.bands.size() != 1) throw std::invalid_argument("single objective needs one band");
      break;
    case Objective::multi:
      break;
    case Objective::gaussian:
      if (!prior) throw std::invalid_argument("gaussian objective needs a prior");
      if (thresholds.bands.size() != 1) throw std::invalid_argument("gaussian objective needs one band");
      prior->validate();
      break;
  }
  if (objective != Objective::gaussian && prior) {
    throw std::invalid_argument("a prior requires the gaussian objective");
  }
  if (warm_start && warm_start->degree() != degree) {
    throw std::invalid_argument("warm start degree differs from the problem degree");
  }
}

double objective_value(const OptimizationProblem& problem, const PhaseAngles& angles) {
  ResponseSpectrum spec = response_coefficients(gqsp_build(angles), problem.thresholds.kappa);
  switch (problem.objective) {
    case Objective::single:
      return p_err_single(spec, problem.thresholds);
    case Objective::multi:
      return p_err_multi(spec, problem.thresholds);
    case Objective::gaussian:
      return p_err_gaussian(spec, problem.thresholds, *problem.prior);
  }
  throw std::logic_error("unknown objective");
}

int worker_threads() {
  int hw = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("GQSPI_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<int>(std::min<long>(v, 256));
  }
  return hw;
}

OptimizationResult optimize_angles(const OptimizationProblem& problem) {
  problem.validate();
  const int R = problem.restarts;
  std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(R));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(R));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int r = next++; r < R; r = next++) {
      try {
        Restart run(problem, r);
        outcomes[static_cast<std::size_t>(r)] = run.run(initial_point(problem, r));
      } catch (...) {
        errors[static_cast<std::size_t>(r)] = std::current_exception();
      }
    }
  };
  int nthreads = std::min(worker_threads(), R);
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  int best = 0;
  for (int r = 1; r < R; ++r) {
    if (outcomes[static_cast<std::size_t>(r)].value < outcomes[static_cast<std::size_t>(best)].value) best = r;
  }
  auto& win = outcomes[static_cast<std::size_t>(best)];
  OptimizationResult res;
  res.best_angles = PhaseAngles::from_vector(problem.degree, win.x);
  res.best_p_err = win.value;
  res.trace = std::move(win.trace);
  res.restart_index = best;
  res.converged = win.converged;
  res.seed = problem.seed;
  for (const auto& o : outcomes) {
    res.restart_initial_p_err.push_back(o.initial);
    res.restart_final_p_err.push_back(o.value);
  }
  return res;
}

ScalingFit fit_log_over_d(const std::vector<int>& degrees, const std::vector<double>& p_err) {
  ScalingFit fit;
  double sxx = 0, sxy = 0, syy = 0, sy = 0;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    if (degrees[i] < 2) continue;
    double x = std::log(double(degrees[i])) / degrees[i];
    xs.push_back(x);
    ys.push_back(p_err[i]);
    sxx += x * x;
    sxy += x * p_err[i];
    syy += p_err[i] * p_err[i];
    sy += p_err[i];
  }
  fit.points = static_cast<int>(xs.size());
  if (fit.points == 0) return fit;
  fit.a = sxy / sxx;
  double sse = 0, log_sq = 0;
  double mean = sy / fit.points;
  double sst = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double r = ys[i] - fit.a * xs[i];
    sse += r * r;
    sst += (ys[i] - mean) * (ys[i] - mean);
    double lr = std::log(ys[i]) - std::log(fit.a * xs[i]);
    log_sq += lr * lr;
  }
  fit.r_squared = 1.0 - sse / syy;
  fit.r_squared_centered = sst > 0 ? 1.0 - sse / sst : 0.0;
  fit.log_residual_rms = std::sqrt(log_sq / fit.points);
  return fit;
}

ScalingTable scaling_study(const OptimizationProblem& base, const std::vector<int>& degrees) {
  if (degrees.empty()) throw std::invalid_argument("no degrees given");
  for (std::size_t i = 1; i < degrees.size(); ++i) {
    if (!(degrees[i] > degrees[i - 1])) throw std::invalid_argument("degrees must be ascending");
  }
  ScalingTable table;
  for (int d : degrees) {
    OptimizationProblem pb = base;
    pb.degree = d;
    pb.seed = derive_seed(base.seed, 0x5CA1E000ULL + static_cast<std::uint64_t>(d));
    pb.warm_start.reset();
    for (auto it = table.rows.rbegin(); it != table.rows.rend(); ++it) {
      if ((d - it->degree) % 2 == 0) {
        pb.warm_start = it->angles.padded(d);
        break;
      }
    }
    OptimizationResult r = optimize_angles(pb);
    table.rows.push_back({d, r.best_p_err, r.best_angles});
  }
  std::vector<int> ds;
  std::vector<double> ps;
  for (const auto& row : table.rows) {
    ds.push_back(row.degree);
    ps.push_back(row.p_err);
  }
  ScalingFit fit = fit_log_over_d(ds, ps);
  if (fit.points >= 3) table.fit = fit;
  return table;
}

}  // namespace gqspi
