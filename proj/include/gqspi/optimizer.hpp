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

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gqspi/angles.hpp"
#include "gqspi/decision_error.hpp"

namespace gqspi {

enum class Objective { single, multi, gaussian };

struct OptimizationProblem {
  int degree = 1;
  ThresholdSpec thresholds;
  std::optional<GaussianPrior> prior;
  Objective objective = Objective::single;
  int restarts = 8;
  int max_iters = 1000;
  std::uint64_t seed = 0;
  double tolerance = 1e-7;  // on the gradient norm
  /// Used verbatim as restart 0 when present.
  std::optional<PhaseAngles> warm_start;

  void validate() const;
};

struct TracePoint {
  int iteration;
  double p_err;
};

struct OptimizationResult {
  PhaseAngles best_angles;
  double best_p_err = 0.0;
  std::vector<TracePoint> trace;  // of the winning restart
  int restart_index = 0;
  bool converged = false;
  std::uint64_t seed = 0;
  std::vector<double> restart_initial_p_err;
  std::vector<double> restart_final_p_err;
};

/// SplitMix64 output for (seed, stream); used to give every restart its own
/// independent generator state.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) : state_(state) {}
  std::uint64_t next();
  /// Uniform in [0, 1).
  double uniform();

 private:
  std::uint64_t state_;
};

/// Loss for the problem's objective at the given angles.
double objective_value(const OptimizationProblem& problem, const PhaseAngles& angles);

/// Worker count from GQSPI_THREADS (default: hardware concurrency).
int worker_threads();

OptimizationResult optimize_angles(const OptimizationProblem& problem);

struct ScalingRow {
  int degree;
  double p_err;
  PhaseAngles angles;
};

/// Least-squares p_err = a log(d)/d through the origin.
struct ScalingFit {
  double a = 0.0;
  double r_squared = 0.0;           // uncentered, the no-intercept convention
  double r_squared_centered = 0.0;  // against the mean of p_err
  double log_residual_rms = 0.0;    // of log p_err against log(a log(d)/d)
  int points = 0;
};

struct ScalingTable {
  std::vector<ScalingRow> rows;
  std::optional<ScalingFit> fit;  // empty when fewer than 3 degrees >= 2
};

ScalingFit fit_log_over_d(const std::vector<int>& degrees, const std::vector<double>& p_err);

/// Runs optimize_angles per degree with base's settings. Each degree gets a
/// seed derived from base.seed and is warm-started from the largest smaller
/// degree of the same parity.
ScalingTable scaling_study(const OptimizationProblem& base, const std::vector<int>& degrees);

}  // namespace gqspi
