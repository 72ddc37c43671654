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

#include <optional>
#include <string>
#include <vector>

#include "gqspi/response.hpp"

namespace gqspi {

struct Band {
  double lo;
  double hi;
};

/// Decision bands in beta units. All bands lie inside the principal period
/// (-pi/(2 kappa), pi/(2 kappa)), sorted and disjoint.
struct ThresholdSpec {
  std::vector<Band> bands;
  double kappa = 1.0;

  /// Throws std::invalid_argument when an invariant fails.
  void validate() const;
  double total_width() const;
  bool contains(double beta) const;
  double half_period() const;
};

struct GaussianPrior {
  double mu = 0.0;
  double sigma = 1.0;

  void validate() const;
  double density(double beta) const;
  /// Probability mass outside (-pi/(2 kappa), pi/(2 kappa)).
  double mass_outside(double kappa) const;
};

/// Piecewise-linear density on a sorted beta table, zero outside it.
struct TabulatedDensity {
  std::vector<double> beta;
  std::vector<double> density;

  void validate() const;
  double operator()(double b) const;
};

struct ErrorBudget {
  double epsilon = 0.0;
  double sigma_width = 0.0;
  double p_err_total = 0.0;
  bool degenerate = false;
};

/// Collects warnings. Functions taking a null pointer print them to stderr.
struct Diagnostics {
  std::vector<std::string> warnings;
};

struct QuadratureOptions {
  double tolerance = 1e-8;
  int max_level = 14;
};

double p_err_single(const ResponseSpectrum& spec, const ThresholdSpec& thr,
                    Diagnostics* diag = nullptr);

double p_err_multi(const ResponseSpectrum& spec, const ThresholdSpec& thr,
                   Diagnostics* diag = nullptr);

double p_err_gaussian(const ResponseSpectrum& spec, const ThresholdSpec& thr,
                      const GaussianPrior& prior, Diagnostics* diag = nullptr);

/// Without a prior this integrates (kappa/pi)|P_ideal - P| over one period.
/// With a density f the integrand is 1 - P f inside the bands and P f
/// outside, which is the functional the Gaussian closed form evaluates.
double p_err_quadrature(const ResponseSpectrum& spec, const ThresholdSpec& thr,
                        const std::optional<GaussianPrior>& prior = std::nullopt,
                        const QuadratureOptions& opts = {});

double p_err_quadrature(const ResponseSpectrum& spec, const ThresholdSpec& thr,
                        const TabulatedDensity& density, const QuadratureOptions& opts = {});

/// Fits the flat-error / transition-width approximation to a sampled curve.
/// Points with |beta| < origin_exclusion are ignored when estimating epsilon.
ErrorBudget fit_error_budget(const ResponseCurve& curve, const ThresholdSpec& thr,
                             double origin_exclusion = 0.0);

}  // namespace gqspi
