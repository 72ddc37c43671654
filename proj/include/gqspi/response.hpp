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

#include <numbers>
#include <vector>

#include "gqspi/laurent_poly.hpp"

namespace gqspi {

/// Coefficients c_s, s = -d..d, of P(down | beta) = sum_s c_s e^{i 2 kappa beta s}.
struct ResponseSpectrum {
  double kappa = 1.0;
  int degree = 0;
  std::vector<cplx> c;

  cplx at(int s) const;
  /// Response period in beta.
  double period() const { return std::numbers::pi / kappa; }
  /// Period of the conditional displacement itself.
  double displacement_period() const { return 2.0 * std::numbers::pi / kappa; }
};

struct ResponseCurve {
  std::vector<double> beta_grid;
  std::vector<double> values;
  double period = 0.0;
};

struct SpectrumCheck {
  double hermitian_deviation;  // max_s |c_{-s} - conj(c_s)|
  double normalization_deviation;  // |sum_s c_s - 1|
};

/// Rank-two factorized evaluation of the coefficient sum, O(d^2).
ResponseSpectrum response_coefficients(const LaurentPoly& poly, double kappa);

/// Literal quadruple sum over n, m, r for each s, O(d^4). Reference path.
ResponseSpectrum response_coefficients_direct(const LaurentPoly& poly, double kappa);

double response_eval(const ResponseSpectrum& spec, double beta);

/// Uniform grid of n_points over [-pi/(2 kappa), pi/(2 kappa)).
ResponseCurve response_curve(const ResponseSpectrum& spec, int n_points);

SpectrumCheck check_spectrum(const ResponseSpectrum& spec);

}  // namespace gqspi
