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

#include <vector>

#include "gqspi/angles.hpp"

namespace gqspi {

/// Pair (P, Q) of Laurent polynomials in w = e^{i kappa x}. Only exponents
/// n = -d, -d+2, ..., d are stored, at index k = (n + d) / 2.
struct LaurentPoly {
  int degree = 0;
  std::vector<cplx> p;
  std::vector<cplx> q;

  /// Coefficient of w^n; zero for wrong parity or |n| > d.
  cplx p_at(int n) const;
  cplx q_at(int n) const;

  cplx eval_p(cplx w) const;
  cplx eval_q(cplx w) const;
};

/// Closed form of the single-iteration product.
LaurentPoly gqsp_degree1(const PhaseAngles& angles);

/// Coefficient recursion from the degree-0 block of R(theta_0, phi_0, lambda_0).
LaurentPoly gqsp_build(const PhaseAngles& angles);

/// max_s |sum_n (p_n p*_{n+2s} + q_n q*_{n+2s}) - delta_{s0}| over s in [-d, d].
double verify_unitarity(const LaurentPoly& poly);

}  // namespace gqspi
