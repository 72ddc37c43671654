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
#include <vector>

#include "gqspi/angles.hpp"
#include "gqspi/fock.hpp"

namespace gqspi {

struct DephasingSchedule {
  std::vector<double> gammas;
  std::vector<double> cumulative;  // Gamma_i = gamma_1 + ... + gamma_i

  static DephasingSchedule make(std::vector<double> gammas);
  static DephasingSchedule constant(int degree, double gamma);
  int degree() const { return static_cast<int>(gammas.size()); }
  double total() const { return cumulative.empty() ? 0.0 : cumulative.back(); }
};

/// One path through the kicks: s_k = +1 when kick k acts on the down
/// component, -1 on up.
struct SignTerm {
  std::vector<int> signs;
  cplx p;             // amplitude into down
  cplx q;             // amplitude into up
  cplx displacement;  // sum_k s_k alpha'_k
  double phase;       // accumulated composition phase
};

struct SignVectorExpansion {
  int degree = 0;
  double kappa = 0.0;
  /// alpha'_k = (kappa/sqrt2) e^{i(pi/2 + Gamma_k)}, k = 1..d.
  std::vector<cplx> kick_amplitudes;
  std::vector<SignTerm> terms;
};

inline constexpr int kMaxExpansionDegree = 6;
inline constexpr int kMaxQuadrupleDegree = 3;

SignVectorExpansion dephasing_expansion(const PhaseAngles& angles, double kappa,
                                        const DephasingSchedule& sched);

/// (kappa^2/2) sum_{l<k} s_k s_l sin(Gamma_k - Gamma_l)
double composition_phase(double kappa, const DephasingSchedule& sched, const std::vector<int>& signs);

/// sum_k s_k cos(Gamma_d - Gamma_k); the beta dependence of a term pair is
/// e^{i kappa beta (L_s - L_r)}.
double signal_weight(const DephasingSchedule& sched, const std::vector<int>& signs);

double dephasing_response_analytic(const PhaseAngles& angles, double kappa, double beta,
                                   const DephasingSchedule& sched);

struct OrderCheckResult {
  std::vector<double> gammas;  // descending
  std::vector<double> deltas;  // P_noiseless - P_gamma
  double p_noiseless = 0.0;
  double slope = 0.0;
  double omega1 = 0.0;
  std::optional<double> omega2;
  bool indeterminate = false;
};

/// Fits log|Delta| against log gamma using the Fock oracle with a constant
/// schedule, and Delta / P_0 = Omega_1 gamma^2 + Omega_2 beta gamma^3.
OrderCheckResult dephasing_order_check(const PhaseAngles& angles, double kappa, double beta,
                                       std::vector<double> gamma_values, const FockConfig& cfg = {});

}  // namespace gqspi
