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

#include "gqspi/dephasing.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "gqspi/errors.hpp"

namespace gqspi {

DephasingSchedule DephasingSchedule::make(std::vector<double> gammas) {
  DephasingSchedule s;
  s.gammas = std::move(gammas);
  s.cumulative.resize(s.gammas.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < s.gammas.size(); ++i) {
    if (!std::isfinite(s.gammas[i])) throw std::invalid_argument("dephasing angle is not finite");
    acc += s.gammas[i];
    s.cumulative[i] = acc;
  }
  return s;
}

DephasingSchedule DephasingSchedule::constant(int degree, double gamma) {
  if (degree < 0) throw std::invalid_argument("degree must be non-negative");
  return make(std::vector<double>(static_cast<std::size_t>(degree), gamma));
}

double composition_phase(double kappa, const DephasingSchedule& sched, const std::vector<int>& signs) {
  double acc = 0.0;
  for (std::size_t k = 0; k < signs.size(); ++k) {
    for (std::size_t l = 0; l < k; ++l) {
      acc += signs[k] * signs[l] * std::sin(sched.cumulative[k] - sched.cumulative[l]);
    }
  }
  return 0.5 * kappa * kappa * acc;
}

double signal_weight(const DephasingSchedule& sched, const std::vector<int>& signs) {
  double acc = 0.0;
  for (std::size_t k = 0; k < signs.size(); ++k) {
    acc += signs[k] * std::cos(sched.total() - sched.cumulative[k]);
  }
  return acc;
}

SignVectorExpansion dephasing_expansion(const PhaseAngles& angles, double kappa,
                                        const DephasingSchedule& sched) {
  const int d = angles.degree();
  if (d > kMaxExpansionDegree) {
    throw CapacityError("sign-vector expansion is limited to degree " +
                        std::to_string(kMaxExpansionDegree) + "; use the Fock oracle");
  }
  if (sched.degree() != d) throw std::invalid_argument("schedule length must equal the degree");
  if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");

  SignVectorExpansion out;
  out.degree = d;
  out.kappa = kappa;
  for (int k = 0; k < d; ++k) {
    out.kick_amplitudes.push_back(
        std::polar(kappa / std::numbers::sqrt2, std::numbers::pi / 2 + sched.cumulative[static_cast<std::size_t>(k)]));
  }
  const auto& th = angles.theta();
  const auto& ph = angles.phi();
  std::vector<SignTerm> terms{{{},
                               std::polar(std::cos(th[0]), angles.lambda0() + ph[0]),
                               std::polar(std::sin(th[0]), angles.lambda0()),
                               cplx{},
                               0.0}};
  for (int k = 1; k <= d; ++k) {
    auto u = static_cast<std::size_t>(k);
    cplx ak = out.kick_amplitudes[u - 1];
    double c = std::cos(th[u]), s = std::sin(th[u]);
    cplx ef = std::polar(1.0, ph[u]);
    std::vector<SignTerm> next;
    next.reserve(2 * terms.size());
    for (const auto& t : terms) {
      for (int sign : {+1, -1}) {
        SignTerm n;
        n.signs = t.signs;
        n.signs.push_back(sign);
        // D(s a_k) D(A) = e^{i s Im(a_k A*)} D(A + s a_k)
        n.displacement = t.displacement + double(sign) * ak;
        n.phase = t.phase + sign * std::imag(ak * std::conj(t.displacement));
        if (sign > 0) {
          n.p = ef * c * t.p;
          n.q = s * t.p;
        } else {
          n.p = ef * s * t.q;
          n.q = -c * t.q;
        }
        next.push_back(std::move(n));
      }
    }
    terms.swap(next);
  }
  out.terms = std::move(terms);
  return out;
}

double dephasing_response_analytic(const PhaseAngles& angles, double kappa, double beta,
                                   const DephasingSchedule& sched) {
  if (angles.degree() > kMaxQuadrupleDegree) {
    throw CapacityError("quadruple sign-vector sum is limited to degree " +
                        std::to_string(kMaxQuadrupleDegree) + "; use the Fock oracle");
  }
  SignVectorExpansion ex = dephasing_expansion(angles, kappa, sched);
  const auto& T = ex.terms;
  const std::size_t m = T.size();
  std::vector<double> weight(m);
  for (std::size_t i = 0; i < m; ++i) weight[i] = signal_weight(sched, T[i].signs);

  // Pair (s, s') amplitude K and residual displacement F = A_{s'} - A_s of
  // D(A_s)^dag S D(A_{s'}), with S rotated by the accumulated dephasing.
  std::vector<cplx> K, F;
  K.reserve(m * m);
  F.reserve(m * m);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      cplx overlap = std::conj(T[a].p) * T[b].p + std::conj(T[a].q) * T[b].q;
      double theta = T[b].phase - T[a].phase + kappa * beta * weight[a] -
                     std::imag(T[a].displacement * std::conj(T[b].displacement));
      K.push_back(overlap * std::polar(1.0, theta));
      F.push_back(T[b].displacement - T[a].displacement);
    }
  }
  cplx total{};
  for (std::size_t r = 0; r < K.size(); ++r) {
    cplx row{};
    for (std::size_t s = 0; s < K.size(); ++s) {
      cplx alpha = F[s] - F[r];
      double phase = -std::imag(F[r] * std::conj(F[s]));
      row += K[s] * std::polar(std::exp(-0.5 * std::norm(alpha)), phase);
    }
    total += std::conj(K[r]) * row;
  }
  if (std::abs(total.imag()) > 1e-8) {
    std::ostringstream msg;
    msg << "dephased response has imaginary residue " << total.imag();
    throw ConsistencyError(msg.str());
  }
  return total.real();
}

OrderCheckResult dephasing_order_check(const PhaseAngles& angles, double kappa, double beta,
                                       std::vector<double> gamma_values, const FockConfig& cfg) {
  if (gamma_values.size() < 4) throw std::invalid_argument("order check needs at least 4 gamma values");
  for (double g : gamma_values) {
    if (!(g > 0.0 && g <= 0.1)) throw std::invalid_argument("gamma values must lie in (0, 0.1]");
  }
  std::sort(gamma_values.begin(), gamma_values.end(), std::greater<>());
  if (std::adjacent_find(gamma_values.begin(), gamma_values.end()) != gamma_values.end()) {
    throw std::invalid_argument("gamma values must be distinct");
  }
  const int d = angles.degree();
  OrderCheckResult out;
  out.gammas = gamma_values;
  out.p_noiseless = fock_oracle_response(angles, kappa, beta, cfg);
  for (double g : gamma_values) {
    std::vector<double> sched(static_cast<std::size_t>(d), g);
    out.deltas.push_back(out.p_noiseless - fock_oracle_response(angles, kappa, beta, cfg, sched));
  }
  const double floor = 1e-12;
  out.indeterminate = std::any_of(out.deltas.begin(), out.deltas.end(),
                                  [floor](double v) { return std::abs(v) < floor; });
  if (out.indeterminate) {
    out.slope = std::numeric_limits<double>::quiet_NaN();
    out.omega1 = std::numeric_limits<double>::quiet_NaN();
    return out;
  }

  const auto n = static_cast<double>(gamma_values.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < gamma_values.size(); ++i) {
    double x = std::log(gamma_values[i]), y = std::log(std::abs(out.deltas[i]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  out.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);

  // Delta / P0 = w1 g^2 + w2 g^3 by normal equations.
  double a11 = 0, a12 = 0, a22 = 0, b1 = 0, b2 = 0;
  for (std::size_t i = 0; i < gamma_values.size(); ++i) {
    double g2 = gamma_values[i] * gamma_values[i], g3 = g2 * gamma_values[i];
    double y = out.deltas[i] / out.p_noiseless;
    a11 += g2 * g2;
    a12 += g2 * g3;
    a22 += g3 * g3;
    b1 += g2 * y;
    b2 += g3 * y;
  }
  double det = a11 * a22 - a12 * a12;
  double w1 = (b1 * a22 - b2 * a12) / det;
  double w2 = (a11 * b2 - a12 * b1) / det;
  out.omega1 = w1;
  if (beta != 0.0) out.omega2 = w2 / beta;
  return out;
}

}  // namespace gqspi
