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

#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "gqspi/angles.hpp"

namespace gqspi {

struct FockConfig {
  int n_max = 32;
  double convergence_tol = 1e-10;

  void validate() const;
};

struct OperatorSet {
  Eigen::MatrixXcd x;
  Eigen::MatrixXcd p;
  Eigen::MatrixXcd n;
};

/// Truncated quadratures x = (a + a^dag)/sqrt2, p = -i(a - a^dag)/sqrt2 and n.
OperatorSet build_operators(const FockConfig& cfg);

/// Eigenpairs of the truncated x. Columns of vectors are eigenvectors in the
/// number basis; shared and cached per dimension.
struct PositionBasis {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};
std::shared_ptr<const PositionBasis> position_basis(int n);

/// Qubit-oscillator amplitudes ordered (down x |0..N-1>, up x |0..N-1>).
struct FockState {
  int n = 0;
  Eigen::VectorXcd amplitudes;

  /// |down>|0>
  static FockState ground(int n);
  double norm() const;
  double prob_down() const;
  /// Population of the top max(2, N/8) number states.
  double leakage() const;
};

namespace gate {
/// R(theta, phi, lambda) = [[e^{i(lambda+phi)} c, e^{i phi} s], [e^{i lambda} s, -c]]
struct QubitRotation {
  double theta, phi, lambda;
};
/// exp(i kappa x sigma_z): +kappa on down, -kappa on up.
struct ConditionalDisplacement {
  double kappa;
};
/// exp(i beta p)
struct Signal {
  double beta;
};
/// exp(-i gamma n)
struct OscillatorRotation {
  double gamma;
};
/// D(alpha) = exp(alpha a^dag - alpha* a) on both qubit blocks.
struct Displacement {
  std::complex<double> alpha;
};
/// D(alpha) on down, D(-alpha) on up.
struct ConditionalDisplacementAlpha {
  std::complex<double> alpha;
};
}  // namespace gate

using Gate = std::variant<gate::QubitRotation, gate::ConditionalDisplacement, gate::Signal,
                          gate::OscillatorRotation, gate::Displacement,
                          gate::ConditionalDisplacementAlpha>;

Gate inverse(const Gate& g);

/// Applies one gate in the number basis. Throws TruncationError when the
/// population of the top levels exceeds cfg.convergence_tol.
FockState apply_gate(const FockState& state, const Gate& g, const FockConfig& cfg);

/// Forward sequence G: R_0, then for i = 1..d: [R_osc(gamma_i)], D_c(kappa), R_i.
std::vector<Gate> gqsp_sequence(const PhaseAngles& angles, double kappa,
                                const std::vector<double>* gammas = nullptr);

/// G, S_beta, G^{-1}.
std::vector<Gate> gqspi_circuit(const PhaseAngles& angles, double kappa, double beta,
                                const std::vector<double>* gammas = nullptr);

struct SimulationResult {
  double probability = 0.0;
  double leakage = 0.0;  // worst top-level population seen in the number basis
  int n_max = 0;
};

/// Runs the gates from |down>|0> at fixed dimension n.
SimulationResult simulate_circuit(const std::vector<Gate>& gates, int n);

/// Starting dimension for the auto-convergence loop.
int truncation_start(double kappa, int degree, double beta, int floor_n = 32);

/// Probability of measuring down after G^{-1} S_beta G with N doubled until
/// two successive dimensions agree within cfg.convergence_tol.
double fock_oracle_response(const PhaseAngles& angles, double kappa, double beta,
                            const FockConfig& cfg,
                            const std::optional<std::vector<double>>& gammas = std::nullopt);

/// Same convergence loop for an arbitrary circuit.
SimulationResult simulate_converged(const std::vector<Gate>& gates, int start_n,
                                    double convergence_tol);

inline constexpr int kMaxFockDimension = 4096;

}  // namespace gqspi
