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

#include "gqspi/fock.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "gqspi/errors.hpp"

namespace gqspi {

namespace {

using cplx = std::complex<double>;

int leakage_rows(int n) { return std::max(2, n / 8); }

// State kept as an N x 4 real matrix (re down, im down, re up, im up) in
// whichever basis makes the next gate diagonal.
class Propagator {
 public:
  enum class Basis { Number, Position, Momentum };

  Propagator(int n, const Eigen::VectorXcd& amps)
      : n_(n), basis_(position_basis(n)), m_(n, 4), buf_(n, 4) {
    for (int i = 0; i < n; ++i) {
      m_(i, 0) = amps[i].real();
      m_(i, 1) = amps[i].imag();
      m_(i, 2) = amps[n + i].real();
      m_(i, 3) = amps[n + i].imag();
    }
  }

  void apply(const Gate& g) {
    std::visit([this](const auto& v) { this->apply_one(v); }, g);
  }

  Eigen::VectorXcd amplitudes() {
    to(Basis::Number);
    Eigen::VectorXcd out(2 * n_);
    for (int i = 0; i < n_; ++i) {
      out[i] = cplx(m_(i, 0), m_(i, 1));
      out[n_ + i] = cplx(m_(i, 2), m_(i, 3));
    }
    return out;
  }

  double prob_down() const { return m_.col(0).squaredNorm() + m_.col(1).squaredNorm(); }
  double worst_leakage() const { return worst_leakage_; }

  void to(Basis target) {
    if (target == current_) return;
    if (current_ != Basis::Number) {
      buf_.noalias() = basis_->vectors * m_;
      m_.swap(buf_);
      if (current_ == Basis::Momentum) quarter_turns(+1);
      current_ = Basis::Number;
      check_number_basis();
    }
    if (target == Basis::Number) return;
    if (target == Basis::Momentum) quarter_turns(-1);
    buf_.noalias() = basis_->vectors.transpose() * m_;
    m_.swap(buf_);
    current_ = target;
  }

  void finish() { to(Basis::Number); }

 private:
  // Multiplies row k by i^(sign * k), the map between x and p eigenbases.
  void quarter_turns(int sign) {
    for (int k = 0; k < n_; ++k) {
      int q = ((sign * k) % 4 + 4) % 4;
      for (int c = 0; c < 4; c += 2) {
        double re = m_(k, c), im = m_(k, c + 1);
        switch (q) {
          case 1: m_(k, c) = -im; m_(k, c + 1) = re; break;
          case 2: m_(k, c) = -re; m_(k, c + 1) = -im; break;
          case 3: m_(k, c) = im; m_(k, c + 1) = -re; break;
          default: break;
        }
      }
    }
  }

  void rotate_row(int k, int col, double angle) {
    double c = std::cos(angle), s = std::sin(angle);
    double re = m_(k, col), im = m_(k, col + 1);
    m_(k, col) = c * re - s * im;
    m_(k, col + 1) = s * re + c * im;
  }

  void check_number_basis() {
    double total = m_.squaredNorm();
    if (std::abs(total - 1.0) > 1e-10) {
      std::ostringstream msg;
      msg << "state norm drifted to " << total;
      throw ConsistencyError(msg.str());
    }
    int top = leakage_rows(n_);
    double leak = m_.bottomRows(top).squaredNorm();
    worst_leakage_ = std::max(worst_leakage_, leak);
  }

  void apply_one(const gate::QubitRotation& g) {
    double c = std::cos(g.theta), s = std::sin(g.theta);
    cplx r00 = std::polar(c, g.lambda + g.phi), r01 = std::polar(s, g.phi);
    cplx r10 = std::polar(s, g.lambda), r11 = -c;
    for (int k = 0; k < n_; ++k) {
      cplx dn(m_(k, 0), m_(k, 1)), up(m_(k, 2), m_(k, 3));
      cplx a = r00 * dn + r01 * up, b = r10 * dn + r11 * up;
      m_(k, 0) = a.real();
      m_(k, 1) = a.imag();
      m_(k, 2) = b.real();
      m_(k, 3) = b.imag();
    }
  }

  void position_kick(double down_scale, double up_scale) {
    to(Basis::Position);
    for (int k = 0; k < n_; ++k) {
      double x = basis_->values[k];
      rotate_row(k, 0, down_scale * x);
      rotate_row(k, 2, up_scale * x);
    }
  }

  void apply_one(const gate::ConditionalDisplacement& g) { position_kick(g.kappa, -g.kappa); }

  void apply_one(const gate::Signal& g) {
    to(Basis::Momentum);
    for (int k = 0; k < n_; ++k) {
      double a = g.beta * basis_->values[k];
      rotate_row(k, 0, a);
      rotate_row(k, 2, a);
    }
  }

  void apply_one(const gate::OscillatorRotation& g) {
    to(Basis::Number);
    for (int k = 0; k < n_; ++k) {
      rotate_row(k, 0, -g.gamma * k);
      rotate_row(k, 2, -g.gamma * k);
    }
  }

  // D(alpha) = R_osc(phi)^dag exp(i sqrt2 |alpha| x) R_osc(phi), phi = atan2(-Re a, Im a).
  void displacement(cplx alpha, bool conditional) {
    double mag = std::abs(alpha);
    if (mag == 0.0) return;
    double phi = std::atan2(-alpha.real(), alpha.imag());
    apply_one(gate::OscillatorRotation{phi});
    double k = std::numbers::sqrt2 * mag;
    position_kick(k, conditional ? -k : k);
    apply_one(gate::OscillatorRotation{-phi});
  }

  void apply_one(const gate::Displacement& g) { displacement(g.alpha, false); }
  void apply_one(const gate::ConditionalDisplacementAlpha& g) { displacement(g.alpha, true); }

  int n_;
  std::shared_ptr<const PositionBasis> basis_;
  Eigen::MatrixXd m_;
  Eigen::MatrixXd buf_;
  Basis current_ = Basis::Number;
  double worst_leakage_ = 0.0;
};

}  // namespace

void FockConfig::validate() const {
  if (n_max < 2) throw std::invalid_argument("n_max must be at least 2");
  if (n_max > kMaxFockDimension) throw std::invalid_argument("n_max exceeds the supported maximum");
  if (!(convergence_tol > 0.0)) throw std::invalid_argument("convergence_tol must be positive");
}

OperatorSet build_operators(const FockConfig& cfg) {
  cfg.validate();
  const int n = cfg.n_max;
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
  for (int k = 0; k + 1 < n; ++k) a(k, k + 1) = std::sqrt(double(k + 1));
  Eigen::MatrixXcd ad = a.adjoint();
  OperatorSet ops;
  ops.x = (a + ad) / std::numbers::sqrt2;
  ops.p = cplx(0, -1) * (a - ad) / std::numbers::sqrt2;
  ops.n = Eigen::MatrixXcd::Zero(n, n);
  for (int k = 0; k < n; ++k) ops.n(k, k) = k;
  return ops;
}

std::shared_ptr<const PositionBasis> position_basis(int n) {
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const PositionBasis>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
  }
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(n - 1);
  for (int k = 0; k + 1 < n; ++k) sub[k] = std::sqrt((k + 1) / 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) throw ConvergenceError("position eigensolver failed");
  auto basis = std::make_shared<PositionBasis>(PositionBasis{es.eigenvalues(), es.eigenvectors()});
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(n, std::move(basis)).first->second;
}

FockState FockState::ground(int n) {
  if (n < 2) throw std::invalid_argument("dimension must be at least 2");
  FockState s;
  s.n = n;
  s.amplitudes = Eigen::VectorXcd::Zero(2 * n);
  s.amplitudes[0] = 1.0;
  return s;
}

double FockState::norm() const { return amplitudes.norm(); }

double FockState::prob_down() const { return amplitudes.head(n).squaredNorm(); }

double FockState::leakage() const {
  int top = leakage_rows(n);
  return amplitudes.segment(n - top, top).squaredNorm() +
         amplitudes.segment(2 * n - top, top).squaredNorm();
}

Gate inverse(const Gate& g) {
  return std::visit(
      [](const auto& v) -> Gate {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, gate::QubitRotation>) {
          return gate::QubitRotation{v.theta, -v.lambda, -v.phi};
        } else if constexpr (std::is_same_v<T, gate::ConditionalDisplacement>) {
          return gate::ConditionalDisplacement{-v.kappa};
        } else if constexpr (std::is_same_v<T, gate::Signal>) {
          return gate::Signal{-v.beta};
        } else if constexpr (std::is_same_v<T, gate::OscillatorRotation>) {
          return gate::OscillatorRotation{-v.gamma};
        } else {
          return T{-v.alpha};
        }
      },
      g);
}

FockState apply_gate(const FockState& state, const Gate& g, const FockConfig& cfg) {
  if (state.amplitudes.size() != 2 * state.n) throw std::invalid_argument("malformed FockState");
  Propagator prop(state.n, state.amplitudes);
  prop.apply(g);
  FockState out{state.n, prop.amplitudes()};
  double leak = out.leakage();
  if (leak > cfg.convergence_tol) {
    std::ostringstream msg;
    msg << "truncation leakage " << leak << " at N = " << state.n << "; increase n_max";
    throw TruncationError(msg.str());
  }
  return out;
}

std::vector<Gate> gqsp_sequence(const PhaseAngles& angles, double kappa,
                                const std::vector<double>* gammas) {
  const int d = angles.degree();
  if (gammas && static_cast<int>(gammas->size()) != d) {
    throw std::invalid_argument("need one dephasing angle per iteration");
  }
  std::vector<Gate> seq;
  seq.emplace_back(gate::QubitRotation{angles.theta()[0], angles.phi()[0], angles.lambda0()});
  for (int i = 1; i <= d; ++i) {
    auto u = static_cast<std::size_t>(i);
    if (gammas) seq.emplace_back(gate::OscillatorRotation{(*gammas)[u - 1]});
    seq.emplace_back(gate::ConditionalDisplacement{kappa});
    seq.emplace_back(gate::QubitRotation{angles.theta()[u], angles.phi()[u], 0.0});
  }
  return seq;
}

std::vector<Gate> gqspi_circuit(const PhaseAngles& angles, double kappa, double beta,
                                const std::vector<double>* gammas) {
  std::vector<Gate> seq = gqsp_sequence(angles, kappa, gammas);
  std::vector<Gate> out(seq);
  out.emplace_back(gate::Signal{beta});
  for (auto it = seq.rbegin(); it != seq.rend(); ++it) out.push_back(inverse(*it));
  return out;
}

SimulationResult simulate_circuit(const std::vector<Gate>& gates, int n) {
  FockState init = FockState::ground(n);
  Propagator prop(n, init.amplitudes);
  for (const auto& g : gates) prop.apply(g);
  prop.finish();
  return {prop.prob_down(), prop.worst_leakage(), n};
}

int truncation_start(double kappa, int degree, double beta, int floor_n) {
  double reach = (std::abs(beta) + 2.0 * std::abs(kappa) * degree) / std::numbers::sqrt2;
  double need = (reach + 8.0) * (reach + 8.0);
  int n = std::max(floor_n, 32);
  while (n < need && n < kMaxFockDimension) n *= 2;
  return n;
}

SimulationResult simulate_converged(const std::vector<Gate>& gates, int start_n,
                                    double convergence_tol) {
  int n = std::min(start_n, kMaxFockDimension / 2);
  SimulationResult prev = simulate_circuit(gates, n);
  while (true) {
    if (2 * n > kMaxFockDimension) {
      std::ostringstream msg;
      msg << "Fock truncation did not converge by N = " << kMaxFockDimension
          << "; top-level leakage " << prev.leakage;
      throw TruncationError(msg.str());
    }
    SimulationResult cur = simulate_circuit(gates, 2 * n);
    if (std::abs(cur.probability - prev.probability) < convergence_tol &&
        cur.leakage < convergence_tol) {
      return cur;
    }
    prev = cur;
    n *= 2;
  }
}

double fock_oracle_response(const PhaseAngles& angles, double kappa, double beta,
                            const FockConfig& cfg,
                            const std::optional<std::vector<double>>& gammas) {
  cfg.validate();
  const std::vector<double>* g = gammas ? &*gammas : nullptr;
  auto circuit = gqspi_circuit(angles, kappa, beta, g);
  int start = truncation_start(kappa, angles.degree(), beta, cfg.n_max);
  return simulate_converged(circuit, start, cfg.convergence_tol).probability;
}

}  // namespace gqspi
