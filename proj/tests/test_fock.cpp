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


#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "gqspi/errors.hpp"
#include "gqspi/fock.hpp"
#include "gqspi/response.hpp"
#include "support.hpp"

using namespace gqspi;
using gqspi::testing::kPi;
using gqspi::testing::random_angles;
using Catch::Matchers::WithinAbs;

namespace {

FockState run(FockState s, const std::vector<Gate>& gates, const FockConfig& cfg) {
  for (const auto& g : gates) s = apply_gate(s, g, cfg);
  return s;
}

std::vector<Gate> inverted(const std::vector<Gate>& gates) {
  std::vector<Gate> out;
  for (auto it = gates.rbegin(); it != gates.rend(); ++it) out.push_back(inverse(*it));
  return out;
}

}  // namespace

TEST_CASE("truncated ladder operators", "[fock]") {
  auto two = build_operators(FockConfig{2, 1e-10});
  CHECK(std::abs(two.x(0, 0)) < 1e-15);
  CHECK(std::abs(two.x(0, 1) - 1 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(two.x(1, 0) - 1 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(two.x(1, 1)) < 1e-15);

  auto three = build_operators(FockConfig{3, 1e-10});
  Eigen::MatrixXcd n3 = Eigen::Vector3cd(0, 1, 2).asDiagonal();
  CHECK((three.n - n3).cwiseAbs().maxCoeff() < 1e-15);

  auto big = build_operators(FockConfig{64, 1e-10});
  Eigen::MatrixXcd comm = big.x * big.p - big.p * big.x;
  Eigen::MatrixXcd dev = comm.topLeftCorner(32, 32) - cplx(0, 1) * Eigen::MatrixXcd::Identity(32, 32);
  CHECK(dev.cwiseAbs().maxCoeff() < 1e-12);
  CHECK((big.x - big.x.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((big.p - big.p.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK_THROWS_AS(build_operators(FockConfig{1, 1e-10}), std::invalid_argument);
}

TEST_CASE("single gates", "[fock]") {
  FockConfig cfg{64, 1e-10};
  auto vac = FockState::ground(64);

  SECTION("oscillator rotation fixes the vacuum") {
    auto s = apply_gate(vac, gate::OscillatorRotation{0.7}, cfg);
    CHECK((s.amplitudes - vac.amplitudes).cwiseAbs().maxCoeff() < 1e-12);
  }
  SECTION("signal displaces the position") {
    const double beta = 2.0;
    auto ops = build_operators(cfg);
    auto s = apply_gate(vac, gate::Signal{beta}, cfg);
    Eigen::VectorXcd down = s.amplitudes.head(64);
    double mean_x = (down.adjoint() * ops.x * down)(0, 0).real();
    double mean_p = (down.adjoint() * ops.p * down)(0, 0).real();
    // signal acts as exp(i beta p): position moves by -beta
    CHECK_THAT(mean_x, WithinAbs(-beta, 1e-8));
    CHECK_THAT(mean_p, WithinAbs(0.0, 1e-8));
    CHECK_THAT(s.norm(), WithinAbs(1.0, 1e-12));
  }
  SECTION("conditional displacement is undone by its inverse") {
    auto s = apply_gate(vac, gate::QubitRotation{0.4, 0.3, -1.1}, cfg);
    s = apply_gate(s, gate::Signal{0.8}, cfg);
    auto t = apply_gate(s, gate::ConditionalDisplacement{0.6}, cfg);
    t = apply_gate(t, inverse(gate::ConditionalDisplacement{0.6}), cfg);
    CHECK((t.amplitudes - s.amplitudes).cwiseAbs().maxCoeff() < 1e-10);
  }
  SECTION("qubit rotation inverse") {
    gate::QubitRotation r{1.3, -0.4, 2.2};
    auto s = apply_gate(apply_gate(vac, r, cfg), inverse(r), cfg);
    CHECK((s.amplitudes - vac.amplitudes).cwiseAbs().maxCoeff() < 1e-14);
  }
  SECTION("general displacement along the momentum axis equals the signal") {
    const double beta = 1.5;
    auto a = apply_gate(vac, gate::Signal{beta}, cfg);
    auto b = apply_gate(vac, gate::Displacement{cplx(-beta / std::sqrt(2.0), 0.0)}, cfg);
    CHECK((a.amplitudes - b.amplitudes).cwiseAbs().maxCoeff() < 1e-10);
  }
  SECTION("leakage is reported") {
    FockConfig tiny{8, 1e-10};
    CHECK_THROWS_AS(apply_gate(FockState::ground(8), gate::Signal{5.0}, tiny), TruncationError);
  }
}

TEST_CASE("sequence followed by its inverse is the identity", "[fock][property]") {
  SplitMix64 rng(41);
  FockConfig cfg{256, 1e-10};
  for (int d : {1, 2, 4}) {
    auto a = random_angles(rng, d);
    std::vector<double> gammas(d);
    for (auto& g : gammas) g = 0.3 * (2 * rng.uniform() - 1);
    auto seq = gqsp_sequence(a, 0.3, &gammas);
    auto fwd = run(FockState::ground(256), seq, cfg);
    auto back = run(fwd, inverted(seq), cfg);
    CHECK((back.amplitudes - FockState::ground(256).amplitudes).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("oracle response", "[fock][oracle]") {
  FockConfig cfg;
  SECTION("degree 0") {
    for (double beta : {0.0, 1.3, -4.0}) {
      CHECK_THAT(fock_oracle_response(PhaseAngles({0.8}, {0.2}, 0.5), 0.25, beta, cfg), WithinAbs(1.0, 1e-10));
    }
  }
  SECTION("cosine zero") {
    const double kappa = 0.25;
    PhaseAngles a({kPi / 4, kPi / 2}, {0, 0}, 0);
    CHECK_THAT(fock_oracle_response(a, kappa, kPi / (2 * kappa), cfg), WithinAbs(0.0, 1e-6));
  }
  SECTION("agrees with the analytic response") {
    SplitMix64 rng(42);
    for (int d = 1; d <= 5; ++d) {
      auto a = random_angles(rng, d);
      auto spec = response_coefficients(gqsp_build(a), 0.25);
      for (int t = 0; t < 3; ++t) {
        double beta = (2 * rng.uniform() - 1) * kPi / (2 * 0.25);
        CHECK_THAT(fock_oracle_response(a, 0.25, beta, cfg), WithinAbs(response_eval(spec, beta), 1e-6));
      }
    }
  }
  SECTION("dephasing cancels without a signal") {
    SplitMix64 rng(43);
    auto a = random_angles(rng, 3);
    CHECK_THAT(fock_oracle_response(a, 0.3, 0.0, cfg, std::vector<double>{0.05, 0.05, 0.05}),
               WithinAbs(1.0, 1e-10));
  }
  SECTION("schedule length is checked") {
    CHECK_THROWS_AS(fock_oracle_response(PhaseAngles::zeros(2), 0.3, 1.0, cfg, std::vector<double>{0.1}),
                    std::invalid_argument);
  }
}

TEST_CASE("truncation starting size", "[fock]") {
  CHECK(truncation_start(0.25, 0, 0.0) == 64);
  for (double beta : {0.0, 3.0, 10.0, 25.0}) {
    int n = truncation_start(0.1, 5, beta);
    CHECK(n >= 32);
    CHECK((n & (n - 1)) == 0);
    double amp = (beta + 2 * 0.1 * 5) / std::sqrt(2.0);
    CHECK(n >= (amp + 8) * (amp + 8));
  }
}
