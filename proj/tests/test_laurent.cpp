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

#include <stdexcept>

#include "gqspi/laurent_poly.hpp"
#include "support.hpp"

using namespace gqspi;
using gqspi::testing::kPi;
using Catch::Matchers::WithinAbs;

namespace {

void require_coeff(cplx got, cplx want, double tol = 1e-14) {
  CHECK(std::abs(got - want) < tol);
}

}  // namespace

TEST_CASE("degree-1 closed form", "[laurent]") {
  SECTION("identity angles") {
    auto lp = gqsp_degree1(PhaseAngles({0, 0}, {0, 0}, 0));
    require_coeff(lp.p_at(1), 1.0);
    require_coeff(lp.p_at(-1), 0.0);
    require_coeff(lp.q_at(1), 0.0);
    require_coeff(lp.q_at(-1), 0.0);
  }
  SECTION("quarter turns") {
    auto lp = gqsp_degree1(PhaseAngles({kPi / 4, kPi / 4}, {0, 0}, 0));
    require_coeff(lp.p_at(1), 0.5);
    require_coeff(lp.p_at(-1), 0.5);
    require_coeff(lp.q_at(1), 0.5);
    require_coeff(lp.q_at(-1), -0.5);
  }
  SECTION("swap") {
    auto lp = gqsp_degree1(PhaseAngles({kPi / 2, 0}, {0, 0}, 0));
    require_coeff(lp.p_at(1), 0.0);
    require_coeff(lp.p_at(-1), 0.0);
    require_coeff(lp.q_at(1), 0.0);
    require_coeff(lp.q_at(-1), -1.0);
  }
  SECTION("wrong degree") {
    CHECK_THROWS_AS(gqsp_degree1(PhaseAngles::zeros(2)), std::invalid_argument);
  }
}

TEST_CASE("recursion agrees with degree-1 closed form", "[laurent]") {
  SplitMix64 rng(11);
  for (int t = 0; t < 200; ++t) {
    auto a = gqspi::testing::random_angles(rng, 1);
    auto x = gqsp_build(a), y = gqsp_degree1(a);
    for (int n = -1; n <= 1; n += 2) {
      require_coeff(x.p_at(n), y.p_at(n));
      require_coeff(x.q_at(n), y.q_at(n));
    }
  }
}

TEST_CASE("degree 0 is a bare rotation", "[laurent]") {
  auto lp = gqsp_build(PhaseAngles::zeros(0));
  require_coeff(lp.p_at(0), 1.0);
  require_coeff(lp.q_at(0), 0.0);
  CHECK(verify_unitarity(lp) == 0.0);
}

TEST_CASE("unitarity of built polynomials", "[laurent][property]") {
  SplitMix64 rng(12);
  for (int d : {3, 8}) {
    auto lp = gqsp_build(gqspi::testing::random_angles(rng, d));
    CHECK(verify_unitarity(lp) < 1e-12);
  }
  for (int t = 0; t < 300; ++t) {
    int d = 1 + static_cast<int>(rng.next() % 32);
    CHECK(verify_unitarity(gqsp_build(gqspi::testing::random_angles(rng, d))) < 1e-12);
  }
}

TEST_CASE("unnormalized polynomial is detected", "[laurent]") {
  LaurentPoly lp;
  lp.degree = 1;
  lp.p = {1.0, 0.1};
  lp.q = {0.0, 0.0};
  CHECK(verify_unitarity(lp) > 0.0);
}

TEST_CASE("parity and support", "[laurent][property]") {
  SplitMix64 rng(13);
  for (int d = 0; d <= 9; ++d) {
    auto lp = gqsp_build(gqspi::testing::random_angles(rng, d));
    CHECK(lp.p.size() == static_cast<std::size_t>(d + 1));
    CHECK(lp.q.size() == static_cast<std::size_t>(d + 1));
    for (int n = -d - 2; n <= d + 2; ++n) {
      if ((n + d) % 2 != 0 || n < -d || n > d) {
        CHECK(lp.p_at(n) == cplx(0.0));
        CHECK(lp.q_at(n) == cplx(0.0));
      }
    }
  }
}

TEST_CASE("explicit 2x2 product agrees with the polynomial", "[laurent][oracle]") {
  SplitMix64 rng(14);
  for (int d = 0; d <= 12; ++d) {
    auto a = gqspi::testing::random_angles(rng, d);
    auto lp = gqsp_build(a);
    for (int t = 0; t < 20; ++t) {
      cplx w = std::polar(1.0, 2 * kPi * rng.uniform());
      auto [p, q] = gqspi::testing::matrix_oracle(a, w);
      CHECK(std::abs(lp.eval_p(w) - p) < 1e-12);
      CHECK(std::abs(lp.eval_q(w) - q) < 1e-12);
      CHECK_THAT(std::norm(p) + std::norm(q), WithinAbs(1.0, 1e-12));
    }
  }
}

TEST_CASE("padding rules", "[laurent]") {
  SplitMix64 rng(15);
  auto a = gqspi::testing::random_angles(rng, 5);
  auto b = a.padded(7);
  CHECK(b.degree() == 7);
  CHECK(verify_unitarity(gqsp_build(b)) < 1e-12);
  CHECK(a.padded(5) == a);
  CHECK_THROWS_AS(a.padded(6), std::invalid_argument);
  CHECK_THROWS_AS(a.padded(3), std::invalid_argument);
}

TEST_CASE("angle vector round trip and canonical range", "[angles]") {
  SplitMix64 rng(16);
  auto a = gqspi::testing::random_angles(rng, 4);
  auto v = a.to_vector();
  CHECK(v.size() == 11);
  CHECK(PhaseAngles::from_vector(4, v) == a);
  PhaseAngles w({3 * kPi, -kPi}, {7.0, 0.0}, -9.0);
  for (double t : w.theta()) CHECK((t >= -kPi && t < kPi));
  CHECK(canonical_angle(kPi) == Catch::Approx(-kPi));
  CHECK_THROWS_AS(PhaseAngles({0.0, 1.0}, {0.0}, 0.0), std::invalid_argument);
}
