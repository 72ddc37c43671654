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

#include <cstdlib>

#include "gqspi/optimizer.hpp"
#include "support.hpp"

using namespace gqspi;
using gqspi::testing::kPi;
using gqspi::testing::random_angles;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

namespace {

OptimizationProblem band_problem(int degree, double kappa, double lo, double hi) {
  OptimizationProblem p;
  p.degree = degree;
  p.thresholds = ThresholdSpec{{{lo, hi}}, kappa};
  p.restarts = 4;
  p.seed = 7;
  return p;
}

// Degree-1 cosine family scored in closed form over a symmetric band (-w, w).
double cosine_family_p_err(double theta0, double kappa, double w) {
  double c = std::cos(theta0), s = std::sin(theta0);
  double c0 = c * c * c * c + s * s * s * s, c1 = c * c * s * s;
  double ring = std::sin(2 * kappa * w) / kappa;
  double outside = c0 * (kPi / kappa - 2 * w) - 2 * c1 * ring;
  double inside = 2 * w * (1 - c0) - 2 * c1 * ring;
  return kappa / kPi * (outside + inside);
}

}  // namespace

TEST_CASE("seed derivation", "[optimizer]") {
  SplitMix64 g(0);
  CHECK(g.next() == 0xe220a8397b1dcdafULL);
  CHECK(g.next() == 0x6e789e6aa1b965f4ULL);
  SplitMix64 u(99);
  for (int i = 0; i < 1000; ++i) {
    double x = u.uniform();
    CHECK((x >= 0.0 && x < 1.0));
  }
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  CHECK(derive_seed(5, 3) == derive_seed(5, 3));
}

TEST_CASE("degree 1 symmetric band reaches the scan optimum", "[optimizer][oracle]") {
  const double kappa = 0.1, w = 0.4 * kPi / (2 * kappa);
  double best = 1.0;
  for (int i = 0; i <= 200000; ++i) best = std::min(best, cosine_family_p_err(i * (kPi / 2) / 200000, kappa, w));
  auto res = optimize_angles(band_problem(1, kappa, -w, w));
  CHECK_THAT(res.best_p_err, WithinAbs(best, 1e-4));
  CHECK(res.best_p_err >= best - 1e-9);
  auto spec = response_coefficients(gqsp_build(res.best_angles), kappa);
  CHECK(std::abs(spec.at(1) - spec.at(-1)) < 1e-12);
}

TEST_CASE("optimizer contract", "[optimizer]") {
  const double kappa = 0.05, h = kPi / (2 * kappa);
  auto p = band_problem(3, kappa, -0.25 * h, 0.5 * h);
  auto a = optimize_angles(p);

  SECTION("determinism") {
    auto b = optimize_angles(p);
    CHECK(a.best_angles.to_vector() == b.best_angles.to_vector());
    CHECK(a.best_p_err == b.best_p_err);
    CHECK(a.restart_index == b.restart_index);
  }
  SECTION("thread count does not change the answer") {
    ::setenv("GQSPI_THREADS", "1", 1);
    auto one = optimize_angles(p);
    ::setenv("GQSPI_THREADS", "3", 1);
    auto three = optimize_angles(p);
    ::unsetenv("GQSPI_THREADS");
    CHECK(one.best_angles.to_vector() == three.best_angles.to_vector());
    CHECK(one.best_angles.to_vector() == a.best_angles.to_vector());
  }
  SECTION("never worse than any starting point") {
    REQUIRE(a.restart_initial_p_err.size() == 4);
    for (double init : a.restart_initial_p_err) CHECK(a.best_p_err <= init);
    for (double fin : a.restart_final_p_err) CHECK(a.best_p_err <= fin);
  }
  SECTION("reported loss matches a fresh evaluation") {
    CHECK(objective_value(p, a.best_angles) == a.best_p_err);
    REQUIRE_FALSE(a.trace.empty());
    CHECK(a.trace.back().p_err == a.best_p_err);
  }
  SECTION("a different seed explores differently") {
    auto q = p;
    q.seed = 8;
    CHECK(optimize_angles(q).restart_initial_p_err != a.restart_initial_p_err);
  }
}

TEST_CASE("feasibility over the search space", "[optimizer][property]") {
  SplitMix64 rng(61);
  for (int t = 0; t < 100; ++t) {
    int d = 1 + static_cast<int>(rng.next() % 12);
    std::vector<double> x(2 * d + 3);
    for (auto& v : x) v = 20 * (2 * rng.uniform() - 1);
    auto spec = response_coefficients(gqsp_build(PhaseAngles::from_vector(d, x)), 0.01);
    auto chk = check_spectrum(spec);
    CHECK(chk.hermitian_deviation < 1e-12);
    CHECK(chk.normalization_deviation < 1e-10);
  }
}

TEST_CASE("degree nesting", "[optimizer]") {
  const double kappa = 0.05, h = kPi / (2 * kappa);
  auto p1 = band_problem(1, kappa, -0.5 * h, 0.5 * h);
  auto r1 = optimize_angles(p1);
  auto p3 = band_problem(3, kappa, -0.5 * h, 0.5 * h);
  p3.warm_start = r1.best_angles.padded(3);
  auto r3 = optimize_angles(p3);
  CHECK(r3.best_p_err <= r1.best_p_err + 1e-6);

  auto wrong = p3;
  wrong.warm_start = r1.best_angles;
  CHECK_THROWS_AS(optimize_angles(wrong), std::invalid_argument);
}

TEST_CASE("problem validation and error context", "[optimizer]") {
  auto p = band_problem(2, 0.1, -1.0, 1.0);
  auto bad = p;
  bad.restarts = 0;
  CHECK_THROWS_AS(optimize_angles(bad), std::invalid_argument);
  bad = p;
  bad.objective = Objective::gaussian;
  CHECK_THROWS_AS(optimize_angles(bad), std::invalid_argument);
  bad = p;
  bad.prior = GaussianPrior{0.0, 1.0};
  CHECK_THROWS_AS(optimize_angles(bad), std::invalid_argument);

  auto wide = p;
  wide.objective = Objective::gaussian;
  wide.prior = GaussianPrior{0.0, 500.0};
  CHECK_THROWS_WITH(optimize_angles(wide), ContainsSubstring("restart"));
}

TEST_CASE("scaling table and fit", "[optimizer]") {
  SECTION("exact model") {
    std::vector<int> d{1, 3, 6, 9, 13};
    std::vector<double> p;
    for (int x : d) p.push_back(0.2 * std::log(std::max(x, 2)) / x);
    auto fit = fit_log_over_d(d, p);
    CHECK(fit.points == 4);
    CHECK_THAT(fit.a, WithinAbs(0.2, 1e-12));
    CHECK_THAT(fit.r_squared, WithinAbs(1.0, 1e-12));
    CHECK_THAT(fit.r_squared_centered, WithinAbs(1.0, 1e-12));
    CHECK_THAT(fit.log_residual_rms, WithinAbs(0.0, 1e-12));
  }
  SECTION("too few degrees") {
    const double kappa = 0.05, h = kPi / (2 * kappa);
    auto base = band_problem(0, kappa, -0.25 * h, 0.5 * h);
    base.restarts = 2;
    auto one = scaling_study(base, {2});
    CHECK(one.rows.size() == 1);
    CHECK_FALSE(one.fit.has_value());
    auto three = scaling_study(base, {1, 3, 5, 7});
    REQUIRE(three.fit.has_value());
    for (std::size_t i = 1; i < three.rows.size(); ++i) {
      CHECK(three.rows[i].p_err <= three.rows[i - 1].p_err + 1e-6);
    }
    CHECK_THROWS_AS(scaling_study(base, {3, 1}), std::invalid_argument);
  }
}
