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

#include <cmath>
#include <complex>
#include <numbers>
#include <utility>
#include <vector>

#include "gqspi/angles.hpp"
#include "gqspi/optimizer.hpp"

namespace gqspi::testing {

inline constexpr double kPi = std::numbers::pi;

inline PhaseAngles random_angles(SplitMix64& rng, int degree) {
  std::vector<double> theta(degree + 1), phi(degree + 1);
  for (auto& t : theta) t = (2.0 * rng.uniform() - 1.0) * kPi;
  for (auto& p : phi) p = (2.0 * rng.uniform() - 1.0) * kPi;
  return PhaseAngles(theta, phi, (2.0 * rng.uniform() - 1.0) * kPi);
}

// Product of explicit 2x2 factors applied to |down>, evaluated at w.
inline std::pair<cplx, cplx> matrix_oracle(const PhaseAngles& a, cplx w) {
  auto rot = [](double th, double ph, double la, cplx u, cplx v) {
    const double c = std::cos(th), s = std::sin(th);
    const cplx eph = std::polar(1.0, ph), ela = std::polar(1.0, la);
    return std::pair<cplx, cplx>{eph * ela * c * u + eph * s * v, ela * s * u - c * v};
  };
  auto [u, v] = rot(a.theta()[0], a.phi()[0], a.lambda0(), 1.0, 0.0);
  for (int j = 1; j <= a.degree(); ++j) {
    std::tie(u, v) = rot(a.theta()[j], a.phi()[j], 0.0, w * u, v / w);
  }
  return {u, v};
}

}  // namespace gqspi::testing
