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

#include "gqspi/angles.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace gqspi {

double canonical_angle(double a) {
  if (!std::isfinite(a)) throw std::invalid_argument("angle is not finite");
  constexpr double kPi = std::numbers::pi;
  if (a >= -kPi && a < kPi) return a;
  double r = a - 2.0 * kPi * std::floor((a + kPi) / (2.0 * kPi));
  if (r >= kPi) r -= 2.0 * kPi;
  if (r < -kPi) r = -kPi;
  return r;
}

PhaseAngles::PhaseAngles(std::vector<double> theta, std::vector<double> phi,
                         double lambda0)
    : theta_(std::move(theta)), phi_(std::move(phi)), lambda0_(canonical_angle(lambda0)) {
  if (theta_.empty() || theta_.size() != phi_.size()) {
    throw std::invalid_argument("theta and phi must both have d+1 entries (got " +
                                std::to_string(theta_.size()) + " and " +
                                std::to_string(phi_.size()) + ")");
  }
  for (double& t : theta_) t = canonical_angle(t);
  for (double& f : phi_) f = canonical_angle(f);
}

PhaseAngles PhaseAngles::zeros(int degree) {
  if (degree < 0) throw std::invalid_argument("degree must be non-negative");
  auto n = static_cast<std::size_t>(degree) + 1;
  return PhaseAngles(std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), 0.0);
}

PhaseAngles PhaseAngles::from_vector(int degree, std::span<const double> x) {
  if (degree < 0) throw std::invalid_argument("degree must be non-negative");
  auto n = static_cast<std::size_t>(degree) + 1;
  if (x.size() != 2 * n + 1) {
    throw std::invalid_argument("parameter vector has wrong length for degree " +
                                std::to_string(degree));
  }
  return PhaseAngles(std::vector<double>(x.begin(), x.begin() + n),
                     std::vector<double>(x.begin() + n, x.begin() + 2 * n), x[2 * n]);
}

std::vector<double> PhaseAngles::to_vector() const {
  std::vector<double> x(theta_);
  x.insert(x.end(), phi_.begin(), phi_.end());
  x.push_back(lambda0_);
  return x;
}

PhaseAngles PhaseAngles::padded(int new_degree) const {
  int d = degree();
  if (new_degree < d || (new_degree - d) % 2 != 0) {
    throw std::invalid_argument("padding needs a larger degree of the same parity");
  }
  std::vector<double> th(theta_), ph(phi_);
  while (static_cast<int>(th.size()) < new_degree + 1) {
    th.push_back(std::numbers::pi / 2);
    th.push_back(0.0);
    ph.push_back(0.0);
    ph.push_back(0.0);
  }
  return PhaseAngles(std::move(th), std::move(ph), lambda0_);
}

}  // namespace gqspi
