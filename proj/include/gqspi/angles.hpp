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

#include <complex>
#include <span>
#include <vector>

namespace gqspi {

using cplx = std::complex<double>;

/// Maps any finite angle into [-pi, pi).
double canonical_angle(double a);

/// Rotation angles of a degree-d sequence: theta_0..theta_d, phi_0..phi_d
/// and the single lambda_0.
class PhaseAngles {
 public:
  PhaseAngles() : PhaseAngles(std::vector<double>{0.0}, std::vector<double>{0.0}, 0.0) {}
  PhaseAngles(std::vector<double> theta, std::vector<double> phi, double lambda0);

  static PhaseAngles zeros(int degree);
  /// Inverse of to_vector(); layout is [theta..., phi..., lambda0].
  static PhaseAngles from_vector(int degree, std::span<const double> x);

  int degree() const { return static_cast<int>(theta_.size()) - 1; }
  const std::vector<double>& theta() const { return theta_; }
  const std::vector<double>& phi() const { return phi_; }
  double lambda0() const { return lambda0_; }

  std::vector<double> to_vector() const;

  /// Extends to new_degree (same parity, not smaller) by appending pairs of
  /// rotations theta = (pi/2, 0), phi = (0, 0). The response is unchanged.
  PhaseAngles padded(int new_degree) const;

  bool operator==(const PhaseAngles&) const = default;

 private:
  std::vector<double> theta_;
  std::vector<double> phi_;
  double lambda0_;
};

}  // namespace gqspi
