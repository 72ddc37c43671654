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

namespace gqspi {

/// Faddeeva function w(z) = exp(-z^2) erfc(-iz). Relative accuracy is
/// about 1e-13 over the complex plane (Weideman rational series for
/// |z| < 8, Laplace continued fraction beyond).
std::complex<double> faddeeva_w(std::complex<double> z);

/// erf of a complex argument. Overflows to inf for large |Im z|.
std::complex<double> erf_complex(std::complex<double> z);

/// exp(-y^2) * erf(x - i y), bounded for all real x, y.
std::complex<double> erf_scaled(double x, double y);

}  // namespace gqspi
