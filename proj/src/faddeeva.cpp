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

#include "gqspi/faddeeva.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace gqspi {

namespace {

using cplx = std::complex<double>;

constexpr int kTerms = 40;
constexpr double kSwitchRadius = 8.0;
constexpr int kFractionDepth = 80;

struct Weideman {
  double L;
  std::array<double, kTerms + 1> a{};  // a[1..kTerms]

  Weideman() : L(std::sqrt(kTerms / std::numbers::sqrt2)) {
    constexpr int M = 2 * kTerms;
    std::array<double, 2 * M> f{};
    for (int k = -M + 1; k < M; ++k) {
      double t = L * std::tan(0.5 * k * std::numbers::pi / M);
      f[static_cast<std::size_t>(k + M)] = std::exp(-t * t) * (L * L + t * t);
    }
    for (int n = 1; n <= kTerms; ++n) {
      double acc = 0.0;
      for (int k = -M + 1; k < M; ++k) {
        acc += f[static_cast<std::size_t>(k + M)] * std::cos(std::numbers::pi * k * n / M);
      }
      a[static_cast<std::size_t>(n)] = acc / (2 * M);
    }
  }

  cplx operator()(cplx z) const {
    cplx den = L - cplx(0, 1) * z;
    cplx Z = (L + cplx(0, 1) * z) / den;
    cplx poly{};
    for (int n = kTerms; n >= 1; --n) poly = poly * Z + a[static_cast<std::size_t>(n)];
    return 2.0 * poly / (den * den) + 1.0 / (std::sqrt(std::numbers::pi) * den);
  }
};

const Weideman& weideman() {
  static const Weideman w;
  return w;
}

cplx continued_fraction(cplx z) {
  cplx t = z;
  for (int k = kFractionDepth; k >= 1; --k) t = z - (0.5 * k) / t;
  return cplx(0, 1) / (std::sqrt(std::numbers::pi) * t);
}

cplx w_upper(cplx z) {
  if (std::abs(z) >= kSwitchRadius) return continued_fraction(z);
  return weideman()(z);
}

}  // namespace

std::complex<double> faddeeva_w(std::complex<double> z) {
  if (z.imag() >= 0.0) return w_upper(z);
  // w(z) = 2 exp(-z^2) - w(-z)
  return 2.0 * std::exp(-z * z) - w_upper(-z);
}

std::complex<double> erf_scaled(double x, double y) {
  if (x < 0.0) return -erf_scaled(-x, -y);
  cplx w = w_upper(cplx(y, x));
  return std::exp(-y * y) - std::polar(std::exp(-x * x), 2.0 * x * y) * w;
}

std::complex<double> erf_complex(std::complex<double> z) {
  double y = -z.imag();
  return std::exp(y * y) * erf_scaled(z.real(), y);
}

}  // namespace gqspi
