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

#include "gqspi/response.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "gqspi/errors.hpp"

namespace gqspi {

namespace {

void require_kappa(double kappa) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    throw std::invalid_argument("kappa must be positive and finite");
  }
}

// Storage-index autocorrelation sum_k u[k] conj(v[k + s]).
cplx shifted_overlap(const std::vector<cplx>& u, const std::vector<cplx>& v, int s) {
  int len = static_cast<int>(u.size());
  cplx acc{};
  for (int k = std::max(0, -s); k < std::min(len, len - s); ++k) {
    acc += u[static_cast<std::size_t>(k)] * std::conj(v[static_cast<std::size_t>(k + s)]);
  }
  return acc;
}

}  // namespace

cplx ResponseSpectrum::at(int s) const {
  if (s < -degree || s > degree) return {0.0, 0.0};
  return c[static_cast<std::size_t>(s + degree)];
}

ResponseSpectrum response_coefficients(const LaurentPoly& poly, double kappa) {
  require_kappa(kappa);
  const int d = poly.degree;
  const auto width = static_cast<std::size_t>(2 * d + 1);
  const std::vector<cplx>* v[2] = {&poly.p, &poly.q};

  // a[jk][s + d] = sum_n v_j(n) conj(v_k(n + 2s))
  std::vector<std::vector<cplx>> a(4, std::vector<cplx>(width));
  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 2; ++k) {
      for (int s = -d; s <= d; ++s) {
        a[static_cast<std::size_t>(2 * j + k)][static_cast<std::size_t>(s + d)] =
            shifted_overlap(*v[j], *v[k], s);
      }
    }
  }
  std::vector<double> gauss(2 * width);
  for (int t = -2 * d; t <= 2 * d; ++t) {
    gauss[static_cast<std::size_t>(t + 2 * d)] = std::exp(-kappa * kappa * t * t);
  }

  ResponseSpectrum out{kappa, d, std::vector<cplx>(width)};
  for (int s = -d; s <= d; ++s) {
    cplx acc{};
    for (int r = -d; r <= d; ++r) {
      cplx inner{};
      for (const auto& ajk : a) {
        inner += ajk[static_cast<std::size_t>(s + d)] * std::conj(ajk[static_cast<std::size_t>(r + d)]);
      }
      acc += gauss[static_cast<std::size_t>(r - s + 2 * d)] * inner;
    }
    out.c[static_cast<std::size_t>(s + d)] = acc;
  }
  return out;
}

ResponseSpectrum response_coefficients_direct(const LaurentPoly& poly, double kappa) {
  require_kappa(kappa);
  const int d = poly.degree;
  ResponseSpectrum out{kappa, d, std::vector<cplx>(static_cast<std::size_t>(2 * d + 1))};
  for (int s = -d; s <= d; ++s) {
    cplx total{};
    for (int n = -d; n <= d; n += 2) {
      for (int m = -d; m <= d; m += 2) {
        cplx left = poly.p_at(n) * std::conj(poly.p_at(m)) + poly.q_at(n) * std::conj(poly.q_at(m));
        for (int r = -d; r <= d; ++r) {
          cplx right = std::conj(poly.p_at(n + 2 * s)) * poly.p_at(m + 2 * r) +
                       std::conj(poly.q_at(n + 2 * s)) * poly.q_at(m + 2 * r);
          total += left * right * std::exp(-kappa * kappa * double((r - s) * (r - s)));
        }
      }
    }
    out.c[static_cast<std::size_t>(s + d)] = total;
  }
  return out;
}

double response_eval(const ResponseSpectrum& spec, double beta) {
  const int d = spec.degree;
  cplx z = std::polar(1.0, 2.0 * spec.kappa * beta);
  cplx acc = spec.at(0);
  cplx zp{1.0, 0.0};
  for (int s = 1; s <= d; ++s) {
    zp *= z;
    if (s % 16 == 0) zp = std::polar(1.0, 2.0 * spec.kappa * beta * s);
    acc += spec.at(s) * zp + spec.at(-s) * std::conj(zp);
  }
  double tol = 1e-9;
  if (!(std::abs(acc.imag()) < tol)) {
    std::ostringstream msg;
    msg << "response has imaginary residue " << acc.imag() << " at beta = " << beta;
    throw ConsistencyError(msg.str());
  }
  return acc.real();
}

ResponseCurve response_curve(const ResponseSpectrum& spec, int n_points) {
  if (n_points < 2) throw std::invalid_argument("n_points must be at least 2");
  ResponseCurve curve;
  curve.period = spec.period();
  double lo = -curve.period / 2.0;
  double h = curve.period / n_points;
  curve.beta_grid.resize(static_cast<std::size_t>(n_points));
  curve.values.resize(static_cast<std::size_t>(n_points));
  for (int i = 0; i < n_points; ++i) {
    double b = lo + h * i;
    curve.beta_grid[static_cast<std::size_t>(i)] = b;
    curve.values[static_cast<std::size_t>(i)] = response_eval(spec, b);
  }
  return curve;
}

SpectrumCheck check_spectrum(const ResponseSpectrum& spec) {
  SpectrumCheck chk{0.0, 0.0};
  cplx total{};
  for (int s = -spec.degree; s <= spec.degree; ++s) {
    total += spec.at(s);
    chk.hermitian_deviation =
        std::max(chk.hermitian_deviation, std::abs(spec.at(-s) - std::conj(spec.at(s))));
  }
  chk.normalization_deviation = std::abs(total - 1.0);
  return chk;
}

}  // namespace gqspi
