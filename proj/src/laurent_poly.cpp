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

#include "gqspi/laurent_poly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gqspi {

namespace {

cplx coeff(const std::vector<cplx>& v, int d, int n) {
  if (n < -d || n > d || ((n + d) & 1)) return {0.0, 0.0};
  return v[static_cast<std::size_t>((n + d) / 2)];
}

cplx eval(const std::vector<cplx>& v, int d, cplx w) {
  // Horner in w^2, then scale by w^{-d}.
  cplx w2 = w * w;
  cplx acc{0.0, 0.0};
  for (auto it = v.rbegin(); it != v.rend(); ++it) acc = acc * w2 + *it;
  return acc * std::pow(w, -d);
}

}  // namespace

cplx LaurentPoly::p_at(int n) const { return coeff(p, degree, n); }
cplx LaurentPoly::q_at(int n) const { return coeff(q, degree, n); }
cplx LaurentPoly::eval_p(cplx w) const { return eval(p, degree, w); }
cplx LaurentPoly::eval_q(cplx w) const { return eval(q, degree, w); }

LaurentPoly gqsp_degree1(const PhaseAngles& angles) {
  if (angles.degree() != 1) {
    throw std::invalid_argument("gqsp_degree1 needs degree-1 angles");
  }
  const auto& th = angles.theta();
  const auto& ph = angles.phi();
  double l = angles.lambda0();
  double c0 = std::cos(th[0]), s0 = std::sin(th[0]);
  double c1 = std::cos(th[1]), s1 = std::sin(th[1]);
  cplx e_l = std::polar(1.0, l);
  cplx e_lf0 = std::polar(1.0, l + ph[0]);
  cplx e_f1 = std::polar(1.0, ph[1]);
  LaurentPoly r;
  r.degree = 1;
  // index 0 holds w^{-1}, index 1 holds w^{+1}
  r.p = {e_f1 * s1 * e_l * s0, e_f1 * c1 * e_lf0 * c0};
  r.q = {-c1 * e_l * s0, s1 * e_lf0 * c0};
  return r;
}

LaurentPoly gqsp_build(const PhaseAngles& angles) {
  const auto& th = angles.theta();
  const auto& ph = angles.phi();
  int d = angles.degree();
  LaurentPoly r;
  r.degree = 0;
  r.p.reserve(static_cast<std::size_t>(d) + 1);
  r.q.reserve(static_cast<std::size_t>(d) + 1);
  r.p.push_back(std::polar(1.0, angles.lambda0() + ph[0]) * std::cos(th[0]));
  r.q.push_back(std::polar(1.0, angles.lambda0()) * std::sin(th[0]));

  std::vector<cplx> np, nq;
  for (int j = 1; j <= d; ++j) {
    double c = std::cos(th[static_cast<std::size_t>(j)]);
    double s = std::sin(th[static_cast<std::size_t>(j)]);
    cplx ef = std::polar(1.0, ph[static_cast<std::size_t>(j)]);
    cplx a = ef * c, b = ef * s;
    np.assign(static_cast<std::size_t>(j) + 1, cplx{});
    nq.assign(static_cast<std::size_t>(j) + 1, cplx{});
    for (int k = 0; k <= j; ++k) {
      cplx pm = k >= 1 ? r.p[static_cast<std::size_t>(k - 1)] : cplx{};
      cplx qk = k < j ? r.q[static_cast<std::size_t>(k)] : cplx{};
      np[static_cast<std::size_t>(k)] = a * pm + b * qk;
      nq[static_cast<std::size_t>(k)] = s * pm - c * qk;
    }
    r.p.swap(np);
    r.q.swap(nq);
    r.degree = j;
  }
  return r;
}

double verify_unitarity(const LaurentPoly& poly) {
  int d = poly.degree;
  int len = static_cast<int>(poly.p.size());
  if (len != d + 1 || static_cast<int>(poly.q.size()) != d + 1) {
    throw std::invalid_argument("coefficient arrays must have d+1 entries");
  }
  double worst = 0.0;
  for (int s = -d; s <= d; ++s) {
    cplx acc{};
    for (int k = std::max(0, -s); k < std::min(len, len - s); ++k) {
      auto i = static_cast<std::size_t>(k), j = static_cast<std::size_t>(k + s);
      acc += poly.p[i] * std::conj(poly.p[j]) + poly.q[i] * std::conj(poly.q[j]);
    }
    if (s == 0) acc -= 1.0;
    worst = std::max(worst, std::abs(acc));
  }
  return worst;
}

}  // namespace gqspi
