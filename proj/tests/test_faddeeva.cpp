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

#include <cmath>

#include "gqspi/faddeeva.hpp"

using gqspi::erf_complex;
using gqspi::erf_scaled;
using gqspi::faddeeva_w;
using C = std::complex<double>;

namespace {

struct Ref {
  double x, y, re, im;
};

// 40-digit reference values.
const Ref kW[] = {
    {0, 0, 1.0, 0.0},
    {0.001, 0.001, 0.99887162233541124713, 0.0011263806715998664529},
    {0.5, 0, 0.77880078307140486825, 0.47892517290104347254},
    {1, 1, 0.30474420525691259246, 0.20821893820283162729},
    {3, 2, 0.09271076642644333399, 0.1283169622282615754},
    {-2, 0.5, 0.10335882374136665895, -0.28478588475009374558},
    {5, 0.001, 0.000024080463967103413858, 0.11524595667450372977},
    {0.01, 7.5, 0.07457356602214420132, 0.00009773754772355515389},
    {9, 0.1, 0.00070975373783860619245, 0.063074051154670203064},
    {-12, 3, 0.011163889644607902579, -0.044361237994963507751},
    {30, 20, 0.0086857475260039267715, 0.013018597209205661202},
    {2.5, -1.5, -0.098535764947462405695, 0.19759688490253617121},
    {0, -2, 108.94090438997797241, 0.0},
    {100, 1e-06, 5.6427423314980607381e-11, 0.0056421779725941372082},
};

const Ref kErf[] = {
    {1, 1, 1.3161512816979476449, 0.19045346923783468628},
    {0.3, -2, 14.028218985110459679, -9.1551462040302196345},
    {-1.5, 0.7, -1.0404046154368713576, 0.033625498125576171851},
    {2, 0, 0.99532226501895273416, 0.0},
};

}  // namespace

TEST_CASE("faddeeva reference values", "[faddeeva]") {
  for (const auto& r : kW) {
    C want(r.re, r.im);
    C got = faddeeva_w(C(r.x, r.y));
    INFO("z = " << r.x << " + " << r.y << "i");
    CHECK(std::abs(got - want) <= 1e-12 * std::abs(want) + 1e-15);
  }
}

TEST_CASE("complex erf reference values", "[faddeeva]") {
  for (const auto& r : kErf) {
    C want(r.re, r.im);
    CHECK(std::abs(erf_complex(C(r.x, r.y)) - want) <= 1e-12 * std::abs(want));
  }
  for (double x = -4; x <= 4; x += 0.25) CHECK(std::abs(erf_complex(C(x, 0)) - std::erf(x)) < 1e-14);
}

TEST_CASE("scaled erf identities", "[faddeeva][property]") {
  for (double x : {-30.0, -3.0, -0.4, 0.0, 0.7, 2.0, 25.0}) {
    for (double y : {0.0, 0.3, 1.5, 6.0, 40.0}) {
      C s = erf_scaled(x, y);
      CHECK(std::isfinite(s.real()));
      CHECK(std::isfinite(s.imag()));
      // odd in x up to conjugation
      C m = erf_scaled(-x, y);
      CHECK(std::abs(s + std::conj(m)) < 1e-13);
      if (y < 5) {
        C direct = std::exp(-y * y) * erf_complex(C(x, -y));
        CHECK(std::abs(s - direct) <= 1e-12 * (1 + std::abs(direct)));
      }
    }
  }
}
