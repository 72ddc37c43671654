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

#include "gqspi/decision_error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "gqspi/errors.hpp"
#include "gqspi/faddeeva.hpp"

namespace gqspi {

namespace {

constexpr double kPi = std::numbers::pi;

void warn(Diagnostics* diag, const std::string& msg) {
  if (diag) {
    diag->warnings.push_back(msg);
  } else {
    std::cerr << "warning: " << msg << '\n';
  }
}

void require_kappa_match(const ResponseSpectrum& spec, const ThresholdSpec& thr) {
  if (std::abs(spec.kappa - thr.kappa) > 1e-12 * thr.kappa) {
    throw std::invalid_argument("spectrum and thresholds use different kappa");
  }
}

// 10-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendre {
  static constexpr int kOrder = 10;
  std::array<double, kOrder> x{};
  std::array<double, kOrder> w{};

  GaussLegendre() {
    for (int i = 0; i < kOrder; ++i) {
      double z = std::cos(kPi * (i + 0.75) / (kOrder + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = 0.0;
        for (int j = 1; j <= kOrder; ++j) {
          double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
        }
        dp = kOrder * (z * p0 - p1) / (z * z - 1.0);
        double dz = p0 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      x[static_cast<std::size_t>(i)] = z;
      w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
  }
};

const GaussLegendre& gauss_legendre() {
  static const GaussLegendre g;
  return g;
}

double panel_sum(const std::function<double(double)>& f, double a, double b, int panels) {
  const auto& gl = gauss_legendre();
  double h = (b - a) / panels;
  double total = 0.0;
  for (int k = 0; k < panels; ++k) {
    double mid = a + h * (k + 0.5);
    double part = 0.0;
    for (int i = 0; i < GaussLegendre::kOrder; ++i) {
      part += gl.w[static_cast<std::size_t>(i)] * f(mid + 0.5 * h * gl.x[static_cast<std::size_t>(i)]);
    }
    total += 0.5 * h * part;
  }
  return total;
}

// Composite Gauss-Legendre over the pieces between sorted breakpoints; the
// panel count is doubled everywhere until two successive totals agree.
double integrate_pieces(const std::function<double(double)>& f, std::vector<double> cuts,
                        const QuadratureOptions& opts) {
  if (opts.max_level < 2) throw std::invalid_argument("quadrature needs max_level >= 2");
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  auto total_at = [&](int level) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) s += panel_sum(f, cuts[i], cuts[i + 1], 1 << level);
    return s;
  };
  double prev = total_at(1);
  for (int level = 2; level <= opts.max_level; ++level) {
    double cur = total_at(level);
    if (std::abs(cur - prev) < opts.tolerance) return cur;
    prev = cur;
    if (level == opts.max_level) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "quadrature did not converge; last estimates " << prev << " and " << cur;
      throw ConvergenceError(msg.str());
    }
  }
  return prev;
}

std::vector<double> band_cuts(const ThresholdSpec& thr) {
  double h = thr.half_period();
  std::vector<double> cuts{-h, h};
  for (const auto& b : thr.bands) {
    cuts.push_back(b.lo);
    cuts.push_back(b.hi);
  }
  return cuts;
}

// Checks 0 <= P <= 1 on a grid fine enough to resolve every harmonic.
bool response_bounded(const ResponseSpectrum& spec, double slack) {
  int n = 8 * (2 * spec.degree + 1) + 8;
  double h = spec.period() / n;
  for (int i = 0; i < n; ++i) {
    double v = response_eval(spec, -spec.period() / 2 + h * (i + 0.5));
    if (v < -slack || v > 1.0 + slack) return false;
  }
  return true;
}

double real_or_throw(cplx v, double tol, const char* what) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
    throw NumericRangeError(std::string(what) + " is not finite");
  }
  if (std::abs(v.imag()) > tol) {
    std::ostringstream msg;
    msg << what << " has imaginary residue " << v.imag();
    throw ConsistencyError(msg.str());
  }
  return v.real();
}

double p_err_bands(const ResponseSpectrum& spec, const ThresholdSpec& thr) {
  const double k = thr.kappa;
  const double width = thr.total_width();
  cplx acc = (k / kPi) * width + spec.at(0) * (1.0 - 2.0 * k * width / kPi);
  for (int s = -spec.degree; s <= spec.degree; ++s) {
    if (s == 0) continue;
    cplx edge{};
    for (const auto& b : thr.bands) {
      edge += std::polar(1.0, 2.0 * k * b.hi * s) - std::polar(1.0, 2.0 * k * b.lo * s);
    }
    acc += spec.at(s) * cplx(0.0, 1.0 / (kPi * s)) * edge;
  }
  return real_or_throw(acc, 1e-9, "p_err");
}

double checked_analytic(const ResponseSpectrum& spec, const ThresholdSpec& thr, Diagnostics* diag) {
  if (!response_bounded(spec, 1e-9)) {
    warn(diag, "response leaves [0, 1]; falling back to quadrature");
    return p_err_quadrature(spec, thr);
  }
  return p_err_bands(spec, thr);
}

}  // namespace

void ThresholdSpec::validate() const {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw std::invalid_argument("kappa must be positive");
  if (bands.empty()) throw std::invalid_argument("at least one band is required");
  double h = half_period();
  double edge = h * (1.0 + 1e-12);
  for (std::size_t i = 0; i < bands.size(); ++i) {
    const auto& b = bands[i];
    if (!(b.lo < b.hi)) throw std::invalid_argument("band needs lo < hi");
    if (!(b.lo >= -edge && b.hi <= edge)) {
      std::ostringstream msg;
      msg << "band (" << b.lo << ", " << b.hi << ") leaves the principal period (" << -h << ", "
          << h << ")";
      throw std::invalid_argument(msg.str());
    }
    if (i > 0 && !(bands[i - 1].hi < b.lo)) {
      throw std::invalid_argument("bands must be sorted and non-overlapping");
    }
  }
}

double ThresholdSpec::total_width() const {
  double w = 0.0;
  for (const auto& b : bands) w += b.hi - b.lo;
  return w;
}

bool ThresholdSpec::contains(double beta) const {
  return std::any_of(bands.begin(), bands.end(),
                     [beta](const Band& b) { return beta >= b.lo && beta <= b.hi; });
}

double ThresholdSpec::half_period() const { return kPi / (2.0 * kappa); }

void GaussianPrior::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma) || !std::isfinite(mu)) {
    throw std::invalid_argument("prior needs finite mu and sigma > 0");
  }
}

double GaussianPrior::density(double beta) const {
  double z = (beta - mu) / sigma;
  return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * kPi));
}

double GaussianPrior::mass_outside(double kappa) const {
  double h = kPi / (2.0 * kappa);
  return 0.5 * std::erfc((h - mu) / (std::numbers::sqrt2 * sigma)) +
         0.5 * std::erfc((h + mu) / (std::numbers::sqrt2 * sigma));
}

void TabulatedDensity::validate() const {
  if (beta.size() < 2 || beta.size() != density.size()) {
    throw std::invalid_argument("tabulated density needs matching beta/density tables");
  }
  for (std::size_t i = 1; i < beta.size(); ++i) {
    if (!(beta[i] > beta[i - 1])) throw std::invalid_argument("density table must be ascending");
  }
  for (double v : density) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("density must be non-negative");
  }
}

double TabulatedDensity::operator()(double b) const {
  if (b < beta.front() || b > beta.back()) return 0.0;
  auto it = std::upper_bound(beta.begin(), beta.end(), b);
  if (it == beta.end()) return density.back();
  auto i = static_cast<std::size_t>(it - beta.begin());
  double t = (b - beta[i - 1]) / (beta[i] - beta[i - 1]);
  return density[i - 1] + t * (density[i] - density[i - 1]);
}

double p_err_single(const ResponseSpectrum& spec, const ThresholdSpec& thr, Diagnostics* diag) {
  thr.validate();
  if (thr.bands.size() != 1) throw std::invalid_argument("p_err_single needs exactly one band");
  require_kappa_match(spec, thr);
  return checked_analytic(spec, thr, diag);
}

double p_err_multi(const ResponseSpectrum& spec, const ThresholdSpec& thr, Diagnostics* diag) {
  thr.validate();
  require_kappa_match(spec, thr);
  return checked_analytic(spec, thr, diag);
}

double p_err_gaussian(const ResponseSpectrum& spec, const ThresholdSpec& thr,
                      const GaussianPrior& prior, Diagnostics* diag) {
  thr.validate();
  prior.validate();
  if (thr.bands.size() != 1) throw std::invalid_argument("p_err_gaussian needs exactly one band");
  require_kappa_match(spec, thr);
  const double k = thr.kappa;
  if (k * prior.sigma > 10.0) {
    throw std::invalid_argument("prior is wider than the response period allows (kappa*sigma > 10)");
  }
  double outside = prior.mass_outside(k);
  if (outside > 1e-3) {
    std::ostringstream msg;
    msg << "prior mass outside the principal period is " << outside << "; periodic aliasing";
    warn(diag, msg.str());
  }
  if (!response_bounded(spec, 1e-9)) {
    warn(diag, "response leaves [0, 1]; falling back to quadrature");
    return p_err_quadrature(spec, thr, prior);
  }

  const double h = thr.half_period();
  const double scale = std::numbers::sqrt2 * prior.sigma;
  const Band& band = thr.bands.front();
  auto x = [&](double b) { return (b - prior.mu) / scale; };
  // I_s(a, b) = int_a^b e^{i 2 kappa s beta} f(beta) d beta
  auto interval = [&](int s, double a, double b) {
    double y = std::numbers::sqrt2 * k * s * prior.sigma;
    return 0.5 * std::polar(1.0, 2.0 * k * s * prior.mu) * (erf_scaled(x(b), y) - erf_scaled(x(a), y));
  };
  cplx acc = band.hi - band.lo;
  for (int s = -spec.degree; s <= spec.degree; ++s) {
    cplx term = spec.at(s) * (interval(s, -h, h) - 2.0 * interval(s, band.lo, band.hi));
    if (!std::isfinite(term.real()) || !std::isfinite(term.imag())) {
      throw NumericRangeError("complex erf overflow in Gaussian p_err at s = " + std::to_string(s));
    }
    acc += term;
  }
  return real_or_throw(acc * (k / kPi), 1e-8, "Gaussian p_err");
}

double p_err_quadrature(const ResponseSpectrum& spec, const ThresholdSpec& thr,
                        const std::optional<GaussianPrior>& prior, const QuadratureOptions& opts) {
  thr.validate();
  require_kappa_match(spec, thr);
  std::vector<double> cuts = band_cuts(thr);
  std::function<double(double)> f;
  if (!prior) {
    f = [&](double b) {
      double ideal = thr.contains(b) ? 1.0 : 0.0;
      return std::abs(ideal - response_eval(spec, b));
    };
  } else {
    prior->validate();
    double h = thr.half_period();
    for (double t : {0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0}) {
      for (double sgn : {-1.0, 1.0}) {
        double c = prior->mu + sgn * t * prior->sigma;
        if (c > -h && c < h) cuts.push_back(c);
      }
    }
    f = [&](double b) {
      double pf = response_eval(spec, b) * prior->density(b);
      return thr.contains(b) ? 1.0 - pf : pf;
    };
  }
  return (thr.kappa / kPi) * integrate_pieces(f, cuts, opts);
}

double p_err_quadrature(const ResponseSpectrum& spec, const ThresholdSpec& thr,
                        const TabulatedDensity& density, const QuadratureOptions& opts) {
  thr.validate();
  density.validate();
  require_kappa_match(spec, thr);
  std::vector<double> cuts = band_cuts(thr);
  double h = thr.half_period();
  if (density.beta.size() <= 4096) {
    for (double b : density.beta) {
      if (b > -h && b < h) cuts.push_back(b);
    }
  }
  auto f = [&](double b) {
    double pf = response_eval(spec, b) * density(b);
    return thr.contains(b) ? 1.0 - pf : pf;
  };
  return (thr.kappa / kPi) * integrate_pieces(f, cuts, opts);
}

ErrorBudget fit_error_budget(const ResponseCurve& curve, const ThresholdSpec& thr,
                             double origin_exclusion) {
  thr.validate();
  const auto n = static_cast<int>(curve.values.size());
  if (n < 8 || curve.beta_grid.size() != curve.values.size()) {
    throw std::invalid_argument("curve needs at least 8 samples");
  }
  const double period = kPi / thr.kappa;
  const double step = curve.beta_grid[1] - curve.beta_grid[0];
  if (std::abs(step * n - period) > 1e-9 * period) {
    throw std::invalid_argument("curve must span exactly one response period");
  }

  std::vector<double> dev(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto u = static_cast<std::size_t>(i);
    dev[u] = std::abs((thr.contains(curve.beta_grid[u]) ? 1.0 : 0.0) - curve.values[u]);
  }
  auto wrap = [n](int i) { return ((i % n) + n) % n; };
  auto at = [&](int i) { return dev[static_cast<std::size_t>(wrap(i))]; };
  auto index_after = [&](double t) {
    return static_cast<int>(std::ceil((t - curve.beta_grid.front()) / step - 1e-12));
  };

  // Each threshold owns the interval reached by walking away from it on
  // both sides while the deviation keeps decreasing.
  std::vector<char> transition(static_cast<std::size_t>(n), 0);
  auto mark = [&](int first_inside, int dir_inside) {
    int i = first_inside;
    while (at(i + dir_inside) < at(i)) i += dir_inside;
    int o = first_inside - dir_inside;
    while (at(o - dir_inside) < at(o)) o -= dir_inside;
    for (int j = std::min(i, o); j <= std::max(i, o); ++j) transition[static_cast<std::size_t>(wrap(j))] = 1;
  };
  for (const auto& b : thr.bands) {
    mark(index_after(b.lo), +1);
    mark(index_after(b.hi) - 1, -1);
  }

  ErrorBudget out;
  for (int i = 0; i < n; ++i) {
    auto u = static_cast<std::size_t>(i);
    if (transition[u] || std::abs(curve.beta_grid[u]) < origin_exclusion) continue;
    out.epsilon = std::max(out.epsilon, dev[u]);
  }
  int wide = 0;
  for (int i = 0; i < n; ++i) {
    auto u = static_cast<std::size_t>(i);
    if (transition[u] && dev[u] > out.epsilon && dev[u] < 1.0 - out.epsilon) ++wide;
  }
  const auto edges = static_cast<double>(2 * thr.bands.size());
  out.sigma_width = wide * step / edges;
  out.degenerate = wide == 0;
  out.p_err_total = (thr.kappa / kPi) *
                    (out.epsilon * (period - edges * out.sigma_width) + edges * out.sigma_width / 4.0);
  return out;
}

}  // namespace gqspi
