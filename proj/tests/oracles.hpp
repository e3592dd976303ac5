/*
   Copyright 2026 The irf Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/


// Independent reference samplers and quadrature used only by the tests.

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "irf/point.hpp"
#include "irf/random.hpp"

namespace irf::oracle {

// P(X > t) = t^-alpha on t >= 1, by inverse CDF.
inline std::vector<double> pareto(std::size_t n, double alpha, std::uint64_t seed) {
  Stream s(StreamKey{seed, 0, "oracle-pareto"});
  std::vector<double> out(n);
  for (auto& x : out) x = std::pow(s.uniform(), -1.0 / alpha);
  return out;
}

// Symmetric alpha-stable with CF exp(-|t|^alpha), Chambers-Mallows-Stuck.
inline std::vector<Point> symmetric_stable(std::size_t n, double alpha, std::uint64_t seed) {
  Stream s(StreamKey{seed, 0, "oracle-stable"});
  std::vector<Point> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double v = std::numbers::pi * (s.uniform() - 0.5);
    const double w = -std::log(s.uniform());
    double x;
    if (std::fabs(alpha - 1.0) < 1e-12) {
      x = std::tan(v);
    } else {
      x = std::sin(alpha * v) / std::pow(std::cos(v), 1.0 / alpha) *
          std::pow(std::cos(v - alpha * v) / w, (1.0 - alpha) / alpha);
    }
    out.push_back(Point::scalar(x));
  }
  return out;
}

inline std::vector<Point> gaussian(std::size_t n, std::uint64_t seed) {
  Stream s(StreamKey{seed, 0, "oracle-normal"});
  std::vector<Point> out;
  for (std::size_t i = 0; i < n; ++i) {
    const double u1 = s.uniform(), u2 = s.uniform();
    out.push_back(Point::scalar(std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2)));
  }
  return out;
}

// Extremal stationary law from the explicit representation
//   S = max_k A_1 ... A_{k-1} B_k,   A ~ LogNormal(mu, sigma), B = b.
// The running product is dropped once it is below 1e-14 of the running max.
inline std::vector<double> extremal_explicit(std::size_t n, double mu, double sigma, double b, std::uint64_t seed) {
  Stream s(StreamKey{seed, 0, "oracle-extremal"});
  std::vector<double> out(n);
  for (auto& x : out) {
    double prod = 1.0, best = b;
    while (prod * b > 1e-14 * best) {
      const double u1 = s.uniform(), u2 = s.uniform();
      const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
      prod *= std::exp(mu + sigma * z);
      best = std::max(best, prod * b);
    }
    x = best;
  }
  return out;
}

// int_0^inf f(r) dr for smooth f decaying at infinity, split at 1.
template <typename F>
double half_line(F f) {
  boost::math::quadrature::tanh_sinh<double> ts;
  boost::math::quadrature::exp_sinh<double> es;
  return ts.integrate(f, 0.0, 1.0) + es.integrate(f, 1.0, std::numeric_limits<double>::infinity());
}

// int_0^inf (e^{ir} - 1) r^(-alpha-1) dr for 0 < alpha < 1. After one
// integration by parts this is (i / alpha) int_0^inf e^{ir} r^(-alpha) dr,
// two Fourier integrals done by Ooura's double-exponential rule.
inline std::complex<double> stable_kernel_integral(double alpha) {
  boost::math::quadrature::ooura_fourier_sin<double> sin_rule;
  boost::math::quadrature::ooura_fourier_cos<double> cos_rule;
  const auto f = [alpha](double r) { return std::pow(r, -alpha); };
  const double s = sin_rule.integrate(f, 1.0).first;
  const double c = cos_rule.integrate(f, 1.0).first;
  return {-s / alpha, c / alpha};
}

}  // namespace irf::oracle
