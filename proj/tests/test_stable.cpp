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


#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "irf/chain.hpp"
#include "irf/cramer.hpp"
#include "irf/stable.hpp"
#include "irf/tail.hpp"
#include "models.hpp"
#include "oracles.hpp"

namespace irf {
namespace {

using Complex = std::complex<double>;

DirectionalMeasure one_sided(double mass) {
  DirectionalMeasure m;
  m.directions = {Point::scalar(1.0)};
  m.weights = {mass};
  return m;
}

DirectionalMeasure two_sided(double plus, double minus) {
  DirectionalMeasure m;
  m.directions = {Point::scalar(1.0), Point::scalar(-1.0)};
  m.weights = {plus, minus};
  return m;
}

// int_0^inf (e^{ir} - 1 [- ir]) r^{-alpha-1} dr for alpha in (0,1) u (1,2).
Complex gamma_oracle(double alpha) {
  return std::tgamma(-alpha) * std::exp(Complex{0.0, -std::numbers::pi * alpha / 2.0});
}

TEST(PhiSeries, Examples) {
  Stream s(StreamKey{1, 0, "phi"});
  const auto af = fixture::affine1(dist::Constant{0.5}, dist::Normal{0.0, 1.0});
  EXPECT_NEAR(phi_series_sample(af, Point::scalar(3.0), 1e-13, s)[0], 3.0, 1e-12);
  const auto ex = fixture::extremal(dist::Constant{0.5}, dist::Constant{1.0});
  EXPECT_EQ(phi_series_sample(ex, Point::scalar(-2.0), 1e-13, s)[0], 0.0);
  EXPECT_NEAR(phi_series_sample(ex, Point::scalar(2.0), 1e-13, s)[0], 2.0, 1e-12);
  EXPECT_EQ(phi_series_sample(ex, Point::scalar(0.0), 1e-13, s)[0], 0.0);
}

TEST(HFunction, Examples) {
  const auto ex = fixture::extremal_lognormal();
  const ComplexEstimate at0 = h_v(ex, Point::scalar(0.0), Point::scalar(1.0), 50, 1e-10, StreamKey{2, 0, "h"});
  EXPECT_EQ(at0.value, Complex(1.0, 0.0));
  const auto af = fixture::affine1(dist::Constant{0.5}, dist::Normal{0.0, 1.0});
  for (double x : {-1.0, 0.3, 2.0}) {
    const ComplexEstimate h = h_v(af, Point::scalar(x), Point::scalar(0.7), 10, 1e-13, StreamKey{3, 0, "h"});
    EXPECT_NEAR(std::abs(h.value - std::exp(Complex{0.0, 0.7 * x})), 0.0, 1e-10) << x;
  }
}

TEST(HFunction, Homogeneity) {
  const auto ex = fixture::extremal_lognormal();
  const Point x = Point::scalar(0.8), v = Point::scalar(1.3);
  for (double t : {0.5, 2.0}) {
    const ComplexEstimate a = h_v(ex, t * x, v, 500, 1e-14, StreamKey{4, 0, "h"});
    const ComplexEstimate b = h_v(ex, x, t * v, 500, 1e-14, StreamKey{4, 0, "h"});
    // truncation depth depends on |x|, so the draws desynchronize: equal in law only
    EXPECT_NEAR(a.value.real(), b.value.real(), 4.0 * std::hypot(a.se_re, b.se_re)) << t;
    EXPECT_NEAR(a.value.imag(), b.value.imag(), 4.0 * std::hypot(a.se_im, b.se_im)) << t;
  }
}

TEST(Property, HBoundedAndLipschitz) {
  const auto ex = fixture::extremal_lognormal();
  const HFunction h = make_h(ex, 2000, 1e-12, 5);
  const Point v = Point::scalar(1.0);
  // E sum_k prod |M| = kappa(1) / (1 - kappa(1)).
  const double k1 = std::exp(-0.75 + 0.5);
  const double lip = k1 / (1.0 - k1);
  for (double x : {0.1, 0.5, 1.0, 3.0}) {
    const ComplexEstimate hx = h(Point::scalar(x), v, 0);
    EXPECT_LE(std::abs(hx.value), 1.0 + 1e-12);
    const ComplexEstimate hy = h(Point::scalar(x + 0.05), v, 0);
    EXPECT_LE(std::abs(hx.value - hy.value), 1.2 * lip * 0.05) << x;
  }
}

TEST(LambdaFunctional, IndicatorOnPareto) {
  const auto raw = oracle::pareto(1000000, 1.5, 6);
  std::vector<Point> xs;
  for (double r : raw) xs.push_back(Point::scalar(r));
  const auto ind = vanishing_within(1.0, [](const Point&) { return 1.0; });
  const stats::Estimate a = lambda_functional(ind, xs, 0.02, 1.5);
  const stats::Estimate b = lambda_functional(ind, xs, 0.01, 1.5);
  EXPECT_NEAR(a.value, 1.0, 4.0 * a.se);
  EXPECT_NEAR(b.value, 1.0, 4.0 * b.se);
  EXPECT_NEAR(a.value, b.value, 4.0 * std::hypot(a.se, b.se));
  const auto ind2 = vanishing_within(2.0, [](const Point&) { return 1.0; });
  const stats::Estimate c = lambda_functional(ind2, xs, 0.01, 1.5);
  EXPECT_NEAR(c.value / b.value, std::pow(2.0, -1.5), 0.1 * std::pow(2.0, -1.5));
  const auto zero = vanishing_within(1.0, [](const Point&) { return 0.0; });
  EXPECT_EQ(lambda_functional(zero, xs, 0.01, 1.5).value, 0.0);
  const auto bad = vanishing_within(0.0, [](const Point&) { return 1.0; });
  EXPECT_THROW(lambda_functional(bad, xs, 0.01, 1.5), PreconditionError);
}

TEST(Xi, Examples) {
  const std::vector<Point> two{Point::scalar(2.0)};
  EXPECT_DOUBLE_EQ(xi(1.0, two).value[0], 0.4);
  EXPECT_EQ(xi(0.0, two).value[0], 0.0);
  const std::vector<Point> sym{Point::scalar(-3.0), Point::scalar(3.0)};
  EXPECT_EQ(xi(0.7, sym).value[0], 0.0);
}

TEST(Tau, Examples) {
  const TailMeasure one = TailMeasure::closed(1.0, one_sided(0.8), 200000, 7);
  EXPECT_EQ(tau(1.0, one).value[0], 0.0);
  const TailMeasure sym = TailMeasure::closed(1.0, two_sided(0.5, 0.5), 200000, 7);
  const VectorEstimate s = tau(2.0, sym);
  EXPECT_NEAR(s.value[0], 0.0, 4.0 * s.se[0] + 1e-3);
  EXPECT_THROW(tau(2.0, TailMeasure::closed(1.5, one_sided(1.0), 10, 7)), PreconditionError);
}

TEST(Tau, OneSidedMatchesQuadrature) {
  const double sigma = 0.8, t = 2.0;
  const double ref = sigma * oracle::half_line([t](double r) {
    return r * (1.0 - t * t) / ((1.0 + t * t * r * r) * (1.0 + r * r));
  });
  EXPECT_NEAR(ref, -std::log(2.0) * sigma, 1e-8);
  const VectorEstimate e = tau(t, TailMeasure::closed(1.0, one_sided(sigma), 400000, 8));
  EXPECT_NEAR(e.value[0], ref, 4.0 * e.se[0] + 2e-3);
}

TEST(CAlpha, SyntheticBelowOne) {
  const double alpha = 0.5;
  const TailMeasure m = TailMeasure::closed(alpha, one_sided(1.0), 1000000, 9);
  const CAlphaResult r = c_alpha(Point::scalar(1.0), alpha, h_identity(), m);
  const Complex ref = oracle::stable_kernel_integral(alpha);
  EXPECT_NEAR(std::abs(ref - gamma_oracle(alpha)), 0.0, 1e-8);
  EXPECT_NEAR(ref.real(), -2.5066, 1e-4);
  EXPECT_NEAR(ref.imag(), 2.5066, 1e-4);
  EXPECT_NEAR(r.value.value.real(), ref.real(), 4.0 * r.value.se_re + 1e-3);
  EXPECT_NEAR(r.value.value.imag(), ref.imag(), 4.0 * r.value.se_im + 1e-3);
  EXPECT_FALSE(r.indeterminate_sign);
}

TEST(CAlpha, SyntheticOtherRegimes) {
  // alpha = 1: Re part is -pi/2 times the mass.
  const CAlphaResult one = c_alpha(Point::scalar(1.0), 1.0, h_identity(), TailMeasure::closed(1.0, one_sided(1.0), 1000000, 10));
  EXPECT_NEAR(one.value.value.real(), -std::numbers::pi / 2.0, 4.0 * one.value.se_re + 2e-3);
  // 1 < alpha < 2: the real part has finite variance.
  const CAlphaResult mid = c_alpha(Point::scalar(1.0), 1.5, h_identity(), TailMeasure::closed(1.5, one_sided(1.0), 1000000, 11));
  EXPECT_NEAR(mid.value.value.real(), gamma_oracle(1.5).real(), 4.0 * mid.value.se_re + 2e-3);
  EXPECT_THROW(c_alpha(Point::scalar(1.0), 2.0, h_identity(), TailMeasure::closed(2.0, one_sided(1.0), 10, 1)), PreconditionError);
  EXPECT_THROW(c_alpha(Point::scalar(1.0), 0.5, h_identity(), TailMeasure::closed(0.6, one_sided(1.0), 10, 1)), PreconditionError);
}

TEST(CAlpha, GaussianSurfaceForm) {
  // phi(w) = w for A = 1/2, so C_2(1) = -(1 + 2) / 4.
  const auto af = fixture::affine1(dist::Constant{0.5}, dist::Normal{0.0, 1.0});
  CAlphaOptions o;
  o.phi_reps = 10;
  const CAlphaResult r = c_alpha_gaussian(af, Point::scalar(1.0), one_sided(1.0), o);
  EXPECT_NEAR(r.value.value.real(), -0.75, 1e-8);
}

TEST(Property, CAlphaHomogeneity) {
  const double alpha = 0.5;
  const TailMeasure m = TailMeasure::closed(alpha, two_sided(0.7, 0.3), 1000000, 12);
  const CAlphaResult a = c_alpha(Point::scalar(1.0), alpha, h_identity(), m);
  const CAlphaResult b = c_alpha(Point::scalar(2.0), alpha, h_identity(), m);
  const Complex scaled = std::pow(2.0, alpha) * a.value.value;
  EXPECT_NEAR(b.value.value.real(), scaled.real(), 4.0 * std::hypot(b.value.se_re, 1.5 * a.value.se_re) + 2e-3);
  EXPECT_NEAR(b.value.value.imag(), scaled.imag(), 4.0 * std::hypot(b.value.se_im, 1.5 * a.value.se_im) + 2e-3);
}

TEST(CAlpha, BenchmarkRealPartNegative) {
  const auto ex = fixture::extremal_lognormal();
  const auto batch = stationary_batch(ex, 100000, 13);
  const GoldieEstimate g = goldie_constant(ex, batch, 14, 1.5, 0.75);
  const auto sigma = direction_histogram(batch.samples, sigma_mass(g.value, 1.5), 0.999);
  std::vector<double> norms = batch.norms();
  const double scale = 1.0 / stats::quantile(norms, 0.99);
  const TailMeasure m = TailMeasure::from_samples(1.5, sigma, batch.samples, scale);
  CAlphaOptions o;
  o.radial.nodes = 32;
  const CAlphaResult r = c_alpha(Point::scalar(1.0), 1.5, make_h(ex, 100, 1e-10, 15), m, o);
  EXPECT_LT(r.value.value.real(), 0.0);
  EXPECT_FALSE(r.indeterminate_sign);
  ASSERT_TRUE(r.half_scale.has_value());
}

TEST(Normalize, Examples) {
  const std::vector<Point> sixteen{Point::scalar(16.0)};
  EXPECT_DOUBLE_EQ(normalize_birkhoff(sixteen, 16, make_limit_params(0.5))[0][0], 0.0625);
  const std::vector<Point> one{Point::scalar(1.0)};
  const double d = std::sqrt(10.0 * std::log(10.0));
  EXPECT_NEAR(d, 4.7985, 1e-4);
  const std::vector<Point> sd{Point::scalar(d)};
  EXPECT_NEAR(normalize_birkhoff(sd, 10, make_limit_params(2.0, Point::scalar(0.0)))[0][0], 1.0, 1e-15);
  const std::vector<Point> centered{Point::scalar(30.0)};
  EXPECT_EQ(normalize_birkhoff(centered, 10, make_limit_params(1.5, Point::scalar(3.0)))[0][0], 0.0);
  const std::vector<Point> stat{Point::scalar(0.0)};
  EXPECT_DOUBLE_EQ(normalize_birkhoff(one, 4, make_limit_params(1.0, std::nullopt, &stat))[0][0], 0.25);
}

TEST(Normalize, RegimeErrors) {
  EXPECT_THROW(make_limit_params(1.5), PreconditionError);
  EXPECT_THROW(make_limit_params(1.0), PreconditionError);
  EXPECT_THROW(make_limit_params(2.5), PreconditionError);
  LimitParams p = make_limit_params(0.5);
  p.alpha = 1.5;
  EXPECT_THROW(normalize_birkhoff({Point::scalar(1.0)}, 10, p), PreconditionError);
  EXPECT_THROW(normalize_birkhoff({Point::scalar(1.0)}, 0, make_limit_params(0.5)), PreconditionError);
  EXPECT_EQ(regime_for(0.999), Regime::AlphaBelow1);
  EXPECT_EQ(regime_for(1.0), Regime::AlphaEq1);
  EXPECT_EQ(regime_for(1.85), Regime::AlphaIn12);
  EXPECT_EQ(regime_for(2.0), Regime::AlphaEq2);
}

TEST(EmpiricalCf, Examples) {
  const std::vector<Point> zero{Point::scalar(0.0)};
  EXPECT_EQ(empirical_cf(zero, 3.0, Point::scalar(1.0)).value, Complex(1.0, 0.0));
  const std::vector<Point> pm{Point::scalar(1.0), Point::scalar(-1.0)};
  const Complex c = empirical_cf(pm, std::numbers::pi, Point::scalar(1.0)).value;
  EXPECT_NEAR(c.real(), -1.0, 1e-15);
  EXPECT_NEAR(c.imag(), 0.0, 1e-15);
  const std::vector<Point> planar{Point{1.0, 2.0}};
  EXPECT_NEAR(empirical_cf(planar, 0.5, Point{0.0, 1.0}).value.real(), std::cos(1.0), 1e-15);
}

TEST(StableFit, RecoversIndex) {
  const struct {
    std::vector<Point> xs;
    double lo, hi;
  } cases[] = {{oracle::symmetric_stable(100000, 1.5, 16), 1.4, 1.6},
               {oracle::symmetric_stable(100000, 1.0, 17), 0.9, 1.1},
               {oracle::gaussian(100000, 18), 1.9, 2.1}};
  for (const auto& c : cases) {
    const auto window = auto_cf_window(c.xs, Point::scalar(1.0));
    const StableFit f = stable_index_fit(c.xs, window, Point::scalar(1.0));
    EXPECT_GE(f.alpha_hat, c.lo);
    EXPECT_LE(f.alpha_hat, c.hi);
  }
}

TEST(StableFit, ScaleMatchesCf) {
  // exp(-|t|^alpha): intercept log 1 = 0.
  const auto xs = oracle::symmetric_stable(200000, 1.5, 19);
  const StableFit f = stable_index_fit(xs, auto_cf_window(xs, Point::scalar(1.0)), Point::scalar(1.0));
  EXPECT_NEAR(f.regression.intercept, 0.0, 0.05);
}

TEST(GaussianCheck, Examples) {
  std::vector<double> normal, cauchy;
  for (const auto& p : oracle::gaussian(20000, 20)) normal.push_back(p[0]);
  for (const auto& p : oracle::symmetric_stable(20000, 1.0, 21)) cauchy.push_back(p[0]);
  EXPECT_TRUE(gaussian_check(normal).pass());
  EXPECT_FALSE(gaussian_check(cauchy).pass());
  EXPECT_THROW(gaussian_check(std::vector<double>(10, 1.0)), PreconditionError);
}

}  // namespace
}  // namespace irf
