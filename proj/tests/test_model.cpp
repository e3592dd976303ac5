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
#include <numbers>
#include <vector>

#include "irf/model.hpp"
#include "models.hpp"

namespace irf {
namespace {

using fixture::theta;

std::vector<ModelSpec> zoo() {
  return {fixture::extremal_lognormal(),
          fixture::extremal(dist::Uniform{0.1, 1.5}, dist::Normal{0.0, 2.0}),
          fixture::affine1(dist::LogNormal{-0.5, 1.0}, dist::Normal{0.0, 1.0}),
          fixture::affine2(),
          fixture::affine3(),
          fixture::letac(dist::LogNormal{-0.5, 1.0}, dist::Uniform{0.0, 2.0}, dist::Normal{0.0, 1.0}),
          fixture::letac_counterexample(),
          fixture::sqrt_quadratic(dist::Uniform{0.2, 1.5}, dist::Uniform{0.0, 0.5}, dist::Uniform{0.5, 2.0}),
          fixture::arch1(0.3, 2.0, 0.5)};
}

Point random_point(std::size_t dim, Stream& s, double scale = 5.0) {
  Point p(dim);
  for (std::size_t j = 0; j < dim; ++j) p[j] = scale * (2.0 * s.uniform() - 1.0);
  return p;
}

TEST(Apply, Examples) {
  const ModelSpec ex = fixture::extremal(dist::Constant{2.0}, dist::Constant{3.0});
  EXPECT_EQ(apply(ex, theta(2, 3), Point::scalar(1.0))[0], 3.0);
  const ModelSpec af = fixture::affine1(dist::Constant{0.5}, dist::Constant{1.0});
  EXPECT_EQ(apply(af, theta(0.5, 1), Point::scalar(2.0))[0], 2.0);
  const ModelSpec sq = fixture::sqrt_quadratic(dist::Constant{1.0}, dist::Constant{0.0}, dist::Constant{1.0});
  EXPECT_EQ(apply(sq, theta(1, 0, 1), Point::scalar(0.0))[0], 1.0);
}

TEST(ApplyDilated, Examples) {
  const ModelSpec ex = fixture::extremal(dist::Constant{2.0}, dist::Constant{3.0});
  EXPECT_EQ(apply_dilated(ex, theta(2, 3), 0.5, Point::scalar(1.0))[0], 2.0);
  const ModelSpec af = fixture::affine1(dist::Constant{0.7}, dist::Constant{1.3});
  for (double t : {0.1, 0.5, 2.0})
    EXPECT_DOUBLE_EQ(apply_dilated(af, theta(0.7, 1.3), t, Point::scalar(2.0))[0], 0.7 * 2.0 + t * 1.3);
}

TEST(ApplyDilated, UnitDilationIsApplyBitForBit) {
  Stream s(StreamKey{1, 0, "t1"});
  for (const auto& spec : zoo()) {
    const ThetaSampler draw(spec);
    for (int i = 0; i < 2000; ++i) {
      const ThetaDraw th = draw(s);
      const Point x = random_point(spec.dimension, s);
      ASSERT_EQ(apply_dilated(spec, th, 1.0, x), apply(spec, th, x)) << family_name(spec.family);
    }
  }
}

TEST(LimitMap, Examples) {
  const ModelSpec ex = fixture::extremal(dist::Constant{2.0}, dist::Constant{1.0});
  EXPECT_EQ(limit_map(ex, theta(2, 1), Point::scalar(-1.0))[0], 0.0);
  const ModelSpec ar = fixture::arch1(0.5, 1.0, 1.0, dist::Normal{0.0, 1.0});
  EXPECT_DOUBLE_EQ(limit_map(ar, theta(1.0), Point::scalar(2.0))[0], 3.0);
  Stream s(StreamKey{2, 0, "zero"});
  for (const auto& spec : zoo()) {
    const ThetaDraw th = ThetaSampler(spec)(s);
    EXPECT_EQ(limit_map(spec, th, Point(spec.dimension)).norm(), 0.0) << family_name(spec.family);
  }
}

TEST(LimitMap, PositivelyHomogeneous) {
  Stream s(StreamKey{3, 0, "homog"});
  for (const auto& spec : zoo()) {
    const ThetaSampler draw(spec);
    for (int i = 0; i < 2000; ++i) {
      const ThetaDraw th = draw(s);
      const Point x = random_point(spec.dimension, s);
      const double c = 0.1 + 10.0 * s.uniform();
      const Point lhs = limit_map(spec, th, c * x), rhs = c * limit_map(spec, th, x);
      ASSERT_LE(distance(lhs, rhs), 1e-12 * (1.0 + rhs.norm())) << family_name(spec.family);
    }
  }
}

TEST(LimitMap, IsSmallDilationLimit) {
  Stream s(StreamKey{4, 0, "lim"});
  for (const auto& spec : zoo()) {
    const ThetaSampler draw(spec);
    const ThetaDraw th = draw(s);
    const Point x = random_point(spec.dimension, s);
    EXPECT_LE(distance(apply_dilated(spec, th, 1e-9, x), limit_map(spec, th, x)), 1e-7) << family_name(spec.family);
  }
}

TEST(Bounds, Examples) {
  const ModelSpec ex = fixture::extremal(dist::Constant{2.0}, dist::Constant{7.0});
  EXPECT_EQ(lipschitz_bound(ex, theta(2, 7)), 2.0);
  EXPECT_EQ(cancellation_bound(ex, theta(2, 3)), 6.0);
  EXPECT_EQ(smoothness_bound(ex, theta(2, 3)), 3.0);
  const ModelSpec sq = fixture::sqrt_quadratic(dist::Constant{4.0}, dist::Constant{0.0}, dist::Constant{1.0});
  EXPECT_EQ(lipschitz_bound(sq, theta(4, 0, 1)), 2.0);
  EXPECT_EQ(smoothness_bound(sq, theta(1, 0, 1)), 1.0);
  const ModelSpec af = fixture::affine1(dist::Constant{0.3}, dist::Constant{0.0});
  EXPECT_EQ(lipschitz_bound(af, theta(0.3, 0)), 0.3);
  EXPECT_EQ(cancellation_bound(af, theta(0.3, 0)), 0.0);
  EXPECT_EQ(smoothness_bound(af, theta(0.3, 2)), 2.0);
  const ModelSpec ar = fixture::arch1(0.5, 4.0, 1.0, dist::Normal{0.0, 1.0});
  EXPECT_EQ(cancellation_bound(ar, theta(1.5)), 3.0);
}

TEST(LinearPart, Examples) {
  const ModelSpec ex = fixture::extremal(dist::Constant{2.0}, dist::Constant{1.0});
  const LinearPart lp = linear_part(ex, theta(2, 1));
  EXPECT_EQ(lp.scale, 2.0);
  EXPECT_EQ(lp.rotation(0, 0), 1.0);
  const ModelSpec ar = fixture::arch1(0.5, 1.0, 1.0, dist::Normal{0.0, 1.0});
  EXPECT_DOUBLE_EQ(linear_part(ar, theta(-2.0)).scale, 1.5);

  ModelSpec a2 = fixture::affine2();
  a2.laws["a"] = dist::Constant{0.7};
  a2.laws["angle"] = dist::Constant{std::numbers::pi / 2};
  Stream s(StreamKey{1, 0, "lp"});
  const LinearPart q = linear_part(a2, ThetaSampler(a2)(s));
  EXPECT_EQ(q.scale, 0.7);
  const Point e1 = q.rotation * Point{1.0, 0.0};
  EXPECT_NEAR(e1[0], 0.0, 1e-15);
  EXPECT_NEAR(e1[1], 1.0, 1e-15);
}

TEST(ThetaSampler, Examples) {
  Stream s(StreamKey{5, 0, "theta"});
  const ModelSpec ex = fixture::extremal(dist::Constant{0.5}, dist::Constant{1.0});
  for (int i = 0; i < 10; ++i) {
    const ThetaDraw th = sample_theta(ex, s);
    EXPECT_EQ(th.a, 0.5);
    EXPECT_EQ(th.b, 1.0);
  }
  const ModelSpec af = fixture::affine1(dist::LogNormal{0.0, 1.0}, dist::Normal{0.0, 1.0});
  const ThetaDraw th = sample_theta(af, s);
  EXPECT_TRUE(std::isfinite(th.a) && std::isfinite(th.shift[0]));
  const ModelSpec sq = fixture::sqrt_quadratic(dist::Constant{1.0}, dist::Constant{0.0}, dist::Constant{1.0});
  const ThetaDraw q = sample_theta(sq, s);
  EXPECT_EQ(q.a, 1.0);
  EXPECT_EQ(q.b, 0.0);
  EXPECT_EQ(q.c, 1.0);
  EXPECT_LT(q.b * q.b - 4 * q.a * q.c, 0.0);
}

TEST(ThetaSampler, RotationsAreOrthogonal) {
  Stream s(StreamKey{6, 0, "rot"});
  for (const auto& spec : {fixture::affine2(), fixture::affine3()}) {
    const ThetaSampler draw(spec);
    for (int i = 0; i < 1000; ++i) ASSERT_LT(draw(s).rotation.orthogonality_defect(), 1e-12);
  }
}

TEST(ThetaSampler, SqrtQuadraticRejectionGivesUp) {
  const ModelSpec sq = fixture::sqrt_quadratic(dist::Constant{1.0}, dist::Constant{3.0}, dist::Constant{1.0});
  Stream s(StreamKey{7, 0, "rej"});
  EXPECT_THROW(ThetaSampler{sq}(s), ConfigError);
}

// ---- sampled property checks over the whole zoo -------------------------

TEST(Property, Lipschitz) {
  Stream s(StreamKey{10, 0, "lip"});
  for (const auto& spec : zoo()) {
    const ThetaSampler draw(spec);
    for (int i = 0; i < 10000; ++i) {
      const ThetaDraw th = draw(s);
      const Point x = random_point(spec.dimension, s), y = random_point(spec.dimension, s);
      ASSERT_LE(distance(apply(spec, th, x), apply(spec, th, y)), lipschitz_bound(spec, th) * distance(x, y) + 1e-10)
          << family_name(spec.family);
    }
  }
}

TEST(Property, DilationSmoothness) {
  Stream s(StreamKey{11, 0, "smooth"});
  for (const auto& spec : zoo()) {
    const ThetaSampler draw(spec);
    for (int i = 0; i < 10000; ++i) {
      const ThetaDraw th = draw(s);
      const Point x = random_point(spec.dimension, s);
      const double t = s.uniform();
      ASSERT_LE(distance(apply_dilated(spec, th, t, x), limit_map(spec, th, x)), t * smoothness_bound(spec, th) + 1e-10)
          << family_name(spec.family);
    }
  }
}

// On the nonnegative half-line psi(x) - M x is bounded by |N| for the
// one-sided families.
TEST(Property, CancellationOnSupport) {
  Stream s(StreamKey{12, 0, "cancel"});
  for (const auto& spec : zoo()) {
    const bool one_sided = spec.family == Family::Extremal || spec.family == Family::SqrtQuadratic ||
                           spec.family == Family::Arch1 || spec.family == Family::Letac;
    const ThetaSampler draw(spec);
    for (int i = 0; i < 10000; ++i) {
      const ThetaDraw th = draw(s);
      Point x = random_point(spec.dimension, s, 50.0);
      if (one_sided) x[0] = std::fabs(x[0]);
      const LinearPart lp = linear_part(spec, th);
      const double gap = distance(apply(spec, th, x), lp.scale * (lp.rotation * x));
      ASSERT_LE(gap, cancellation_bound(spec, th) + 1e-10) << family_name(spec.family);
    }
  }
}

TEST(Property, ExtremalCancellationFailsOffSupport) {
  const ModelSpec ex = fixture::extremal(dist::Constant{2.0}, dist::Constant{1.0});
  const ThetaDraw th = theta(2, 1);
  const Point x = Point::scalar(-1.0);
  // max(-2, 1) - (-2) = 3 > 2|B| = 2
  EXPECT_GT(distance(apply(ex, th, x), linear_part(ex, th).scale * x), cancellation_bound(ex, th));
}

TEST(Validate, RejectsBadSpecs) {
  ModelSpec bad = fixture::extremal(dist::Normal{0.0, 1.0}, dist::Constant{1.0});
  EXPECT_THROW(validate(bad), ConfigError);
  ModelSpec missing;
  missing.family = Family::Letac;
  missing.laws = {{"a", dist::Constant{0.5}}};
  try {
    validate(missing);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.issue(), ConfigIssue::kMissingLaw);
  }
  ModelSpec wide = fixture::affine1(dist::Constant{0.5}, dist::Constant{1.0});
  wide.dimension = 5;
  try {
    validate(wide);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.issue(), ConfigIssue::kDimension);
  }
  EXPECT_THROW(validate(fixture::arch1(0.3, 1.0, 1.0, dist::LogNormal{0.0, 1.0})), ConfigError);
  EXPECT_NO_THROW(validate(fixture::letac_counterexample()));
}

}  // namespace
}  // namespace irf
