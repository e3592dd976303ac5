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


// Model specs shared by the tests.

#pragma once

#include "irf/model.hpp"

namespace irf::fixture {

inline ModelSpec extremal(DistributionSpec a, DistributionSpec b) {
  ModelSpec s;
  s.family = Family::Extremal;
  s.laws = {{"a", a}, {"b", b}};
  return s;
}

// max(A x, 1), A ~ LogNormal(mu, 1): tail index -2 mu.
inline ModelSpec extremal_lognormal(double mu = -0.75) { return extremal(dist::LogNormal{mu, 1.0}, dist::Constant{1.0}); }

inline ModelSpec affine1(DistributionSpec a, DistributionSpec b) {
  ModelSpec s;
  s.family = Family::Affine;
  s.laws = {{"a", a}, {"b", b}};
  return s;
}

inline ModelSpec affine2() {
  ModelSpec s;
  s.family = Family::Affine;
  s.dimension = 2;
  s.laws = {{"a", dist::LogNormal{-0.5, 0.5}},
            {"angle", dist::Uniform{0.0, 6.283185307179586}},
            {"b1", dist::Normal{0.0, 1.0}},
            {"b2", dist::Normal{0.0, 1.0}}};
  return s;
}

inline ModelSpec affine3() {
  ModelSpec s;
  s.family = Family::Affine;
  s.dimension = 3;
  s.laws = {{"a", dist::LogNormal{-0.5, 0.5}},
            {"angle", dist::Uniform{0.0, 6.283185307179586}},
            {"axis1", dist::Normal{0.0, 1.0}},
            {"axis2", dist::Normal{0.0, 1.0}},
            {"axis3", dist::Normal{0.0, 1.0}},
            {"b1", dist::Normal{0.0, 1.0}},
            {"b2", dist::Normal{0.0, 1.0}},
            {"b3", dist::Normal{0.0, 1.0}}};
  return s;
}

inline ModelSpec letac(DistributionSpec a, DistributionSpec b, DistributionSpec c) {
  ModelSpec s;
  s.family = Family::Letac;
  s.laws = {{"a", a}, {"b", b}, {"c", c}};
  return s;
}

// A in {1/3, 2} w.p. 3/4, 1/4; B = 1/2; C = -1.
inline ModelSpec letac_counterexample() {
  return letac(dist::DiscreteTable{{1.0 / 3.0, 2.0}, {0.75, 0.25}}, dist::Constant{0.5}, dist::Constant{-1.0});
}

inline ModelSpec sqrt_quadratic(DistributionSpec a, DistributionSpec b, DistributionSpec c) {
  ModelSpec s;
  s.family = Family::SqrtQuadratic;
  s.laws = {{"a", a}, {"b", b}, {"c", c}};
  return s;
}

inline ModelSpec arch1(double gamma, double beta, double lambda, DistributionSpec a = dist::Normal{0.0, 0.5}) {
  ModelSpec s;
  s.family = Family::Arch1;
  s.arch = {gamma, beta, lambda};
  s.laws = {{"a", a}};
  return s;
}

inline ThetaDraw theta(double a, double b = 0.0, double c = 0.0) {
  ThetaDraw t;
  t.a = a;
  t.b = b;
  t.c = c;
  t.shift = Point::scalar(b);
  return t;
}

}  // namespace irf::fixture
