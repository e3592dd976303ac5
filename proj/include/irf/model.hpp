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

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "irf/error.hpp"
#include "irf/point.hpp"
#include "irf/random.hpp"

// Catalog of random Lipschitz map families x -> psi_theta(x):
//   Affine         A R x + B                      (R a rotation, d <= 3)
//   Extremal       max(A x, B)
//   Letac          A max(x, B) + C
//   SqrtQuadratic  sqrt(A x^2 + B x + C)
//   Arch1          | gamma |x| + sqrt(beta + lambda x^2) A |
// Each family also exposes its dilatation t psi(x / t), the t -> 0 limit of
// that dilatation, and per-draw Lipschitz / residual constants.
namespace irf {

enum class Family { Affine, Extremal, Letac, SqrtQuadratic, Arch1 };

inline const char* family_name(Family f) {
  switch (f) {
    case Family::Affine: return "affine";
    case Family::Extremal: return "extremal";
    case Family::Letac: return "letac";
    case Family::SqrtQuadratic: return "sqrt_quadratic";
    case Family::Arch1: return "arch1";
  }
  return "?";
}

struct ArchConstants {
  double gamma = 0.0;
  double beta = 1.0;
  double lambda = 1.0;
};

struct ModelSpec {
  Family family = Family::Extremal;
  std::size_t dimension = 1;
  std::map<std::string, DistributionSpec> laws;
  ArchConstants arch;
};

// One realization of the random parameters.
struct ThetaDraw {
  double a = 1.0;  // scale A (innovation A for Arch1)
  double b = 0.0;  // scalar B
  double c = 0.0;  // scalar C
  Point shift;     // Affine shift vector
  Matrix rotation = Matrix::identity(1);
};

struct LinearPart {
  double scale = 1.0;
  Matrix rotation = Matrix::identity(1);

  Point operator*(const Point& x) const { return scale * (rotation * x); }
};

namespace detail {

inline double law_lower_bound(const DistributionSpec& d) {
  return std::visit(
      [](const auto& law) -> double {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, dist::Constant>) {
          return law.value;
        } else if constexpr (std::is_same_v<T, dist::DiscreteTable>) {
          double m = std::numeric_limits<double>::infinity();
          for (std::size_t i = 0; i < law.values.size(); ++i)
            if (law.probabilities[i] > 0.0) m = std::min(m, law.values[i]);
          return m;
        } else if constexpr (std::is_same_v<T, dist::LogNormal>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, dist::Uniform>) {
          return law.a;
        } else {
          return -std::numeric_limits<double>::infinity();
        }
      },
      d);
}

// LogNormal and Uniform(0, b) never produce exactly 0.
inline bool law_positive(const DistributionSpec& d) {
  const double lo = law_lower_bound(d);
  if (std::holds_alternative<dist::LogNormal>(d) || std::holds_alternative<dist::Uniform>(d))
    return lo >= 0.0;
  return lo > 0.0;
}

inline bool law_symmetric(const DistributionSpec& d) {
  if (const auto* c = std::get_if<dist::Constant>(&d)) return c->value == 0.0;
  if (const auto* n = std::get_if<dist::Normal>(&d)) return n->mean == 0.0;
  if (const auto* u = std::get_if<dist::Uniform>(&d)) return u->a == -u->b;
  if (const auto* t = std::get_if<dist::DiscreteTable>(&d)) {
    for (std::size_t i = 0; i < t->values.size(); ++i) {
      double mirror = 0.0;
      for (std::size_t j = 0; j < t->values.size(); ++j)
        if (t->values[j] == -t->values[i]) mirror += t->probabilities[j];
      if (std::fabs(mirror - t->probabilities[i]) > 1e-12) return false;
    }
    return true;
  }
  return false;
}

inline std::string describe_theta(Family f, const ThetaDraw& th) {
  std::ostringstream os;
  os.precision(17);
  os << family_name(f) << " theta(a=" << th.a << ", b=" << th.b << ", c=" << th.c;
  if (f == Family::Affine) os << ", shift=" << th.shift;
  os << ")";
  return os.str();
}

inline Point checked(Family f, const ThetaDraw& th, Point y) {
  if (!y.finite()) throw DomainError("non-finite map value for " + describe_theta(f, th));
  return y;
}

}  // namespace detail

// Names of the parameter laws a family needs.
inline std::vector<std::string> required_parameters(Family family, std::size_t dim) {
  switch (family) {
    case Family::Affine:
      if (dim == 1) return {"a", "b"};
      if (dim == 2) return {"a", "angle", "b1", "b2"};
      return {"a", "angle", "axis1", "axis2", "axis3", "b1", "b2", "b3"};
    case Family::Extremal: return {"a", "b"};
    case Family::Letac:
    case Family::SqrtQuadratic: return {"a", "b", "c"};
    case Family::Arch1: return {"a"};
  }
  return {};
}

inline void validate(const ModelSpec& spec) {
  if (spec.dimension < 1 || spec.dimension > kMaxDim)
    throw ConfigError("dimension <= 3 required (got " + std::to_string(spec.dimension) + ")",
                      ConfigIssue::kDimension);
  if (spec.family != Family::Affine && spec.dimension != 1)
    throw ConfigError(std::string("family ") + family_name(spec.family) + " is scalar (dimension 1)",
                      ConfigIssue::kDimension);
  for (const auto& name : required_parameters(spec.family, spec.dimension))
    if (!spec.laws.count(name))
      throw ConfigError("missing parameter law '" + name + "' for family " + family_name(spec.family),
                        ConfigIssue::kMissingLaw);
  for (const auto& [name, law] : spec.laws) {
    try {
      validate(law);
    } catch (const ConfigError& e) {
      throw ConfigError("law '" + name + "': " + e.what(), e.issue());
    }
  }
  const auto& laws = spec.laws;
  auto need_positive = [&](const char* n) {
    if (!detail::law_positive(laws.at(n)))
      throw ConfigError(std::string("parameter '") + n + "' must be > 0 almost surely");
  };
  auto need_nonnegative = [&](const char* n) {
    if (detail::law_lower_bound(laws.at(n)) < 0.0)
      throw ConfigError(std::string("parameter '") + n + "' must be >= 0 almost surely");
  };
  switch (spec.family) {
    case Family::Affine:
      need_positive("a");
      if (spec.dimension == 1 && laws.count("sign")) {
        const auto at = atoms(laws.at("sign"));
        if (!at) throw ConfigError("parameter 'sign' must be discrete with values +1/-1");
        for (const auto& [v, p] : *at)
          if (v != 1.0 && v != -1.0) throw ConfigError("parameter 'sign' must take values +1/-1");
      }
      break;
    case Family::Extremal: need_positive("a"); break;
    case Family::Letac:
      need_positive("a");
      need_nonnegative("b");
      break;
    case Family::SqrtQuadratic:
      need_positive("a");
      need_nonnegative("b");
      need_nonnegative("c");
      break;
    case Family::Arch1:
      if (!(spec.arch.gamma >= 0.0) || !(spec.arch.beta > 0.0) || !(spec.arch.lambda > 0.0))
        throw ConfigError("arch1 needs gamma >= 0, beta > 0, lambda > 0");
      if (!detail::law_symmetric(laws.at("a")))
        throw ConfigError("arch1 innovation 'a' must be symmetric");
      break;
  }
}

inline Point apply_dilated(const ModelSpec& spec, const ThetaDraw& th, double t, const Point& x) {
  const Family f = spec.family;
  switch (f) {
    case Family::Affine: {
      Point y = th.a * (th.rotation * x);
      return detail::checked(f, th, y += t * th.shift);
    }
    case Family::Extremal:
      return detail::checked(f, th, Point::scalar(std::max(th.a * x[0], t * th.b)));
    case Family::Letac:
      return detail::checked(f, th, Point::scalar(th.a * std::max(x[0], t * th.b) + t * th.c));
    case Family::SqrtQuadratic: {
      const double r = th.a * x[0] * x[0] + th.b * t * x[0] + th.c * t * t;
      if (!(r >= 0.0)) throw DomainError("negative radicand for " + detail::describe_theta(f, th));
      return detail::checked(f, th, Point::scalar(std::sqrt(r)));
    }
    case Family::Arch1: {
      const auto& k = spec.arch;
      const double v = k.gamma * std::fabs(x[0]) + std::sqrt(k.beta * t * t + k.lambda * x[0] * x[0]) * th.a;
      return detail::checked(f, th, Point::scalar(std::fabs(v)));
    }
  }
  return x;
}

inline Point apply(const ModelSpec& spec, const ThetaDraw& th, const Point& x) {
  return apply_dilated(spec, th, 1.0, x);
}

inline LinearPart linear_part(const ModelSpec& spec, const ThetaDraw& th) {
  switch (spec.family) {
    case Family::Affine: return {th.a, th.rotation};
    case Family::SqrtQuadratic: return {std::sqrt(th.a), Matrix::identity(1)};
    case Family::Arch1:
      return {std::fabs(spec.arch.gamma + std::sqrt(spec.arch.lambda) * th.a), Matrix::identity(1)};
    default: return {th.a, Matrix::identity(1)};
  }
}

// t -> 0 limit of the dilatation; positively homogeneous of degree one.
inline Point limit_map(const ModelSpec& spec, const ThetaDraw& th, const Point& x) {
  switch (spec.family) {
    case Family::Affine: return th.a * (th.rotation * x);
    case Family::Extremal: return Point::scalar(std::max(th.a * x[0], 0.0));
    case Family::Letac: return Point::scalar(th.a * std::max(x[0], 0.0));
    case Family::SqrtQuadratic: return Point::scalar(std::sqrt(th.a) * std::fabs(x[0]));
    case Family::Arch1:
      return Point::scalar(std::fabs(spec.arch.gamma + std::sqrt(spec.arch.lambda) * th.a) *
                           std::fabs(x[0]));
  }
  return x;
}

inline double lipschitz_bound(const ModelSpec& spec, const ThetaDraw& th) {
  switch (spec.family) {
    case Family::SqrtQuadratic: return std::sqrt(th.a);
    case Family::Arch1: return spec.arch.gamma + std::sqrt(spec.arch.lambda) * std::fabs(th.a);
    default: return th.a;
  }
}

// |N_theta| with |psi(x) - M x| <= |N_theta| on the stationary support.
inline double cancellation_bound(const ModelSpec& spec, const ThetaDraw& th) {
  switch (spec.family) {
    case Family::Affine: return th.shift.norm();
    case Family::Extremal: return 2.0 * std::fabs(th.b);
    case Family::Letac: return th.a * std::fabs(th.b) + std::fabs(th.c);
    case Family::SqrtQuadratic: return th.b / std::sqrt(th.a) + std::sqrt(th.c);
    case Family::Arch1: return std::sqrt(spec.arch.beta) * std::fabs(th.a);
  }
  return 0.0;
}

// |Q_theta| with |psi_{theta,t}(x) - limit(x)| <= t |Q_theta|.
inline double smoothness_bound(const ModelSpec& spec, const ThetaDraw& th) {
  switch (spec.family) {
    case Family::Affine: return th.shift.norm();
    case Family::Extremal: return std::fabs(th.b);
    case Family::Letac: return th.a * std::fabs(th.b) + std::fabs(th.c);
    case Family::SqrtQuadratic: {
      const double v = th.c - th.b * th.b / (4.0 * th.a);
      return th.b / std::sqrt(th.a) + (th.c > 0.0 ? th.c / std::sqrt(v) : 0.0);
    }
    case Family::Arch1: return std::sqrt(spec.arch.beta) * std::fabs(th.a);
  }
  return 0.0;
}

namespace detail {

inline Matrix rotation_2d(double angle) {
  Matrix r(2);
  const double c = std::cos(angle), s = std::sin(angle);
  r(0, 0) = c;
  r(0, 1) = -s;
  r(1, 0) = s;
  r(1, 1) = c;
  return r;
}

// Rodrigues formula; a zero axis gives the identity.
inline Matrix rotation_3d(double angle, double ux, double uy, double uz) {
  const double n = std::sqrt(ux * ux + uy * uy + uz * uz);
  if (n == 0.0) return Matrix::identity(3);
  ux /= n;
  uy /= n;
  uz /= n;
  const double c = std::cos(angle), s = std::sin(angle), C = 1.0 - c;
  Matrix r(3);
  r(0, 0) = c + ux * ux * C;
  r(0, 1) = ux * uy * C - uz * s;
  r(0, 2) = ux * uz * C + uy * s;
  r(1, 0) = uy * ux * C + uz * s;
  r(1, 1) = c + uy * uy * C;
  r(1, 2) = uy * uz * C - ux * s;
  r(2, 0) = uz * ux * C - uy * s;
  r(2, 1) = uz * uy * C + ux * s;
  r(2, 2) = c + uz * uz * C;
  return r;
}

}  // namespace detail

// Draws theta ~ mu. The law lookups are resolved once at construction.
class ThetaSampler {
 public:
  static constexpr int kMaxRejections = 100;

  explicit ThetaSampler(const ModelSpec& spec) : family_(spec.family), dim_(spec.dimension) {
    validate(spec);
    for (const auto& name : required_parameters(family_, dim_)) laws_.push_back(spec.laws.at(name));
    if (family_ == Family::Affine && dim_ == 1 && spec.laws.count("sign"))
      sign_ = spec.laws.at("sign");
  }

  ThetaDraw operator()(Stream& s) const {
    ThetaDraw th;
    switch (family_) {
      case Family::Affine: {
        th.a = sample(laws_[0], s);
        if (dim_ == 1) {
          th.shift = Point::scalar(sample(laws_[1], s));
          th.rotation = Matrix::identity(1);
          if (sign_) th.rotation(0, 0) = sample(*sign_, s);
        } else if (dim_ == 2) {
          th.rotation = detail::rotation_2d(sample(laws_[1], s));
          th.shift = Point{sample(laws_[2], s), sample(laws_[3], s)};
        } else {
          const double angle = sample(laws_[1], s);
          const double ux = sample(laws_[2], s), uy = sample(laws_[3], s), uz = sample(laws_[4], s);
          th.rotation = detail::rotation_3d(angle, ux, uy, uz);
          th.shift = Point{sample(laws_[5], s), sample(laws_[6], s), sample(laws_[7], s)};
        }
        th.b = th.shift[0];
        break;
      }
      case Family::Extremal:
        th.a = sample(laws_[0], s);
        th.b = sample(laws_[1], s);
        break;
      case Family::Letac:
        th.a = sample(laws_[0], s);
        th.b = sample(laws_[1], s);
        th.c = sample(laws_[2], s);
        break;
      case Family::SqrtQuadratic: {
        int attempt = 0;
        for (;;) {
          th.a = sample(laws_[0], s);
          th.b = sample(laws_[1], s);
          th.c = sample(laws_[2], s);
          if (th.b * th.b - 4.0 * th.a * th.c < 0.0) break;
          if (++attempt == kMaxRejections)
            throw ConfigError("sqrt_quadratic: 100 consecutive draws violated B^2 - 4AC < 0");
        }
        break;
      }
      case Family::Arch1: th.a = sample(laws_[0], s); break;
    }
    return th;
  }

 private:
  Family family_;
  std::size_t dim_;
  std::vector<DistributionSpec> laws_;
  std::optional<DistributionSpec> sign_;
};

inline ThetaDraw sample_theta(const ModelSpec& spec, Stream& stream) {
  return ThetaSampler(spec)(stream);
}

}  // namespace irf
