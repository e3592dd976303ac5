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
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "irf/error.hpp"
#include "irf/model.hpp"
#include "irf/random.hpp"
#include "irf/stats.hpp"

namespace irf {

// Law of a nonnegative variable derived from one parameter law X:
//   Identity  scale |X|
//   Sqrt      scale sqrt(X)          (X >= 0)
//   ArchAbs   scale |gamma + sqrt(lambda) X|
struct AbsLaw {
  enum class Transform { Identity, Sqrt, ArchAbs };

  DistributionSpec base = dist::Constant{1.0};
  Transform transform = Transform::Identity;
  double scale = 1.0;
  double gamma = 0.0;
  double lambda = 1.0;

  double draw(Stream& s) const {
    const double x = sample(base, s);
    switch (transform) {
      case Transform::Identity: return scale * std::fabs(x);
      case Transform::Sqrt: return scale * std::sqrt(x);
      case Transform::ArchAbs: return scale * std::fabs(gamma + std::sqrt(lambda) * x);
    }
    return x;
  }

  // E value^s when a closed form exists.
  std::optional<double> moment(double s) const {
    std::optional<double> m;
    switch (transform) {
      case Transform::Identity: m = closed_form_moment(base, s); break;
      case Transform::Sqrt: m = closed_form_moment(base, 0.5 * s); break;
      case Transform::ArchAbs: return std::nullopt;
    }
    if (m) *m *= std::pow(scale, s);
    return m;
  }
};

// |M| for each family: A, sqrt(A), or |gamma + sqrt(lambda) A|.
inline AbsLaw m_law(const ModelSpec& spec) {
  AbsLaw law;
  law.base = spec.laws.at("a");
  if (spec.family == Family::SqrtQuadratic) law.transform = AbsLaw::Transform::Sqrt;
  if (spec.family == Family::Arch1) {
    law.transform = AbsLaw::Transform::ArchAbs;
    law.gamma = spec.arch.gamma;
    law.lambda = spec.arch.lambda;
  }
  return law;
}

// |N| where a single parameter law determines it (Extremal 2|B|, Arch1
// sqrt(beta)|A|, Affine d = 1 |B|); nullopt otherwise.
inline std::optional<AbsLaw> n_law(const ModelSpec& spec) {
  AbsLaw law;
  switch (spec.family) {
    case Family::Extremal:
      law.base = spec.laws.at("b");
      law.scale = 2.0;
      return law;
    case Family::Arch1:
      law.base = spec.laws.at("a");
      law.scale = std::sqrt(spec.arch.beta);
      return law;
    case Family::Affine:
      if (spec.dimension != 1) return std::nullopt;
      law.base = spec.laws.at("b");
      return law;
    default: return std::nullopt;
  }
}

enum class KappaMode { Auto, ClosedForm, MonteCarlo };

struct KappaValue {
  double value = 0.0;
  double se = 0.0;
  bool diverged = false;
};

// Monte Carlo estimator of s -> E|M|^s on one fixed set of draws, so that
// every evaluation uses common random numbers.
class KappaEstimator {
 public:
  static constexpr std::size_t kDefaultDraws = 1000000;

  explicit KappaEstimator(const AbsLaw& law, std::size_t draws = kDefaultDraws,
                          std::uint64_t seed = 0x6b617070u) {
    Stream stream(StreamKey{seed, 0, "kappa"});
    log_m_.reserve(draws);
    for (std::size_t i = 0; i < draws; ++i) log_m_.push_back(std::log(law.draw(stream)));
  }

  KappaValue operator()(double s) const {
    stats::Accumulator acc;
    for (double lm : log_m_) acc.push(std::exp(s * lm));
    KappaValue k{acc.mean(), acc.se(), false};
    k.diverged = !std::isfinite(k.value) || !std::isfinite(k.se);
    return k;
  }

  // E |M|^s log|M|
  KappaValue log_moment(double s) const {
    stats::Accumulator acc;
    for (double lm : log_m_) acc.push(lm == 0.0 || std::isinf(lm) ? 0.0 : std::exp(s * lm) * lm);
    KappaValue k{acc.mean(), acc.se(), false};
    k.diverged = !std::isfinite(k.value) || !std::isfinite(k.se);
    return k;
  }

  std::size_t size() const { return log_m_.size(); }

 private:
  std::vector<double> log_m_;
};

inline KappaValue kappa(const AbsLaw& law, double s, KappaMode mode = KappaMode::Auto) {
  if (s < 0.0) throw PreconditionError("kappa needs s >= 0");
  if (mode != KappaMode::MonteCarlo) {
    if (const auto m = law.moment(s)) return {*m, 0.0, !std::isfinite(*m)};
    if (mode == KappaMode::ClosedForm)
      throw PreconditionError("no closed form for kappa of this law");
  }
  if (s == 0.0) return {1.0, 0.0, false};
  return KappaEstimator(law)(s);
}

struct CramerOptions {
  KappaMode mode = KappaMode::Auto;
  std::optional<std::pair<double, double>> bracket;
  double tol = 1e-6;       // |kappa(alpha) - 1| target; 1e-3 is used in Monte Carlo mode
  double s_max = 1024.0;   // end of the automatic bracket search
};

namespace detail {

inline bool use_closed_form(const AbsLaw& law, KappaMode mode) {
  if (mode == KappaMode::MonteCarlo) return false;
  const bool has = law.moment(1.0).has_value();
  if (mode == KappaMode::ClosedForm && !has) throw PreconditionError("no closed form for kappa of this law");
  return has;
}

inline std::optional<double> lognormal_root(const AbsLaw& law) {
  const auto* ln = std::get_if<dist::LogNormal>(&law.base);
  if (!ln || law.transform == AbsLaw::Transform::ArchAbs) return std::nullopt;
  // log|M| ~ N(mu', sigma'^2) with mu' = k mu + log scale, sigma' = k sigma.
  const double k = law.transform == AbsLaw::Transform::Sqrt ? 0.5 : 1.0;
  const double mu = k * ln->meanlog + std::log(law.scale);
  const double sigma = k * ln->sdlog;
  if (!(mu < 0.0)) throw PreconditionError("no Cramer exponent: E log|M| >= 0");
  return -2.0 * mu / (sigma * sigma);
}

}  // namespace detail

// Solves kappa(alpha) = 1 for alpha > 0 by bisection.
inline double solve_cramer(const AbsLaw& law, const CramerOptions& opt = {}) {
  const bool closed = detail::use_closed_form(law, opt.mode);
  if (closed && !opt.bracket)
    if (const auto root = detail::lognormal_root(law)) return *root;

  std::optional<KappaEstimator> mc;
  if (!closed) mc.emplace(law);
  auto f = [&](double s) -> double {
    if (closed) return *law.moment(s) - 1.0;
    const KappaValue k = (*mc)(s);
    if (k.diverged) throw PreconditionError("kappa diverges inside the bracket (s beyond s_infinity)");
    return k.value - 1.0;
  };
  const double tol = closed ? opt.tol : std::max(opt.tol, 1e-3);

  double lo = 0.0, hi = 0.0;
  if (opt.bracket) {
    std::tie(lo, hi) = *opt.bracket;
    if (!(lo > 0.0 && hi > lo) || !(f(lo) < 0.0) || !(f(hi) > 0.0))
      throw PreconditionError("no Cramer exponent in bracket");
  } else {
    // kappa(0) = 1 and kappa is convex: a root exists iff kappa dips below one
    // near 0 and comes back above it.
    double s = 1e-3;
    if (!(f(s) < 0.0)) throw PreconditionError("no Cramer exponent: kappa does not dip below 1");
    lo = s;
    for (;;) {
      s *= 2.0;
      if (s > opt.s_max) throw PreconditionError("no Cramer exponent in bracket");
      const double v = f(s);
      if (v > 0.0) {
        hi = s;
        break;
      }
      lo = s;
    }
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double v = f(mid);
    if (std::fabs(v) <= tol && hi - lo < 1e-9) return mid;
    if (v < 0.0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) return mid;
  }
  return 0.5 * (lo + hi);
}

// m_alpha = E |M|^alpha log|M|; must be positive at the Cramer root.
inline double m_alpha(const AbsLaw& law, double alpha, KappaMode mode = KappaMode::Auto) {
  std::optional<double> closed;
  if (mode != KappaMode::MonteCarlo && law.transform != AbsLaw::Transform::ArchAbs) {
    // value = scale * X^k, log value = log scale + k log X.
    const double k = law.transform == AbsLaw::Transform::Sqrt ? 0.5 : 1.0;
    const double ls = std::log(law.scale);
    if (const auto* ln = std::get_if<dist::LogNormal>(&law.base)) {
      const double mu = k * ln->meanlog + ls, sigma = k * ln->sdlog;
      closed = std::exp(alpha * mu + 0.5 * alpha * alpha * sigma * sigma) * (mu + alpha * sigma * sigma);
    } else if (const auto at = atoms(law.base)) {
      double acc = 0.0;
      for (const auto& [v, p] : *at) {
        const double m = law.scale * std::pow(std::fabs(v), k);
        if (m > 0.0) acc += p * std::pow(m, alpha) * std::log(m);
      }
      closed = acc;
    }
  }
  double value;
  if (closed) {
    value = *closed;
  } else {
    if (mode == KappaMode::ClosedForm) throw PreconditionError("no closed form for m_alpha of this law");
    const KappaValue k = KappaEstimator(law).log_moment(alpha);
    if (k.diverged) throw PreconditionError("m_alpha Monte Carlo estimate diverged");
    value = k.value;
  }
  if (!(value > 0.0))
    throw PreconditionError("m_alpha must be positive; alpha is not the Cramer root");
  return value;
}

struct KappaRow {
  double s = 0.0;
  double kappa = 0.0;
  double se = 0.0;
};

struct CramerReport {
  enum class Method { ClosedForm, MonteCarlo };

  std::vector<KappaRow> grid;
  double alpha = 0.0;
  double m_alpha = 0.0;
  double s_infinity_probe = 0.0;  // lower bound on s_infinity
  Method method = Method::ClosedForm;
  double solver_tolerance = 0.0;
  bool arithmetic_risk = false;
};

// Largest s on the ladder 1, 2, 4, ... whose Monte Carlo kappa stays finite
// with relative se below 50%.
inline double probe_s_infinity(const KappaEstimator& est, double s_max = 1024.0) {
  double last = 0.0;
  for (double s = 1.0; s <= s_max; s *= 2.0) {
    const KappaValue k = est(s);
    if (k.diverged || k.se > 0.5 * k.value) break;
    last = s;
  }
  return last;
}

inline CramerReport cramer_report(const AbsLaw& law, const std::vector<double>& s_grid,
                                  const CramerOptions& opt = {}) {
  CramerReport rep;
  const bool closed = detail::use_closed_form(law, opt.mode);
  rep.method = closed ? CramerReport::Method::ClosedForm : CramerReport::Method::MonteCarlo;
  rep.solver_tolerance = closed ? opt.tol : std::max(opt.tol, 1e-3);
  rep.arithmetic_risk = law.transform != AbsLaw::Transform::ArchAbs && arithmetic_risk(law.base);
  const KappaEstimator est(law);
  for (double s : s_grid) {
    if (closed) {
      rep.grid.push_back({s, *law.moment(s), 0.0});
    } else {
      const KappaValue k = s == 0.0 ? KappaValue{1.0, 0.0, false} : est(s);
      rep.grid.push_back({s, k.value, k.se});
    }
  }
  rep.alpha = solve_cramer(law, opt);
  rep.m_alpha = m_alpha(law, rep.alpha, closed ? KappaMode::Auto : KappaMode::MonteCarlo);
  rep.s_infinity_probe = probe_s_infinity(est);
  return rep;
}

// Midpoint convexity of log kappa on consecutive equally spaced triples,
// allowing 3 combined standard errors.
inline bool log_kappa_convex(const std::vector<KappaRow>& grid) {
  for (std::size_t i = 0; i + 2 < grid.size(); ++i) {
    const auto &a = grid[i], &b = grid[i + 1], &c = grid[i + 2];
    if (std::fabs((b.s - a.s) - (c.s - b.s)) > 1e-12 * std::max(1.0, c.s)) continue;
    const double se = std::sqrt(std::pow(a.se / a.kappa, 2) + std::pow(b.se / b.kappa, 2) +
                                std::pow(c.se / c.kappa, 2));
    if (std::log(b.kappa) > 0.5 * (std::log(a.kappa) + std::log(c.kappa)) + 3.0 * se + 1e-12)
      return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Assumption checkers.
// ---------------------------------------------------------------------------

struct ContractionReport {
  stats::Estimate e_log_l;
  bool pass = false;
};

// E log L_theta < 0, accepted when mean + 3 se < 0.
inline ContractionReport check_contraction(const ModelSpec& spec, std::size_t n_samples, Stream& stream) {
  const ThetaSampler draw(spec);
  stats::Accumulator acc;
  for (std::size_t i = 0; i < n_samples; ++i) acc.push(std::log(lipschitz_bound(spec, draw(stream))));
  ContractionReport r{acc.estimate(), false};
  r.pass = r.e_log_l.value + 3.0 * r.e_log_l.se < 0.0;
  return r;
}

struct ViolationReport {
  double max_violation = 0.0;  // max of (lhs - bound); <= 0 means satisfied
  double fraction_violating = 0.0;
  std::size_t pairs = 0;
  bool pass() const { return fraction_violating == 0.0; }
};

// |psi(x) - M x| <= |N| over (theta, x) pairs with x from the given points.
inline ViolationReport check_cancellation(const ModelSpec& spec, const std::vector<Point>& points,
                                          std::size_t n_theta, Stream& stream) {
  const ThetaSampler draw(spec);
  ViolationReport r;
  r.max_violation = -std::numeric_limits<double>::infinity();
  std::size_t bad = 0;
  for (const Point& x : points) {
    for (std::size_t j = 0; j < n_theta; ++j) {
      const ThetaDraw th = draw(stream);
      const double excess =
          distance(apply(spec, th, x), linear_part(spec, th) * x) - cancellation_bound(spec, th);
      r.max_violation = std::max(r.max_violation, excess);
      if (excess > 1e-10) ++bad;
      ++r.pairs;
    }
  }
  if (r.pairs) r.fraction_violating = static_cast<double>(bad) / static_cast<double>(r.pairs);
  return r;
}

struct SmoothnessReport {
  double max_excess = 0.0;  // max of |psi_t(x) - limit(x)| - t |Q|
  bool pass = false;
};

inline SmoothnessReport check_smoothness(const ModelSpec& spec, const std::vector<Point>& x_grid,
                                         const std::vector<double>& t_grid, std::size_t n_theta,
                                         Stream& stream) {
  const ThetaSampler draw(spec);
  SmoothnessReport r;
  r.max_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n_theta; ++j) {
    const ThetaDraw th = draw(stream);
    const double q = smoothness_bound(spec, th);
    for (const Point& x : x_grid) {
      const Point lim = limit_map(spec, th, x);
      for (double t : t_grid)
        r.max_excess = std::max(r.max_excess, distance(apply_dilated(spec, th, t, x), lim) - t * q);
    }
  }
  r.pass = r.max_excess <= 1e-10;
  return r;
}

// Finite-moment check E f(|M|) < inf as agreement of two Monte Carlo sample
// sizes (1e5 vs 1e6) within 4 combined se.
struct MomentStability {
  stats::Estimate small, large;
  bool pass = false;
};

template <typename Fn>
MomentStability check_moment_stability(const AbsLaw& law, Fn&& fn, std::uint64_t seed = 7) {
  auto run = [&](std::size_t n, const char* label) {
    Stream s(StreamKey{seed, 0, label});
    stats::Accumulator acc;
    for (std::size_t i = 0; i < n; ++i) acc.push(fn(law.draw(s)));
    return acc.estimate();
  };
  MomentStability m{run(100000, "moment-small"), run(1000000, "moment-large"), false};
  const double se = std::hypot(m.small.se, m.large.se);
  m.pass = std::isfinite(m.large.value) && std::isfinite(se) &&
           std::fabs(m.small.value - m.large.value) <= 4.0 * se + 1e-12;
  return m;
}

struct NontrivialityRow {
  double s = 0.0;
  double ratio = 0.0;  // E|N|^s / kappa(s)
  double root = 0.0;   // ratio^(1/s)
};

struct NontrivialityProbe {
  std::vector<NontrivialityRow> curve;
  bool tail_decreasing = false;  // ratio non-increasing over the upper half of the grid
};

inline NontrivialityProbe nontriviality_probe(const AbsLaw& n, const AbsLaw& m, const std::vector<double>& s_grid) {
  std::optional<KappaEstimator> n_mc, m_mc;
  auto moment = [](const AbsLaw& law, std::optional<KappaEstimator>& mc, double s) {
    if (const auto v = law.moment(s)) return *v;
    if (!mc) mc.emplace(law);
    return (*mc)(s).value;
  };
  NontrivialityProbe p;
  for (double s : s_grid) {
    const double ratio = moment(n, n_mc, s) / moment(m, m_mc, s);
    p.curve.push_back({s, ratio, s > 0.0 ? std::pow(ratio, 1.0 / s) : ratio});
  }
  p.tail_decreasing = true;
  for (std::size_t i = p.curve.size() / 2; i + 1 < p.curve.size(); ++i)
    if (p.curve[i + 1].ratio > p.curve[i].ratio) p.tail_decreasing = false;
  return p;
}

}  // namespace irf
