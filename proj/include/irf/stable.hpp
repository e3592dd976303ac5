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
#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "irf/error.hpp"
#include "irf/model.hpp"
#include "irf/parallel.hpp"
#include "irf/point.hpp"
#include "irf/quadrature.hpp"
#include "irf/random.hpp"
#include "irf/stats.hpp"
#include "irf/tail.hpp"

namespace irf {

using stats::ComplexEstimate;
using Complex = std::complex<double>;

struct VectorEstimate {
  Point value;
  Point se;
};

// ---------------------------------------------------------------------------
// The linearized series phi(x) = sum_k limit_k o ... o limit_1 (x) and h_v.
// ---------------------------------------------------------------------------

inline constexpr std::size_t kMaxSeriesTerms = 100000;

// One realization of phi(x), truncated once prod_k |M_k| * |x| < trunc_tol.
inline Point phi_series_sample(const ModelSpec& spec, const ThetaSampler& draw, const Point& x,
                               double trunc_tol, Stream& stream) {
  Point sum(x.dim());
  Point y = x;
  const double r = x.norm();
  if (r == 0.0) return sum;
  double prod = 1.0;
  for (std::size_t k = 1; k <= kMaxSeriesTerms; ++k) {
    const ThetaDraw th = draw(stream);
    y = limit_map(spec, th, y);
    sum += y;
    prod *= linear_part(spec, th).scale;
    if (prod * r < trunc_tol || y.norm() == 0.0) return sum;
  }
  throw ConvergenceError("phi series exceeded " + std::to_string(kMaxSeriesTerms) + " terms", prod * r);
}

inline Point phi_series_sample(const ModelSpec& spec, const Point& x, double trunc_tol, Stream& stream) {
  return phi_series_sample(spec, ThetaSampler(spec), x, trunc_tol, stream);
}

// h_v(x) = E exp(i <v, phi(x)>) from mc_reps series samples.
inline ComplexEstimate h_v(const ModelSpec& spec, const Point& x, const Point& v, std::size_t mc_reps,
                           double trunc_tol, const StreamKey& key) {
  const ThetaSampler draw(spec);
  Stream stream(key);
  stats::Accumulator re, im;
  for (std::size_t i = 0; i < mc_reps; ++i) {
    const double phase = dot(v, phi_series_sample(spec, draw, x, trunc_tol, stream));
    re.push(std::cos(phase));
    im.push(std::sin(phase));
  }
  return {{re.mean(), im.mean()}, re.se(), im.se()};
}

// E phi(x), used by the alpha = 2 constant.
inline VectorEstimate phi_mean(const ModelSpec& spec, const Point& x, std::size_t mc_reps, double trunc_tol,
                               const StreamKey& key) {
  const ThetaSampler draw(spec);
  Stream stream(key);
  std::vector<stats::Accumulator> acc(x.dim());
  for (std::size_t i = 0; i < mc_reps; ++i) {
    const Point p = phi_series_sample(spec, draw, x, trunc_tol, stream);
    for (std::size_t j = 0; j < x.dim(); ++j) acc[j].push(p[j]);
  }
  VectorEstimate e{Point(x.dim()), Point(x.dim())};
  for (std::size_t j = 0; j < x.dim(); ++j) {
    e.value[j] = acc[j].mean();
    e.se[j] = acc[j].se();
  }
  return e;
}

// h_v as a handle: (x, v, tag) -> estimate; tag selects an independent stream.
using HFunction = std::function<ComplexEstimate(const Point& x, const Point& v, std::uint64_t tag)>;

inline HFunction make_h(const ModelSpec& spec, std::size_t mc_reps, double trunc_tol, std::uint64_t seed) {
  return [spec, mc_reps, trunc_tol, seed](const Point& x, const Point& v, std::uint64_t tag) {
    return h_v(spec, x, v, mc_reps, trunc_tol, StreamKey{seed, tag, "h_v"});
  };
}

inline HFunction h_identity() {
  return [](const Point&, const Point&, std::uint64_t) { return ComplexEstimate{{1.0, 0.0}, 0.0, 0.0}; };
}

// ---------------------------------------------------------------------------
// Tail-measure functionals.
// ---------------------------------------------------------------------------

// A test function for the Lambda-functional together with the radius of the
// ball around the origin on which it vanishes.
template <typename F>
struct TestFunction {
  F fn;
  double zero_radius = 0.0;
};

template <typename F>
TestFunction<F> vanishing_within(double radius, F fn) {
  return {std::move(fn), radius};
}

// g^-alpha * mean f(g S_i).
template <typename F>
stats::Estimate lambda_functional(const TestFunction<F>& f, const std::vector<Point>& samples, double g,
                                  double alpha) {
  if (!(f.zero_radius > 0.0))
    throw PreconditionError("lambda functional needs a test function vanishing near the origin");
  if (!(g > 0.0)) throw PreconditionError("lambda functional needs g > 0");
  if (samples.empty()) throw PreconditionError("lambda functional of an empty sample");
  stats::Accumulator acc;
  for (const Point& s : samples) {
    const Point x = g * s;
    acc.push(x.norm() <= f.zero_radius ? 0.0 : static_cast<double>(f.fn(x)));
  }
  const double scale = std::pow(g, -alpha);
  return {scale * acc.mean(), scale * acc.se()};
}

// Lambda, represented through its polar decomposition
//   Lambda(f) = int_0^inf int_S f(r w) sigma(dw) dr / r^(alpha + 1).
// The part r > 1 is estimated either from stationary samples via the
// Lambda-functional at scale g, or (closed) from exact Pareto radii.
struct TailMeasure {
  double alpha = 1.0;
  DirectionalMeasure sigma;
  const std::vector<Point>* samples = nullptr;
  double g = 0.0;
  std::size_t closed_draws = 0;
  std::uint64_t seed = 0;

  static TailMeasure from_samples(double alpha, DirectionalMeasure sigma, const std::vector<Point>& samples,
                                  double g) {
    TailMeasure m;
    m.alpha = alpha;
    m.sigma = std::move(sigma);
    m.samples = &samples;
    m.g = g;
    return m;
  }

  static TailMeasure closed(double alpha, DirectionalMeasure sigma, std::size_t draws, std::uint64_t seed) {
    TailMeasure m;
    m.alpha = alpha;
    m.sigma = std::move(sigma);
    m.closed_draws = draws;
    m.seed = seed;
    return m;
  }
};

// Integrand: (x, tag) -> estimate; tag indexes the evaluation for nested streams.
using RadialIntegrand = std::function<ComplexEstimate(const Point& x, std::uint64_t tag)>;

struct RadialOptions {
  std::size_t nodes = 48;
  double vanishing_order = 1.0;  // integrand = O(|x|^order) at the origin
  Parallelism parallelism;
};

struct SplitIntegral {
  ComplexEstimate inner;  // r < 1, polar quadrature
  ComplexEstimate outer;  // r > 1, Lambda-functional / closed draws
  ComplexEstimate total() const {
    return {inner.value + outer.value, std::hypot(inner.se_re, outer.se_re), std::hypot(inner.se_im, outer.se_im)};
  }
};

namespace detail {

// int_0^1 F(r w) r^(-alpha-1) dr for every direction, after r = u^p so that
// the transformed integrand is bounded at u = 0.
inline ComplexEstimate inner_polar(const RadialIntegrand& f, const TailMeasure& m, const RadialOptions& opt) {
  const QuadratureRule q = gauss_legendre_unit(opt.nodes);
  const double gap = opt.vanishing_order - m.alpha;
  if (!(gap > 0.0)) throw PreconditionError("integrand does not vanish fast enough at the origin");
  const double p = std::clamp(std::ceil(1.0 / gap), 1.0, 50.0);
  const std::size_t nd = m.sigma.directions.size();
  const std::size_t evals = nd * opt.nodes;
  const auto vals = parallel_map<ComplexEstimate>(evals, opt.parallelism, [&](std::size_t e) {
    const std::size_t d = e / opt.nodes, j = e % opt.nodes;
    const double u = q.nodes[j];
    const double r = std::pow(u, p);
    return f(r * m.sigma.directions[d], e);
  });
  Complex sum{0.0, 0.0};
  double var_re = 0.0, var_im = 0.0;
  for (std::size_t e = 0; e < evals; ++e) {
    const std::size_t d = e / opt.nodes, j = e % opt.nodes;
    const double u = q.nodes[j];
    // dr / r^(alpha+1) = p u^(p-1) u^(-p(alpha+1)) du
    const double w = m.sigma.weights[d] * q.weights[j] * p * std::pow(u, p - 1.0 - p * (m.alpha + 1.0));
    sum += w * vals[e].value;
    var_re += w * w * vals[e].se_re * vals[e].se_re;
    var_im += w * w * vals[e].se_im * vals[e].se_im;
  }
  return {sum, std::sqrt(var_re), std::sqrt(var_im)};
}

inline ComplexEstimate outer_from_samples(const RadialIntegrand& f, const TailMeasure& m, double g,
                                          const RadialOptions& opt, std::uint64_t tag_base) {
  const auto& samples = *m.samples;
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < samples.size(); ++i)
    if ((g * samples[i]).norm() > 1.0) active.push_back(i);
  const auto vals = parallel_map<Complex>(active.size(), opt.parallelism, [&](std::size_t k) {
    return f(g * samples[active[k]], tag_base + k).value;
  });
  stats::Accumulator re, im;
  std::size_t k = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    Complex v{0.0, 0.0};
    if (k < active.size() && active[k] == i) v = vals[k++];
    re.push(v.real());
    im.push(v.imag());
  }
  const double scale = std::pow(g, -m.alpha);
  return {scale * Complex{re.mean(), im.mean()}, scale * re.se(), scale * im.se()};
}

inline ComplexEstimate outer_closed(const RadialIntegrand& f, const TailMeasure& m, const RadialOptions& opt,
                                    std::uint64_t tag_base) {
  const double total = m.sigma.total();
  const std::size_t n = m.closed_draws;
  if (n == 0 || total == 0.0) return {};
  std::vector<double> cum;
  double acc = 0.0;
  for (double w : m.sigma.weights) cum.push_back(acc += w / total);
  constexpr std::size_t kChunk = 4096;
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<Complex> vals(n);
  parallel_for(chunks, opt.parallelism, [&](std::size_t c) {
    Stream s(StreamKey{m.seed, c, "closed-lambda"});
    for (std::size_t i = c * kChunk; i < std::min(n, (c + 1) * kChunk); ++i) {
      const double u = s.uniform();
      const std::size_t d = static_cast<std::size_t>(std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
      const double r = std::pow(s.uniform(), -1.0 / m.alpha);  // P(R > r) = r^-alpha on r >= 1
      vals[i] = f(r * m.sigma.directions[std::min(d, cum.size() - 1)], tag_base + i).value;
    }
  });
  stats::Accumulator re, im;
  for (const auto& v : vals) {
    re.push(v.real());
    im.push(v.imag());
  }
  const double mass = total / m.alpha;  // Lambda{|x| > 1}
  return {mass * Complex{re.mean(), im.mean()}, mass * re.se(), mass * im.se()};
}

inline constexpr std::uint64_t kOuterTagBase = 1ull << 40;

}  // namespace detail

inline SplitIntegral integrate_lambda(const RadialIntegrand& f, const TailMeasure& m, const RadialOptions& opt,
                                      double g_override = 0.0) {
  SplitIntegral out;
  out.inner = detail::inner_polar(f, m, opt);
  if (m.samples)
    out.outer = detail::outer_from_samples(f, m, g_override > 0.0 ? g_override : m.g, opt, detail::kOuterTagBase);
  else
    out.outer = detail::outer_closed(f, m, opt, detail::kOuterTagBase);
  return out;
}

// xi(t) = mean t x / (1 + |t x|^2) over the stationary samples.
inline VectorEstimate xi(double t, const std::vector<Point>& samples) {
  if (samples.empty()) throw PreconditionError("xi of an empty sample");
  const std::size_t dim = samples.front().dim();
  std::vector<stats::Accumulator> acc(dim);
  for (const Point& x : samples) {
    const Point tx = t * x;
    const double n2 = dot(tx, tx);
    for (std::size_t j = 0; j < dim; ++j) acc[j].push(tx[j] / (1.0 + n2));
  }
  VectorEstimate e{Point(dim), Point(dim)};
  for (std::size_t j = 0; j < dim; ++j) {
    e.value[j] = acc[j].mean();
    e.se[j] = acc[j].se();
  }
  return e;
}

// tau(t) = int (x / (1 + |t x|^2) - x / (1 + |x|^2)) Lambda(dx), alpha = 1 only.
inline VectorEstimate tau(double t, const TailMeasure& m, RadialOptions opt = {}) {
  if (std::fabs(m.alpha - 1.0) > 1e-6) throw PreconditionError("tau is defined for alpha = 1 only");
  const std::size_t dim = m.sigma.directions.empty() ? 1 : m.sigma.directions.front().dim();
  VectorEstimate e{Point(dim), Point(dim)};
  if (t == 1.0) return e;
  opt.vanishing_order = 3.0;
  for (std::size_t j = 0; j < dim; ++j) {
    const RadialIntegrand f = [t, j](const Point& x, std::uint64_t) {
      const double n2 = dot(x, x);
      return ComplexEstimate{{x[j] / (1.0 + t * t * n2) - x[j] / (1.0 + n2), 0.0}, 0.0, 0.0};
    };
    const ComplexEstimate c = integrate_lambda(f, m, opt).total();
    e.value[j] = c.value.real();
    e.se[j] = c.se_re;
  }
  return e;
}

// ---------------------------------------------------------------------------
// Limit regimes and the constant C_alpha(v).
// ---------------------------------------------------------------------------

enum class Regime { AlphaBelow1, AlphaEq1, AlphaIn12, AlphaEq2 };

inline const char* regime_name(Regime r) {
  switch (r) {
    case Regime::AlphaBelow1: return "alpha<1";
    case Regime::AlphaEq1: return "alpha=1";
    case Regime::AlphaIn12: return "1<alpha<2";
    case Regime::AlphaEq2: return "alpha=2";
  }
  return "?";
}

inline Regime regime_for(double alpha, double eps = 1e-6) {
  if (!(alpha > 0.0) || alpha > 2.0 + eps) throw PreconditionError("stable regimes need 0 < alpha <= 2");
  if (std::fabs(alpha - 1.0) <= eps) return Regime::AlphaEq1;
  if (std::fabs(alpha - 2.0) <= eps) return Regime::AlphaEq2;
  return alpha < 1.0 ? Regime::AlphaBelow1 : Regime::AlphaIn12;
}

struct CAlphaOptions {
  RadialOptions radial;
  std::size_t phi_reps = 20000;  // alpha = 2: draws for E phi(w)
  double trunc_tol = 1e-9;
  std::uint64_t seed = 0;
};

struct CAlphaResult {
  ComplexEstimate value;
  std::optional<ComplexEstimate> half_scale;  // same estimate at g / 2 (sample-based measures)
  bool scale_disagreement = false;            // g and g / 2 differ by more than 3 combined se
  bool indeterminate_sign = false;            // se(Re) > |Re|
};

// C_alpha(v) for alpha != 2 via the split Lambda-integral of
//   (e^{i<v,x>} - 1) h_v(x) [- i<v,x>/(1+|x|^2) | - i<v,x>].
// For alpha = 2 use c_alpha_gaussian.
inline CAlphaResult c_alpha(const Point& v, double alpha, const HFunction& h, const TailMeasure& m,
                            CAlphaOptions opt = {}) {
  const Regime regime = regime_for(alpha);
  if (regime == Regime::AlphaEq2) throw PreconditionError("alpha = 2 uses the surface-integral form");
  if (std::fabs(m.alpha - alpha) > 1e-9) throw PreconditionError("tail measure and alpha disagree");
  const RadialIntegrand f = [&](const Point& x, std::uint64_t tag) {
    const double vx = dot(v, x);
    const ComplexEstimate hv = h(x, v, tag);
    const Complex rot = std::exp(Complex{0.0, vx}) - 1.0;
    Complex val = rot * hv.value;
    if (regime == Regime::AlphaEq1) val -= Complex{0.0, vx / (1.0 + dot(x, x))};
    if (regime == Regime::AlphaIn12) val -= Complex{0.0, vx};
    // |rot| scales the h-noise.
    const double k = std::abs(rot);
    return ComplexEstimate{val, k * hv.se(), k * hv.se()};
  };
  opt.radial.vanishing_order = regime == Regime::AlphaBelow1 ? 1.0 : regime == Regime::AlphaEq1 ? 1.75 : 2.0;
  CAlphaResult res;
  res.value = integrate_lambda(f, m, opt.radial).total();
  if (m.samples) {
    res.half_scale = integrate_lambda(f, m, opt.radial, 0.5 * m.g).total();
    const double se_re = std::hypot(res.value.se_re, res.half_scale->se_re);
    const double se_im = std::hypot(res.value.se_im, res.half_scale->se_im);
    res.scale_disagreement = std::fabs(res.value.value.real() - res.half_scale->value.real()) > 3.0 * se_re ||
                             std::fabs(res.value.value.imag() - res.half_scale->value.imag()) > 3.0 * se_im;
  }
  res.indeterminate_sign = res.value.se_re > std::fabs(res.value.value.real());
  return res;
}

// alpha = 2: C_2(v) = -1/4 sum_w sigma(w) (<v,w>^2 + 2 <v,w> <v, E phi(w)>).
inline CAlphaResult c_alpha_gaussian(const ModelSpec& spec, const Point& v, const DirectionalMeasure& sigma,
                                     const CAlphaOptions& opt = {}) {
  const std::size_t nd = sigma.directions.size();
  const auto phis = parallel_map<VectorEstimate>(nd, opt.radial.parallelism, [&](std::size_t d) {
    return phi_mean(spec, sigma.directions[d], opt.phi_reps, opt.trunc_tol, StreamKey{opt.seed, d, "phi"});
  });
  double sum = 0.0, var = 0.0;
  for (std::size_t d = 0; d < nd; ++d) {
    const Point& w = sigma.directions[d];
    const double vw = dot(v, w);
    sum += sigma.weights[d] * (vw * vw + 2.0 * vw * dot(v, phis[d].value));
    double s2 = 0.0;
    for (std::size_t j = 0; j < v.dim(); ++j) s2 += v[j] * v[j] * phis[d].se[j] * phis[d].se[j];
    var += std::pow(sigma.weights[d] * 2.0 * vw, 2) * s2;
  }
  CAlphaResult res;
  res.value = {{-0.25 * sum, 0.0}, 0.25 * std::sqrt(var), 0.0};
  res.indeterminate_sign = res.value.se_re > std::fabs(res.value.value.real());
  return res;
}

// ---------------------------------------------------------------------------
// Normalization of Birkhoff sums.
// ---------------------------------------------------------------------------

struct NoCentering {};
struct XiCentering {
  const std::vector<Point>* stationary = nullptr;
};
struct MeanCentering {
  Point m;
};

struct LimitParams {
  double alpha = 1.0;
  Regime regime = Regime::AlphaBelow1;
  std::variant<NoCentering, XiCentering, MeanCentering> centering;
};

// Regime-consistent parameters; `mean` is required for 1 < alpha <= 2 and
// `stationary` for alpha = 1.
inline LimitParams make_limit_params(double alpha, std::optional<Point> mean = std::nullopt,
                                     const std::vector<Point>* stationary = nullptr) {
  LimitParams p;
  p.alpha = alpha;
  p.regime = regime_for(alpha);
  switch (p.regime) {
    case Regime::AlphaBelow1: p.centering = NoCentering{}; break;
    case Regime::AlphaEq1:
      if (!stationary) throw PreconditionError("alpha = 1 needs stationary samples for xi centering");
      p.centering = XiCentering{stationary};
      break;
    default:
      if (!mean) throw PreconditionError("1 < alpha <= 2 needs the stationary mean");
      p.centering = MeanCentering{*mean};
  }
  return p;
}

inline std::vector<Point> normalize_birkhoff(const std::vector<Point>& sums, std::size_t n, const LimitParams& p) {
  if (n == 0) throw PreconditionError("normalization needs n >= 1");
  if (regime_for(p.alpha) != p.regime) throw PreconditionError("regime does not match alpha");
  const double nn = static_cast<double>(n);
  std::vector<Point> out;
  out.reserve(sums.size());
  switch (p.regime) {
    case Regime::AlphaBelow1: {
      if (!std::holds_alternative<NoCentering>(p.centering)) throw PreconditionError("alpha < 1 takes no centering");
      const double k = std::pow(nn, -1.0 / p.alpha);
      for (const auto& s : sums) out.push_back(k * s);
      break;
    }
    case Regime::AlphaEq1: {
      const auto* c = std::get_if<XiCentering>(&p.centering);
      if (!c || !c->stationary) throw PreconditionError("alpha = 1 needs xi centering");
      const Point shift = nn * xi(1.0 / nn, *c->stationary).value;
      for (const auto& s : sums) out.push_back((1.0 / nn) * s - shift);
      break;
    }
    case Regime::AlphaIn12:
    case Regime::AlphaEq2: {
      const auto* c = std::get_if<MeanCentering>(&p.centering);
      if (!c) throw PreconditionError("1 < alpha <= 2 needs mean centering");
      const double k = p.regime == Regime::AlphaIn12 ? std::pow(nn, -1.0 / p.alpha) : 1.0 / std::sqrt(nn * std::log(nn));
      for (const auto& s : sums) out.push_back(k * (s - nn * c->m));
      break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Characteristic-function diagnostics.
// ---------------------------------------------------------------------------

struct CfPoint {
  double t = 0.0;
  Point v;
};

inline ComplexEstimate empirical_cf(const std::vector<Point>& samples, double t, const Point& v) {
  if (samples.empty()) throw PreconditionError("empirical CF of an empty sample");
  stats::Accumulator re, im;
  for (const Point& x : samples) {
    const double ph = t * dot(v, x);
    re.push(std::cos(ph));
    im.push(std::sin(ph));
  }
  return {{re.mean(), im.mean()}, re.se(), im.se()};
}

inline std::vector<ComplexEstimate> empirical_cf(const std::vector<Point>& samples, const std::vector<CfPoint>& grid) {
  std::vector<ComplexEstimate> out;
  out.reserve(grid.size());
  for (const auto& g : grid) out.push_back(empirical_cf(samples, g.t, g.v));
  return out;
}

struct StableFit {
  double alpha_hat = 0.0;
  stats::LinearFit regression;  // log(-log|CF|) on log t
};

// |CF(t)| = exp(t^alpha Re C) makes log(-log|CF|) affine in log t with slope alpha.
inline StableFit stable_index_fit(const std::vector<Point>& samples, const std::vector<double>& t_window,
                                  const Point& v) {
  if (t_window.size() < 2) throw PreconditionError("stable fit needs at least two window points");
  std::vector<double> lx, ly;
  for (double t : t_window) {
    const double mod = std::abs(empirical_cf(samples, t, v).value);
    if (!(mod < 1.0) || !(mod > 0.05))
      throw PreconditionError("stable fit window: |CF| outside (0.05, 1) at t = " + std::to_string(t));
    lx.push_back(std::log(t));
    ly.push_back(std::log(-std::log(mod)));
  }
  StableFit f;
  f.regression = stats::least_squares(lx, ly);
  f.alpha_hat = f.regression.slope;
  return f;
}

// Log-spaced t window where |CF| decays from about hi_mod to lo_mod.
inline std::vector<double> auto_cf_window(const std::vector<Point>& samples, const Point& v, std::size_t points = 8,
                                          double hi_mod = 0.9, double lo_mod = 0.3) {
  auto mod = [&](double t) { return std::abs(empirical_cf(samples, t, v).value); };
  auto crossing = [&](double level) {
    double lo = 1e-12, hi = 1e-6;
    while (mod(hi) > level) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e12) throw PreconditionError("CF never decays below " + std::to_string(level));
    }
    for (int i = 0; i < 60; ++i) {
      const double mid = std::sqrt(lo * hi);
      (mod(mid) > level ? lo : hi) = mid;
    }
    return std::sqrt(lo * hi);
  };
  return log_grid(crossing(hi_mod), crossing(lo_mod), points);
}

struct GaussianCheck {
  double ks = 0.0;
  double critical = 0.0;  // 1% level
  stats::Moments moments;
  bool pass() const { return ks < critical; }
};

// KS distance to the normal law with the sample's mean and sd.
inline GaussianCheck gaussian_check(const std::vector<double>& samples) {
  if (samples.size() < 2) throw PreconditionError("gaussian check needs at least two samples");
  GaussianCheck g;
  g.moments = stats::moments(samples);
  if (!(g.moments.sd > 0.0)) throw PreconditionError("gaussian check: degenerate (constant) sample");
  const double mu = g.moments.mean, sd = g.moments.sd;
  g.ks = stats::ks_statistic(samples, [mu, sd](double x) { return stats::normal_cdf((x - mu) / sd); });
  g.critical = stats::ks_critical_one_sample(samples.size(), 0.01);
  return g;
}

struct StableDiagnostics {
  Regime regime = Regime::AlphaBelow1;
  double fitted_index = 0.0;
  std::vector<std::pair<CfPoint, ComplexEstimate>> cf_grid;
  stats::LinearFit index_regression;
  std::optional<double> gaussian_ks;
};

}  // namespace irf
