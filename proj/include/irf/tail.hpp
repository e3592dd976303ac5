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
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "irf/chain.hpp"
#include "irf/error.hpp"
#include "irf/model.hpp"
#include "irf/parallel.hpp"
#include "irf/random.hpp"
#include "irf/stats.hpp"

namespace irf {

struct SurvivalRow {
  double t = 0.0;
  double p_hat = 0.0;      // empirical P(|S| > t)
  double t_alpha_p = 0.0;  // t^alpha * p_hat
};

// Empirical survival of |S| on an increasing positive grid.
inline std::vector<SurvivalRow> survival_curve(std::span<const double> samples, std::span<const double> t_grid,
                                               double alpha) {
  if (samples.empty()) throw PreconditionError("survival curve of an empty sample");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0.0)) throw PreconditionError("survival grid must be positive");
    if (i && !(t_grid[i] > t_grid[i - 1])) throw PreconditionError("survival grid must be increasing");
  }
  std::vector<double> sorted(samples.size());
  std::transform(samples.begin(), samples.end(), sorted.begin(), [](double x) { return std::fabs(x); });
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  std::vector<SurvivalRow> rows;
  rows.reserve(t_grid.size());
  for (double t : t_grid) {
    const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), t);
    const double p = static_cast<double>(above) / n;
    rows.push_back({t, p, std::pow(t, alpha) * p});
  }
  return rows;
}

inline std::vector<double> log_grid(double lo, double hi, std::size_t points) {
  std::vector<double> g(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double u = points == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(points - 1);
    g[i] = std::exp(std::log(lo) + u * (std::log(hi) - std::log(lo)));
  }
  return g;
}

// Hill estimator from the k largest of |samples|:
//   k / sum_{i=1..k} log(X_(n-i+1) / X_(n-k)).
inline double hill_estimator(std::span<const double> samples, std::size_t k) {
  const std::size_t n = samples.size();
  if (k < 1 || k >= n) throw PreconditionError("hill estimator needs 1 <= k < n");
  std::vector<double> a(n);
  std::transform(samples.begin(), samples.end(), a.begin(), [](double x) { return std::fabs(x); });
  // a[n-k-1] becomes X_(n-k); the k values after it are the top order statistics.
  const auto pivot = a.begin() + static_cast<std::ptrdiff_t>(n - k - 1);
  std::nth_element(a.begin(), pivot, a.end());
  const double threshold = *pivot;
  if (!(threshold > 0.0)) throw PreconditionError("hill estimator: nonpositive order statistic X_(n-k)");
  double sum = 0.0;
  for (auto it = pivot + 1; it != a.end(); ++it) sum += std::log(*it / threshold);
  if (!(sum > 0.0)) throw PreconditionError("hill estimator undefined: zero log excesses");
  return static_cast<double>(k) / sum;
}

struct HillRow {
  std::size_t k = 0;
  double alpha_hat = 0.0;
};

// Hill estimates for every k on the grid, from one sort.
inline std::vector<HillRow> hill_curve(std::span<const double> samples, std::span<const std::size_t> ks) {
  std::vector<double> a(samples.size());
  std::transform(samples.begin(), samples.end(), a.begin(), [](double x) { return std::fabs(x); });
  std::sort(a.begin(), a.end(), std::greater<>());
  std::vector<double> prefix(a.size() + 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) prefix[i + 1] = prefix[i] + (a[i] > 0.0 ? std::log(a[i]) : 0.0);
  std::vector<HillRow> rows;
  for (std::size_t k : ks) {
    if (k < 1 || k >= a.size() || !(a[k] > 0.0)) continue;
    const double sum = prefix[k] - static_cast<double>(k) * std::log(a[k]);
    if (sum > 0.0) rows.push_back({k, static_cast<double>(k) / sum});
  }
  return rows;
}

inline std::size_t default_hill_k(std::size_t n) {
  return static_cast<std::size_t>(std::floor(std::pow(static_cast<double>(n), 2.0 / 3.0)));
}

struct GoldieEstimate {
  double value = 0.0;  // C = E(|psi(S)|^alpha - |M S|^alpha) / (alpha m_alpha)
  double se = 0.0;     // median-of-means (32 blocks)
  double plain_se = 0.0;
  bool se_unreliable = false;
};

namespace detail {

inline constexpr std::size_t kBlock = 4096;

// d_i = f(psi_i(S_i), M_i S_i) with theta_i from per-block streams.
template <typename Fn>
std::vector<double> paired_terms(const ModelSpec& spec, const StationaryBatch& batch, std::uint64_t seed,
                                 const char* purpose, Parallelism par, Fn&& fn) {
  const ThetaSampler draw(spec);
  const std::size_t n = batch.size();
  std::vector<double> d(n);
  const std::size_t blocks = (n + kBlock - 1) / kBlock;
  parallel_for(blocks, par, [&](std::size_t b) {
    Stream stream(StreamKey{seed, b, purpose});
    for (std::size_t i = b * kBlock; i < std::min(n, (b + 1) * kBlock); ++i) {
      const ThetaDraw th = draw(stream);
      const Point& s = batch.samples[i];
      d[i] = fn(apply(spec, th, s).norm(), linear_part(spec, th).scale * s.norm(), s.norm());
    }
  });
  return d;
}

}  // namespace detail

// Pairwise formula: each summand is formed from the same (theta, S) pair
// before averaging, since |psi(S)|^alpha alone is not integrable.
inline GoldieEstimate goldie_constant(const ModelSpec& spec, const StationaryBatch& batch, std::uint64_t seed,
                                      double alpha, double m_alpha, Parallelism par = {}) {
  if (batch.size() == 0) throw PreconditionError("goldie constant needs a nonempty batch");
  if (!(alpha > 0.0) || !(m_alpha > 0.0)) throw PreconditionError("goldie constant needs alpha, m_alpha > 0");
  const auto d = detail::paired_terms(spec, batch, seed, "goldie", par, [alpha](double psi, double ms, double) {
    return std::pow(psi, alpha) - std::pow(ms, alpha);
  });
  const double norm = alpha * m_alpha;
  const stats::Estimate plain = stats::mean_se(d);
  GoldieEstimate g;
  g.value = plain.value / norm;
  g.plain_se = plain.se / norm;
  g.se = stats::median_of_means_se(d) / norm;
  g.se_unreliable = alpha >= 2.0 && g.plain_se > 3.0 * g.se;
  return g;
}

// Total mass of the directional measure: alpha * C.
inline double sigma_mass(double goldie, double alpha) { return alpha * goldie; }

// Discrete measure on the unit sphere: weights on representative directions.
struct DirectionalMeasure {
  std::vector<Point> directions;
  std::vector<double> weights;

  double total() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
  }
};

// Apportions total_mass over directions of the samples whose norm exceeds
// the q-quantile. d = 1: the two points +1 / -1. d = 2: 64 angle bins.
// d = 3: 64 x 64 bins in (azimuth, cos polar).
inline DirectionalMeasure direction_histogram(const std::vector<Point>& samples, double total_mass,
                                              double q = 0.999, std::size_t bins = 64) {
  if (samples.empty()) throw PreconditionError("direction histogram of an empty sample");
  const std::size_t dim = samples.front().dim();
  std::vector<double> norms(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) norms[i] = samples[i].norm();
  const double radius = stats::quantile(norms, q);
  const std::size_t cells = dim == 1 ? 2 : dim == 2 ? bins : bins * bins;
  std::vector<double> counts(cells, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!(norms[i] > radius)) continue;
    const Point& x = samples[i];
    std::size_t cell = 0;
    if (dim == 1) {
      cell = x[0] > 0.0 ? 0 : 1;
    } else if (dim == 2) {
      const double phi = std::atan2(x[1], x[0]) + std::numbers::pi;
      cell = std::min(bins - 1, static_cast<std::size_t>(phi / (2.0 * std::numbers::pi) * static_cast<double>(bins)));
    } else {
      const double phi = std::atan2(x[1], x[0]) + std::numbers::pi;
      const double z = std::clamp(x[2] / norms[i], -1.0, 1.0);
      const auto a = std::min(bins - 1, static_cast<std::size_t>(phi / (2.0 * std::numbers::pi) * static_cast<double>(bins)));
      const auto c = std::min(bins - 1, static_cast<std::size_t>((z + 1.0) / 2.0 * static_cast<double>(bins)));
      cell = a * bins + c;
    }
    counts[cell] += 1.0;
    total += 1.0;
  }
  DirectionalMeasure m;
  if (total == 0.0) return m;
  for (std::size_t cell = 0; cell < cells; ++cell) {
    if (counts[cell] == 0.0) continue;
    Point w(dim);
    if (dim == 1) {
      w[0] = cell == 0 ? 1.0 : -1.0;
    } else if (dim == 2) {
      const double phi = (static_cast<double>(cell) + 0.5) / static_cast<double>(bins) * 2.0 * std::numbers::pi - std::numbers::pi;
      w = Point{std::cos(phi), std::sin(phi)};
    } else {
      const double phi = (static_cast<double>(cell / bins) + 0.5) / static_cast<double>(bins) * 2.0 * std::numbers::pi - std::numbers::pi;
      const double z = (static_cast<double>(cell % bins) + 0.5) / static_cast<double>(bins) * 2.0 - 1.0;
      const double rho = std::sqrt(1.0 - z * z);
      w = Point{rho * std::cos(phi), rho * std::sin(phi), z};
    }
    m.directions.push_back(w);
    m.weights.push_back(total_mass * counts[cell] / total);
  }
  return m;
}

struct MomentIdentity {
  double lhs = 0.0;       // mean |S|^s (1 - kappa(s))
  double rhs = 0.0;       // mean (|psi(S)|^s - |M S|^s)
  double se = 0.0;        // se of the paired difference
  double residual = 0.0;  // |lhs - rhs| / se
};

// E|S|^s (1 - kappa(s)) = E(|psi(S)|^s - |M S|^s) for 0 < s < alpha.
inline MomentIdentity moment_identity_residual(const ModelSpec& spec, double s, double alpha,
                                               const StationaryBatch& batch, std::uint64_t seed, double kappa_s,
                                               Parallelism par = {}) {
  if (!(s > 0.0) || !(s < alpha)) throw PreconditionError("moment identity needs 0 < s < alpha");
  if (batch.size() == 0) throw PreconditionError("moment identity needs a nonempty batch");
  std::vector<double> left(batch.size());
  const auto right = detail::paired_terms(spec, batch, seed, "moment-identity", par,
                                          [s](double psi, double ms, double) { return std::pow(psi, s) - std::pow(ms, s); });
  for (std::size_t i = 0; i < batch.size(); ++i) left[i] = std::pow(batch.samples[i].norm(), s) * (1.0 - kappa_s);
  std::vector<double> diff(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) diff[i] = left[i] - right[i];
  MomentIdentity m;
  m.lhs = stats::mean_se(left).value;
  m.rhs = stats::mean_se(right).value;
  const stats::Estimate d = stats::mean_se(diff);
  m.se = d.se;
  const double gap = std::fabs(m.lhs - m.rhs);
  m.residual = m.se > 0.0 ? gap / m.se : (gap == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
  return m;
}

struct TailReport {
  std::vector<SurvivalRow> survival_grid;
  std::vector<HillRow> hill_curve;
  std::size_t hill_k = 0;
  double hill_alpha = 0.0;
  GoldieEstimate goldie;
  double sigma_mass = 0.0;
  std::pair<double, double> plateau_window;
  double plateau = 0.0;            // mean of t^alpha P on the window grid
  double plateau_deviation = 0.0;  // sup relative deviation from the Goldie constant on the window
};

struct TailOptions {
  double q_lo = 0.99;
  double q_hi = 0.9999;
  std::size_t plateau_points = 32;
  std::size_t survival_points = 64;
};

inline TailReport tail_report(const ModelSpec& spec, const StationaryBatch& batch, std::uint64_t seed,
                              double alpha, double m_alpha, const TailOptions& opt = {}, Parallelism par = {}) {
  TailReport rep;
  std::vector<double> norms = batch.norms();
  std::vector<double> sorted = norms;
  std::sort(sorted.begin(), sorted.end());
  rep.plateau_window = {stats::quantile_sorted(sorted, opt.q_lo), stats::quantile_sorted(sorted, opt.q_hi)};
  rep.goldie = goldie_constant(spec, batch, seed, alpha, m_alpha, par);
  rep.sigma_mass = sigma_mass(rep.goldie.value, alpha);

  const double lo = std::max(stats::quantile_sorted(sorted, 0.5), 1e-300);
  const double hi = std::max(sorted.back(), lo * 1.0000001);
  if (lo < hi && sorted.back() > 0.0) rep.survival_grid = survival_curve(norms, log_grid(lo, hi, opt.survival_points), alpha);

  const auto [w_lo, w_hi] = rep.plateau_window;
  if (w_lo > 0.0 && w_hi > w_lo) {
    const auto window = survival_curve(norms, log_grid(w_lo, w_hi, opt.plateau_points), alpha);
    double sum = 0.0;
    for (const auto& r : window) {
      sum += r.t_alpha_p;
      if (rep.goldie.value != 0.0)
        rep.plateau_deviation = std::max(rep.plateau_deviation, std::fabs(r.t_alpha_p - rep.goldie.value) / std::fabs(rep.goldie.value));
    }
    rep.plateau = sum / static_cast<double>(window.size());
  }

  rep.hill_k = default_hill_k(norms.size());
  if (rep.hill_k >= 1 && rep.hill_k < norms.size()) {
    try {
      rep.hill_alpha = hill_estimator(norms, rep.hill_k);
    } catch (const PreconditionError&) {
      rep.hill_alpha = 0.0;
    }
    std::vector<std::size_t> ks;
    for (std::size_t k = 10; k < norms.size() / 2; k = static_cast<std::size_t>(std::ceil(static_cast<double>(k) * 1.25))) ks.push_back(k);
    rep.hill_curve = hill_curve(norms, ks);
  }
  return rep;
}

}  // namespace irf
