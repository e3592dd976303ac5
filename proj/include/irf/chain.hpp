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
#include <string>
#include <vector>

#include "irf/error.hpp"
#include "irf/model.hpp"
#include "irf/parallel.hpp"
#include "irf/point.hpp"
#include "irf/random.hpp"

namespace irf {

// X_0..X_n of the forward recursion and S_k = X_1 + ... + X_k.
struct Trajectory {
  std::vector<Point> states;        // n + 1 entries
  std::vector<Point> partial_sums;  // n entries, partial_sums[k - 1] = S_k

  std::size_t n() const { return partial_sums.size(); }
};

inline Trajectory forward_chain(const ModelSpec& spec, const Point& x0, std::size_t n, Stream& stream) {
  const ThetaSampler draw(spec);
  Trajectory tr;
  tr.states.reserve(n + 1);
  tr.partial_sums.reserve(n);
  tr.states.push_back(x0);
  Point x = x0, s(x0.dim());
  for (std::size_t k = 0; k < n; ++k) {
    x = apply(spec, draw(stream), x);
    s += x;
    tr.states.push_back(x);
    tr.partial_sums.push_back(s);
  }
  return tr;
}

struct BackwardOptions {
  double tol = 1e-9;
  std::size_t max_depth = 100000;
  double envelope = 1e6;  // cap on the oscillation estimate R
};

struct BackwardSample {
  Point point;
  std::size_t depth = 0;
  double bound = 0.0;  // prod L_i * R at the stopping depth
};

// Y_n = psi_1 o ... o psi_n (x0) at a fixed depth n.
inline Point backward_iterate(const ModelSpec& spec, const Point& x0, std::size_t n, Stream& stream) {
  const ThetaSampler draw(spec);
  std::vector<ThetaDraw> thetas;
  thetas.reserve(n);
  for (std::size_t k = 0; k < n; ++k) thetas.push_back(draw(stream));
  Point y = x0;
  for (auto it = thetas.rbegin(); it != thetas.rend(); ++it) y = apply(spec, *it, y);
  return y;
}

// Draws theta_1, theta_2, ... until prod_{i<=n} L_i * R < tol, then evaluates
// psi_1 o ... o psi_n (x0) once. R estimates the tail oscillation
// |x0 - psi_{n+1} o ... (x0)| by max_k e_k / (1 - rho), where
// e_k = max(|x0 - psi_k(x0)|, |N_k|) and rho is the running geometric mean of
// the L_k; R is capped by the envelope (and equals it while rho >= 1).
inline BackwardSample backward_sample(const ModelSpec& spec, const ThetaSampler& draw, const Point& x0,
                                      const BackwardOptions& opt, Stream& stream) {
  std::vector<ThetaDraw> thetas;
  double log_prod = 0.0;
  double max_osc = 0.0;
  for (std::size_t n = 1; n <= opt.max_depth; ++n) {
    const ThetaDraw& th = thetas.emplace_back(draw(stream));
    const double lip = lipschitz_bound(spec, th);
    log_prod += std::log(lip);
    max_osc = std::max({max_osc, distance(x0, apply(spec, th, x0)), cancellation_bound(spec, th)});
    const double rho = std::exp(log_prod / static_cast<double>(n));
    const double r = rho < 1.0 ? std::min(opt.envelope, max_osc / (1.0 - rho)) : opt.envelope;
    const double bound = r == 0.0 ? 0.0 : std::exp(log_prod) * r;
    if (bound < opt.tol) {
      Point y = x0;
      for (auto it = thetas.rbegin(); it != thetas.rend(); ++it) y = apply(spec, *it, y);
      return {y, n, bound};
    }
  }
  const double rho = std::exp(log_prod / static_cast<double>(opt.max_depth));
  const double r = rho < 1.0 ? std::min(opt.envelope, max_osc / (1.0 - rho)) : opt.envelope;
  throw ConvergenceError("backward iteration reached max_depth " + std::to_string(opt.max_depth),
                         std::exp(log_prod) * r);
}

inline BackwardSample backward_sample(const ModelSpec& spec, const Point& x0, const BackwardOptions& opt,
                                      Stream& stream) {
  return backward_sample(spec, ThetaSampler(spec), x0, opt, stream);
}

struct StationaryBatch {
  std::vector<Point> samples;
  std::vector<std::size_t> stop_depths;
  std::vector<double> residual_bounds;
  double tol = 0.0;

  std::size_t size() const { return samples.size(); }

  // First coordinates, the natural view for scalar models.
  std::vector<double> scalars() const {
    std::vector<double> out(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) out[i] = samples[i][0];
    return out;
  }
  std::vector<double> norms() const {
    std::vector<double> out(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) out[i] = samples[i].norm();
    return out;
  }
};

struct BatchOptions {
  BackwardOptions backward;
  Point x0 = Point::scalar(0.0);
  Parallelism parallelism;
};

// Replica i uses the stream (master_seed, i, "stationary").
inline StationaryBatch stationary_batch(const ModelSpec& spec, std::size_t count, std::uint64_t master_seed,
                                        const BatchOptions& opt = {}) {
  const ThetaSampler draw(spec);
  Point x0 = opt.x0;
  if (x0.dim() != spec.dimension) x0 = Point(spec.dimension);
  std::vector<BackwardSample> raw(count);
  parallel_for(count, opt.parallelism, [&](std::size_t i) {
    Stream stream(StreamKey{master_seed, i, "stationary"});
    try {
      raw[i] = backward_sample(spec, draw, x0, opt.backward, stream);
    } catch (const ConvergenceError& e) {
      throw ConvergenceError("replica " + std::to_string(i) + ": " + e.what(), e.achieved());
    }
  });
  StationaryBatch batch;
  batch.tol = opt.backward.tol;
  batch.samples.reserve(count);
  batch.stop_depths.reserve(count);
  batch.residual_bounds.reserve(count);
  for (const auto& r : raw) {
    batch.samples.push_back(r.point);
    batch.stop_depths.push_back(r.depth);
    batch.residual_bounds.push_back(r.bound);
  }
  return batch;
}

// One S_n = X_1 + ... + X_n per replica; replica r uses (master_seed, r, "birkhoff").
inline std::vector<Point> birkhoff_sums(const ModelSpec& spec, const Point& x0, std::size_t n,
                                        std::size_t replicas, std::uint64_t master_seed,
                                        Parallelism par = {}) {
  const ThetaSampler draw(spec);
  return parallel_map<Point>(replicas, par, [&](std::size_t r) {
    Stream stream(StreamKey{master_seed, r, "birkhoff"});
    Point x = x0, s(x0.dim());
    for (std::size_t k = 0; k < n; ++k) {
      x = apply(spec, draw(stream), x);
      s += x;
    }
    return s;
  });
}

}  // namespace irf
