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
#include <string>
#include <vector>

#include "irf/chain.hpp"
#include "irf/error.hpp"
#include "irf/model.hpp"
#include "irf/parallel.hpp"
#include "irf/point.hpp"

// Stationary support as the closure of fixed points of contracting
// compositions psi_{w_1} o ... o psi_{w_k}, enumerated for finite theta-laws.
namespace irf {

using Word = std::vector<ThetaDraw>;

// psi_{w_1} o ... o psi_{w_k} (x): the last letter acts first.
inline Point compose(const ModelSpec& spec, const Word& word, Point x) {
  for (auto it = word.rbegin(); it != word.rend(); ++it) x = apply(spec, *it, x);
  return x;
}

inline double word_contraction(const ModelSpec& spec, const Word& word) {
  double l = 1.0;
  for (const auto& th : word) l *= lipschitz_bound(spec, th);
  return l;
}

// Banach iteration with the a posteriori stop |x_{j+1} - x_j| < tol (1 - L) / L,
// which certifies |x_{j+1} - fixed point| < tol.
inline Point fixed_point(const ModelSpec& spec, const Word& word, const Point& x0, double tol,
                         std::size_t max_iter = 100000) {
  const double lip = word_contraction(spec, word);
  if (!(lip < 1.0)) throw PreconditionError("fixed point needs a contracting word (product of Lipschitz bounds < 1)");
  const double stop = lip == 0.0 ? std::numeric_limits<double>::infinity() : tol * (1.0 - lip) / lip;
  Point x = x0;
  for (std::size_t it = 0; it < max_iter; ++it) {
    const Point y = compose(spec, word, x);
    const double step = distance(x, y);
    x = y;
    if (step < stop || step == 0.0) return x;
  }
  throw ConvergenceError("fixed point iteration exceeded max_iter", distance(x, compose(spec, word, x)));
}

struct SupportCloud {
  std::vector<Point> points;
  std::vector<std::size_t> depths;           // shortest generating word length
  std::vector<std::size_t> deepest;          // longest generating word length seen
  std::vector<Word> words;                   // shortest generating word
  double dedupe_tol = 1e-8;
};

struct SupportOptions {
  std::size_t max_depth = 6;
  double fixpoint_tol = 1e-10;
  double dedupe_tol = 1e-8;
  std::size_t word_guard = 1000000;
  double prune_above = 1e6;
  Parallelism parallelism;
};

struct ThetaAtom {
  ThetaDraw theta;
  double probability = 1.0;
};

// All theta values of a law whose parameter laws are Constant / DiscreteTable.
inline std::vector<ThetaAtom> theta_atoms(const ModelSpec& spec) {
  validate(spec);
  if (spec.family == Family::Affine && spec.dimension != 1)
    throw PreconditionError("support enumeration is implemented for scalar families and d = 1 affine");
  std::vector<std::string> names = required_parameters(spec.family, spec.dimension);
  if (spec.family == Family::Affine && spec.laws.count("sign")) names.push_back("sign");
  std::vector<std::vector<std::pair<double, double>>> lists;
  for (const auto& n : names) {
    const auto a = atoms(spec.laws.at(n));
    if (!a) throw PreconditionError("support enumeration needs discrete or constant laws; '" + n + "' is continuous");
    lists.push_back(*a);
  }
  std::vector<ThetaAtom> out{ThetaAtom{}};
  for (std::size_t p = 0; p < names.size(); ++p) {
    std::vector<ThetaAtom> next;
    for (const auto& partial : out)
      for (const auto& [v, prob] : lists[p]) {
        ThetaAtom t = partial;
        t.probability *= prob;
        const std::string& n = names[p];
        if (n == "a") t.theta.a = v;
        else if (n == "b") t.theta.b = v;
        else if (n == "c") t.theta.c = v;
        else if (n == "sign") t.theta.rotation(0, 0) = v;
        next.push_back(t);
      }
    out = std::move(next);
  }
  for (auto& t : out) {
    if (spec.family == Family::Affine) t.theta.shift = Point::scalar(t.theta.b);
    if (spec.family == Family::SqrtQuadratic && !(t.theta.b * t.theta.b - 4.0 * t.theta.a * t.theta.c < 0.0))
      throw PreconditionError("sqrt_quadratic atom violates B^2 - 4AC < 0");
  }
  return out;
}

// Breadth-first enumeration of words up to max_depth in canonical
// (lexicographic by atom index) order. Prefixes whose contraction product
// exceeds prune_above are dropped together with their extensions.
inline SupportCloud enumerate_fixed_points(const ModelSpec& spec, const SupportOptions& opt = {}) {
  const auto atom_list = theta_atoms(spec);
  const std::size_t na = atom_list.size();
  SupportCloud cloud;
  cloud.dedupe_tol = opt.dedupe_tol;

  struct Node {
    std::vector<std::size_t> letters;
    double lip = 1.0;
  };
  std::vector<Node> level{Node{}};
  std::size_t total_words = 0;
  for (std::size_t depth = 1; depth <= opt.max_depth; ++depth) {
    std::vector<Node> next;
    for (const auto& node : level)
      for (std::size_t a = 0; a < na; ++a) {
        Node child = node;
        child.letters.push_back(a);
        child.lip *= lipschitz_bound(spec, atom_list[a].theta);
        if (child.lip > opt.prune_above) continue;
        next.push_back(std::move(child));
      }
    total_words += next.size();
    if (total_words > opt.word_guard)
      throw CapacityError("support enumeration exceeds " + std::to_string(opt.word_guard) +
                          " words; lower max_depth");
    std::vector<std::size_t> contracting;
    for (std::size_t i = 0; i < next.size(); ++i)
      if (next[i].lip < 1.0) contracting.push_back(i);
    const auto fixed = parallel_map<Point>(contracting.size(), opt.parallelism, [&](std::size_t k) {
      Word w;
      for (std::size_t a : next[contracting[k]].letters) w.push_back(atom_list[a].theta);
      return fixed_point(spec, w, Point(spec.dimension), opt.fixpoint_tol);
    });
    for (std::size_t k = 0; k < contracting.size(); ++k) {
      const Point& p = fixed[k];
      bool merged = false;
      for (std::size_t j = 0; j < cloud.points.size(); ++j)
        if (distance(cloud.points[j], p) < opt.dedupe_tol) {
          cloud.deepest[j] = depth;
          merged = true;
          break;
        }
      if (merged) continue;
      Word w;
      for (std::size_t a : next[contracting[k]].letters) w.push_back(atom_list[a].theta);
      cloud.points.push_back(p);
      cloud.depths.push_back(depth);
      cloud.deepest.push_back(depth);
      cloud.words.push_back(std::move(w));
    }
    level = std::move(next);
  }
  return cloud;
}

struct CoverageReport {
  double fraction_covered = 0.0;
  double max_distance = 0.0;
};

inline double distance_to_cloud(const SupportCloud& cloud, const Point& x) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : cloud.points) best = std::min(best, distance(p, x));
  return best;
}

inline CoverageReport coverage_check(const SupportCloud& cloud, const std::vector<Point>& samples, double eps) {
  if (cloud.points.empty()) throw PreconditionError("coverage check against an empty cloud");
  CoverageReport r;
  std::size_t covered = 0;
  for (const auto& x : samples) {
    const double d = distance_to_cloud(cloud, x);
    r.max_distance = std::max(r.max_distance, d);
    if (d <= eps) ++covered;
  }
  if (!samples.empty()) r.fraction_covered = static_cast<double>(covered) / static_cast<double>(samples.size());
  return r;
}

struct ClosureReport {
  std::size_t images = 0;
  std::size_t frontier = 0;  // images not matched by a deeper-generated cloud point
  double frontier_fraction() const {
    return images ? static_cast<double>(frontier) / static_cast<double>(images) : 0.0;
  }
};

// For each cloud point p (shortest depth k) and each atom theta, psi_theta(p)
// should lie within tol of a cloud point generated at depth >= k + 1.
inline ClosureReport closure_consistency(const ModelSpec& spec, const SupportCloud& cloud, double tol) {
  const auto atom_list = theta_atoms(spec);
  ClosureReport r;
  for (std::size_t i = 0; i < cloud.points.size(); ++i)
    for (const auto& atom : atom_list) {
      const Point img = apply(spec, atom.theta, cloud.points[i]);
      ++r.images;
      bool hit = false;
      for (std::size_t j = 0; j < cloud.points.size() && !hit; ++j)
        hit = cloud.deepest[j] >= cloud.depths[i] + 1 && distance(cloud.points[j], img) <= tol;
      if (!hit) ++r.frontier;
    }
  return r;
}

}  // namespace irf
