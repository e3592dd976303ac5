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

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "irf/chain.hpp"
#include "irf/config.hpp"
#include "irf/cramer.hpp"
#include "irf/error.hpp"
#include "irf/parallel.hpp"
#include "irf/stable.hpp"
#include "irf/stats.hpp"
#include "irf/support.hpp"
#include "irf/svg.hpp"
#include "irf/tail.hpp"
#include "irf/version.hpp"

namespace irf {

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

class Csv {
 public:
  explicit Csv(std::vector<std::string> header) : width_(header.size()) { line(header); }

  Csv& row(const std::vector<double>& cells) {
    if (cells.size() != width_) throw PreconditionError("csv row width does not match header");
    std::vector<std::string> s;
    s.reserve(cells.size());
    for (double c : cells) s.push_back(format_double(c));
    line(s);
    return *this;
  }

  Csv& row(const std::vector<std::string>& cells) {
    if (cells.size() != width_) throw PreconditionError("csv row width does not match header");
    line(cells);
    return *this;
  }

  const std::string& text() const { return text_; }

 private:
  void line(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) text_ += (i ? "," : "") + cells[i];
    text_ += "\n";
  }
  std::size_t width_;
  std::string text_;
};

inline std::vector<std::string> coordinate_columns(std::size_t dim, const std::string& prefix) {
  std::vector<std::string> c;
  for (std::size_t j = 0; j < dim; ++j) c.push_back(prefix + std::to_string(j + 1));
  return c;
}

// ---------------------------------------------------------------------------
// Run orchestration
// ---------------------------------------------------------------------------

struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::size_t threads = 1;  // never changes outputs
};

struct RunResult {
  int exit_code = 0;
  std::string error;  // "stage '<name>': <message>" on failure
  std::vector<std::string> files;
};

struct StageRecord {
  std::string name;
  double wall_ms = 0.0;
  std::uint64_t digest = 0;  // over the stage's file contents and summary
  std::vector<std::string> files;
  nlohmann::json summary = nlohmann::json::object();
};

namespace detail {

inline std::uint64_t mix_digest(std::uint64_t h, std::string_view s) {
  return splitmix64(h ^ fnv1a64(s));
}

class Runner {
 public:
  Runner(RunConfig cfg, Experiment verb, Parallelism par, std::ostream& log)
      : cfg_(std::move(cfg)), verb_(verb), par_(par), log_(log), dir_(cfg_.output.dir) {}

  void execute() {
    switch (verb_) {
      case Experiment::Cramer: run_cramer(); break;
      case Experiment::Simulate: run_simulate(); break;
      case Experiment::Tail: run_tail(); break;
      case Experiment::Limit: run_limit(); break;
      case Experiment::Support: run_support(); break;
      case Experiment::Check: run_check(); break;
    }
  }

  const std::vector<StageRecord>& stages() const { return stages_; }
  const std::vector<std::string>& files() const { return files_; }
  const std::string& current_stage() const { return current_; }

 private:
  const ExperimentParams& p() const { return cfg_.params; }

  template <typename Fn>
  void stage(const std::string& name, Fn&& fn) {
    current_ = name;
    StageRecord rec;
    rec.name = name;
    log_ << "[" << name << "] ...\n";
    const auto t0 = std::chrono::steady_clock::now();
    pending_.clear();
    fn(rec);
    rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    std::uint64_t h = fnv1a64(name);
    for (const auto& [file, content] : pending_) {
      h = mix_digest(h, file);
      h = mix_digest(h, content);
      write_file(file, content);
      rec.files.push_back(file);
    }
    h = mix_digest(h, rec.summary.dump());
    rec.digest = h;
    log_ << "[" << name << "] done in " << static_cast<long long>(rec.wall_ms) << " ms\n";
    stages_.push_back(std::move(rec));
  }

  void csv(const std::string& file, const Csv& c) {
    if (cfg_.output.csv) pending_.emplace_back(file, c.text());
  }
  void plot(const std::string& file, const svg::Plot& pl) {
    if (cfg_.output.svg) pending_.emplace_back(file, svg::render(pl));
  }

  void write_file(const std::string& name, const std::string& content) {
    const auto path = dir_ / name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::kGeneric, "cannot write " + path.string());
    f << content;
    if (!f) throw Error(ErrorCode::kGeneric, "write failed for " + path.string());
    files_.push_back(path.string());
  }

  AbsLaw kappa_law() const { return m_law(cfg_.model); }

  CramerOptions cramer_options() const {
    CramerOptions o;
    o.mode = p().kappa_mode == "closed" ? KappaMode::ClosedForm
             : p().kappa_mode == "mc"   ? KappaMode::MonteCarlo
                                        : KappaMode::Auto;
    o.bracket = p().bracket;
    o.tol = p().solver_tol;
    return o;
  }

  KappaMode kappa_mode() const { return cramer_options().mode; }

  // alpha and m_alpha, from the override or the solver.
  std::pair<double, double> exponent(StageRecord& rec) {
    const AbsLaw law = kappa_law();
    const double alpha = p().alpha ? *p().alpha : solve_cramer(law, cramer_options());
    const double ma = m_alpha(law, alpha, kappa_mode());
    rec.summary["alpha"] = alpha;
    rec.summary["m_alpha"] = ma;
    rec.summary["alpha_source"] = p().alpha ? "config" : "solver";
    return {alpha, ma};
  }

  BatchOptions batch_options() const {
    BatchOptions b;
    b.backward.tol = p().tol;
    b.backward.max_depth = p().max_depth;
    b.backward.envelope = p().envelope;
    b.x0 = start_point();
    b.parallelism = par_;
    return b;
  }

  Point start_point() const {
    Point x(cfg_.model.dimension);
    for (std::size_t j = 0; j < p().x0.size(); ++j) x[j] = p().x0[j];
    return x;
  }

  StationaryBatch stationary(StageRecord& rec) {
    StationaryBatch b = stationary_batch(cfg_.model, p().count, p().seed, batch_options());
    std::size_t max_depth = 0;
    double max_bound = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
      max_depth = std::max(max_depth, b.stop_depths[i]);
      max_bound = std::max(max_bound, b.residual_bounds[i]);
    }
    rec.summary["samples"] = b.size();
    rec.summary["max_stop_depth"] = max_depth;
    rec.summary["max_residual_bound"] = max_bound;
    return b;
  }

  void write_stationary(const StationaryBatch& b) {
    auto cols = coordinate_columns(cfg_.model.dimension, "x");
    cols.push_back("depth");
    cols.push_back("bound");
    Csv c(cols);
    for (std::size_t i = 0; i < b.size(); ++i) {
      std::vector<double> r;
      for (std::size_t j = 0; j < b.samples[i].dim(); ++j) r.push_back(b.samples[i][j]);
      r.push_back(static_cast<double>(b.stop_depths[i]));
      r.push_back(b.residual_bounds[i]);
      c.row(r);
    }
    csv("stationary.csv", c);
  }

  // --- experiments -------------------------------------------------------

  void run_cramer() {
    stage("kappa", [&](StageRecord& rec) {
      const AbsLaw law = kappa_law();
      CramerReport rep = cramer_report(law, p().s_grid, cramer_options());
      if (p().alpha) rep.alpha = *p().alpha;
      // Include the row at s = alpha, kept in s order.
      KappaRow at{rep.alpha, 0.0, 0.0};
      if (rep.method == CramerReport::Method::ClosedForm) {
        at.kappa = *law.moment(rep.alpha);
      } else {
        const KappaValue k = KappaEstimator(law)(rep.alpha);
        at.kappa = k.value;
        at.se = k.se;
      }
      auto rows = rep.grid;
      rows.insert(std::upper_bound(rows.begin(), rows.end(), at.s,
                                   [](double s, const KappaRow& r) { return s < r.s; }),
                  at);
      Csv c({"s", "kappa", "se"});
      for (const auto& r : rows) c.row({r.s, r.kappa, r.se});
      csv("cramer.csv", c);
      rec.summary["alpha"] = rep.alpha;
      rec.summary["m_alpha"] = rep.m_alpha;
      rec.summary["method"] = rep.method == CramerReport::Method::ClosedForm ? "closed_form" : "monte_carlo";
      rec.summary["solver_tolerance"] = rep.solver_tolerance;
      rec.summary["s_infinity_lower_bound"] = rep.s_infinity_probe;
      rec.summary["arithmetic_risk"] = rep.arithmetic_risk;
      rec.summary["log_kappa_convex"] = log_kappa_convex(rep.grid);
      log_ << "alpha = " << format_double(rep.alpha) << ", m_alpha = " << format_double(rep.m_alpha) << "\n";
    });
  }

  void run_simulate() {
    stage("stationary", [&](StageRecord& rec) { write_stationary(stationary(rec)); });
  }

  void run_tail() {
    double alpha = 0.0, ma = 0.0;
    stage("cramer", [&](StageRecord& rec) { std::tie(alpha, ma) = exponent(rec); });
    StationaryBatch batch;
    stage("stationary", [&](StageRecord& rec) { batch = stationary(rec); });
    stage("tail", [&](StageRecord& rec) {
      TailOptions opt;
      opt.q_lo = p().q_lo;
      opt.q_hi = p().q_hi;
      opt.survival_points = p().t_points;
      const TailReport rep = tail_report(cfg_.model, batch, p().seed, alpha, ma, opt, par_);
      Csv surv({"t", "p_hat", "t_alpha_p"});
      for (const auto& r : rep.survival_grid) surv.row({r.t, r.p_hat, r.t_alpha_p});
      csv("tail_survival.csv", surv);
      Csv hill({"k", "alpha_hat"});
      for (const auto& r : rep.hill_curve) hill.row({static_cast<double>(r.k), r.alpha_hat});
      csv("hill.csv", hill);
      Csv goldie({"C", "se", "alpha", "m_alpha"});
      goldie.row({rep.goldie.value, rep.goldie.se, alpha, ma});
      csv("goldie.csv", goldie);

      rec.summary["hill_k"] = rep.hill_k;
      rec.summary["hill_alpha"] = rep.hill_alpha;
      rec.summary["goldie"] = rep.goldie.value;
      rec.summary["goldie_se"] = rep.goldie.se;
      rec.summary["goldie_se_unreliable"] = rep.goldie.se_unreliable;
      rec.summary["sigma_mass"] = rep.sigma_mass;
      rec.summary["plateau"] = rep.plateau;
      rec.summary["plateau_window"] = {rep.plateau_window.first, rep.plateau_window.second};
      rec.summary["plateau_deviation"] = rep.plateau_deviation;

      svg::Plot s{"Survival", "t", "P(|S| > t)", true, true, {}};
      svg::Series emp{{}, {}, "#1f77b4", "empirical", true, false};
      svg::Series ref{{}, {}, "#d62728", "C t^-alpha", false, true};
      for (const auto& r : rep.survival_grid) {
        emp.x.push_back(r.t);
        emp.y.push_back(r.p_hat);
        ref.x.push_back(r.t);
        ref.y.push_back(rep.goldie.value * std::pow(r.t, -alpha));
      }
      s.series = {emp, ref};
      plot("tail_survival.svg", s);
      svg::Plot h{"Hill estimator", "k", "alpha_hat", true, false, {}};
      svg::Series hs{{}, {}, "#1f77b4", "Hill", false, false};
      for (const auto& r : rep.hill_curve) {
        hs.x.push_back(static_cast<double>(r.k));
        hs.y.push_back(r.alpha_hat);
      }
      svg::Series ha{{}, {}, "#d62728", "alpha", false, true};
      if (!hs.x.empty()) ha = {{hs.x.front(), hs.x.back()}, {alpha, alpha}, "#d62728", "alpha", false, true};
      h.series = {hs, ha};
      plot("hill.svg", h);
      log_ << "Hill alpha = " << format_double(rep.hill_alpha) << ", Goldie C = " << format_double(rep.goldie.value)
           << ", plateau = " << format_double(rep.plateau) << "\n";
    });
    stage("moments", [&](StageRecord& rec) {
      const double s = p().moment_s;
      if (!(s < alpha)) {
        rec.summary["skipped"] = "moment_s >= alpha";
        return;
      }
      const AbsLaw law = kappa_law();
      const KappaValue ks = kappa(law, s, kappa_mode());
      const MomentIdentity mi = moment_identity_residual(cfg_.model, s, alpha, batch, p().seed, ks.value, par_);
      Csv c({"check", "value", "reference", "se", "pass"});
      c.row(std::vector<std::string>{"moment_identity", format_double(mi.lhs), format_double(mi.rhs),
                                     format_double(mi.se), mi.residual <= 3.0 ? "1" : "0"});
      const auto nl = n_law(cfg_.model);
      if (nl && ks.value < 1.0) {
        const auto norms = batch.norms();
        std::vector<double> pw(norms.size());
        for (std::size_t i = 0; i < norms.size(); ++i) pw[i] = std::pow(norms[i], s);
        const stats::Estimate ms = stats::mean_se(pw);
        const KappaValue ns = kappa(*nl, s, kappa_mode());
        const double lhs = std::pow(ms.value, 1.0 / s);
        const double bound = std::pow(ns.value, 1.0 / s) / (1.0 - std::pow(ks.value, 1.0 / s));
        const double se = ms.value > 0.0 ? lhs / (s * ms.value) * ms.se : 0.0;  // delta method
        c.row(std::vector<std::string>{"moment_bound", format_double(lhs), format_double(bound), format_double(se),
                                       lhs <= bound + 3.0 * se ? "1" : "0"});
        rec.summary["moment_bound"] = {lhs, bound};
      }
      csv("moments.csv", c);
      rec.summary["moment_identity"] = {mi.lhs, mi.rhs, mi.se};
    });
  }

  void run_limit() {
    double alpha = 0.0, ma = 0.0;
    stage("cramer", [&](StageRecord& rec) { std::tie(alpha, ma) = exponent(rec); });
    const Regime regime = regime_for(alpha);
    StationaryBatch batch;
    if (regime == Regime::AlphaEq1 || p().c_alpha) stage("stationary", [&](StageRecord& rec) { batch = stationary(rec); });

    const std::size_t n_small = std::max<std::size_t>(p().n / 10, 1);
    std::vector<Point> big, small;
    stage("birkhoff", [&](StageRecord& rec) {
      const Point x0 = start_point();
      const auto sums = birkhoff_sums(cfg_.model, x0, p().n, p().replicas, p().seed, par_);
      const auto sums_small = birkhoff_sums(cfg_.model, x0, n_small, p().replicas, p().seed ^ 0x5eedu, par_);
      big = normalize(sums, p().n, alpha, batch);
      small = normalize(sums_small, n_small, alpha, batch);
      auto cols = std::vector<std::string>{"replica"};
      if (cfg_.model.dimension == 1) cols.push_back("value");
      else for (const auto& c : coordinate_columns(cfg_.model.dimension, "value")) cols.push_back(c);
      Csv c(cols);
      for (std::size_t r = 0; r < big.size(); ++r) {
        std::vector<double> row{static_cast<double>(r)};
        for (std::size_t j = 0; j < big[r].dim(); ++j) row.push_back(big[r][j]);
        c.row(row);
      }
      csv("limit_samples.csv", c);
      rec.summary["n"] = p().n;
      rec.summary["n_small"] = n_small;
      rec.summary["replicas"] = p().replicas;
      rec.summary["regime"] = regime_name(regime);
    });

    stage("cf", [&](StageRecord& rec) {
      const std::size_t dim = cfg_.model.dimension;
      Point e1(dim);
      e1[0] = 1.0;
      const auto window = auto_cf_window(big, e1, p().cf_points);
      Csv cf({"t", "v_index", "re", "im", "se"});
      Csv cf_small({"t", "v_index", "re", "im", "se"});
      std::size_t agree = 0, total = 0;
      for (std::size_t j = 0; j < dim; ++j) {
        Point v(dim);
        v[j] = 1.0;
        for (double t : window) {
          const ComplexEstimate a = empirical_cf(big, t, v);
          const ComplexEstimate b = empirical_cf(small, t, v);
          cf.row({t, static_cast<double>(j + 1), a.value.real(), a.value.imag(), a.se()});
          cf_small.row({t, static_cast<double>(j + 1), b.value.real(), b.value.imag(), b.se()});
          ++total;
          if (std::abs(a.value - b.value) <= 3.0 * std::hypot(a.se(), b.se())) ++agree;
        }
      }
      csv("cf.csv", cf);
      csv("cf_small_n.csv", cf_small);
      rec.summary["cf_agreement"] = {agree, total};
      try {
        const StableFit fit = stable_index_fit(big, window, e1);
        rec.summary["fitted_index"] = fit.alpha_hat;
        rec.summary["fit_intercept"] = fit.regression.intercept;
        log_ << "fitted stable index = " << format_double(fit.alpha_hat) << " (alpha = " << format_double(alpha) << ")\n";
        svg::Plot pl{"|CF| of the normalized sums", "t", "|CF(t)|", true, false, {}};
        svg::Series emp{{}, {}, "#1f77b4", "empirical", true, false};
        svg::Series fitted{{}, {}, "#d62728", "exp(t^a Re C)", false, true};
        const double lo = window.front() / 3.0, hi = window.back() * 3.0;
        for (double t : log_grid(lo, hi, 60)) {
          emp.x.push_back(t);
          emp.y.push_back(std::abs(empirical_cf(big, t, e1).value));
          fitted.x.push_back(t);
          fitted.y.push_back(std::exp(-std::exp(fit.regression.intercept) * std::pow(t, fit.alpha_hat)));
        }
        pl.series = {emp, fitted};
        plot("cf.svg", pl);
      } catch (const PreconditionError& e) {
        rec.summary["fitted_index_error"] = e.what();
      }
      if (regime == Regime::AlphaEq2) {
        std::vector<double> xs(big.size());
        for (std::size_t i = 0; i < big.size(); ++i) xs[i] = big[i][0];
        const GaussianCheck g = gaussian_check(xs);
        rec.summary["gaussian_ks"] = g.ks;
        rec.summary["gaussian_critical"] = g.critical;
        rec.summary["skew"] = g.moments.skewness;
        rec.summary["excess_kurtosis"] = g.moments.excess_kurtosis;
        rec.summary["gaussian_pass"] = g.pass();
        std::sort(xs.begin(), xs.end());
        svg::Plot qq{"Normal QQ", "normal quantile", "standardized sample quantile", false, false, {}};
        svg::Series pts{{}, {}, "#1f77b4", "sample", true, false};
        const std::size_t stride = std::max<std::size_t>(1, xs.size() / 400);
        for (std::size_t i = 0; i < xs.size(); i += stride) {
          const double u = (static_cast<double>(i) + 0.5) / static_cast<double>(xs.size());
          pts.x.push_back(normal_quantile(u));
          pts.y.push_back((xs[i] - g.moments.mean) / g.moments.sd);
        }
        qq.series = {pts, {{-4.0, 4.0}, {-4.0, 4.0}, "#d62728", "identity", false, true}};
        plot("qq.svg", qq);
      }
    });

    if (p().c_alpha && regime != Regime::AlphaEq2) {
      stage("c_alpha", [&](StageRecord& rec) {
        const GoldieEstimate gc = goldie_constant(cfg_.model, batch, p().seed, alpha, ma, par_);
        const auto& samples = batch.samples;
        const DirectionalMeasure sigma = direction_histogram(samples, sigma_mass(gc.value, alpha), 0.999);
        std::vector<double> norms = batch.norms();
        const double g = 1.0 / stats::quantile(norms, p().q_lo);
        const TailMeasure m = TailMeasure::from_samples(alpha, sigma, samples, g);
        CAlphaOptions opt;
        opt.radial.nodes = p().radial_nodes;
        opt.radial.parallelism = par_;
        opt.seed = p().seed;
        const HFunction h = make_h(cfg_.model, p().h_reps, 1e-9, p().seed);
        Csv c({"v_index", "re", "im", "se_re", "se_im"});
        for (std::size_t j = 0; j < cfg_.model.dimension; ++j) {
          Point v(cfg_.model.dimension);
          v[j] = 1.0;
          const CAlphaResult r = c_alpha(v, alpha, h, m, opt);
          c.row({static_cast<double>(j + 1), r.value.value.real(), r.value.value.imag(), r.value.se_re, r.value.se_im});
          rec.summary["c_alpha_" + std::to_string(j + 1)] = {r.value.value.real(), r.value.value.imag(),
                                                              r.value.se_re, r.scale_disagreement};
        }
        csv("c_alpha.csv", c);
      });
    }
  }

  std::vector<Point> normalize(const std::vector<Point>& sums, std::size_t n, double alpha,
                               const StationaryBatch& batch) const {
    const Regime regime = regime_for(alpha);
    if (regime == Regime::AlphaBelow1) return normalize_birkhoff(sums, n, make_limit_params(alpha));
    if (regime == Regime::AlphaEq1)
      return normalize_birkhoff(sums, n, make_limit_params(alpha, std::nullopt, &batch.samples));
    // The stationary mean, estimated by the grand mean of S_n / n over replicas.
    Point m(cfg_.model.dimension);
    for (const auto& s : sums) m += s;
    m = (1.0 / (static_cast<double>(n) * static_cast<double>(sums.size()))) * m;
    return normalize_birkhoff(sums, n, make_limit_params(alpha, m));
  }

  static double normal_quantile(double u) {
    double lo = -10.0, hi = 10.0;
    for (int i = 0; i < 80; ++i) {
      const double mid = 0.5 * (lo + hi);
      (stats::normal_cdf(mid) < u ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }

  void run_support() {
    SupportCloud cloud;
    stage("support", [&](StageRecord& rec) {
      SupportOptions opt;
      opt.max_depth = p().depth;
      opt.fixpoint_tol = p().fixpoint_tol;
      opt.dedupe_tol = p().dedupe_tol;
      opt.parallelism = par_;
      cloud = enumerate_fixed_points(cfg_.model, opt);
      auto cols = coordinate_columns(cfg_.model.dimension, "x");
      cols.push_back("depth");
      Csv c(cols);
      for (std::size_t i = 0; i < cloud.points.size(); ++i) {
        std::vector<double> r;
        for (std::size_t j = 0; j < cloud.points[i].dim(); ++j) r.push_back(cloud.points[i][j]);
        r.push_back(static_cast<double>(cloud.depths[i]));
        c.row(r);
      }
      csv("support.csv", c);
      rec.summary["points"] = cloud.points.size();
      const ClosureReport cr = closure_consistency(cfg_.model, cloud, 10.0 * p().dedupe_tol);
      rec.summary["closure_frontier_fraction"] = cr.frontier_fraction();
      log_ << "support cloud: " << cloud.points.size() << " points\n";
    });
    stage("coverage", [&](StageRecord& rec) {
      const StationaryBatch b = stationary(rec);
      const CoverageReport r = coverage_check(cloud, b.samples, p().eps);
      Csv c({"check", "value", "threshold", "pass"});
      c.row(std::vector<std::string>{"coverage_fraction", format_double(r.fraction_covered), "1",
                                     r.fraction_covered == 1.0 ? "1" : "0"});
      c.row(std::vector<std::string>{"max_distance", format_double(r.max_distance), format_double(p().eps),
                                     r.max_distance <= p().eps ? "1" : "0"});
      csv("checks.csv", c);
      rec.summary["coverage_fraction"] = r.fraction_covered;
      rec.summary["max_distance"] = r.max_distance;
      log_ << "coverage fraction at eps = " << format_double(p().eps) << ": " << format_double(r.fraction_covered) << "\n";
    });
  }

  void run_check() {
    stage("checks", [&](StageRecord& rec) {
      const auto& spec = cfg_.model;
      Csv c({"check", "value", "threshold", "pass"});
      auto add = [&](const std::string& name, double value, double threshold, bool pass) {
        c.row(std::vector<std::string>{name, format_double(value), format_double(threshold), pass ? "1" : "0"});
        rec.summary[name] = pass;
      };
      Stream s1(StreamKey{p().seed, 0, "check-contraction"});
      const ContractionReport cr = check_contraction(spec, p().n_theta, s1);
      add("contraction_e_log_l", cr.e_log_l.value, 0.0, cr.pass);

      std::vector<Point> xs;
      for (double x : p().x_grid) {
        Point pt(spec.dimension);
        for (std::size_t j = 0; j < spec.dimension; ++j) pt[j] = x;
        xs.push_back(pt);
      }
      // (H2) only has to hold on the stationary support
      BatchOptions bo;
      bo.backward = {p().tol, p().max_depth, p().envelope};
      bo.parallelism = par_;
      const StationaryBatch support = stationary_batch(spec, std::min<std::size_t>(p().count, 2000), p().seed, bo);
      Stream s2(StreamKey{p().seed, 0, "check-cancellation"});
      const std::size_t per_sample = std::max<std::size_t>(1, p().n_theta / support.size());
      const ViolationReport vr = check_cancellation(spec, support.samples, per_sample, s2);
      add("cancellation_max_excess", vr.max_violation, 0.0, vr.pass());

      Stream s3(StreamKey{p().seed, 0, "check-smoothness"});
      const std::size_t per_point = std::max<std::size_t>(1, p().n_theta / xs.size());
      const SmoothnessReport sr = check_smoothness(spec, xs, p().t_grid, per_point, s3);
      add("smoothness_max_excess", sr.max_excess, 0.0, sr.pass);

      const AbsLaw law = kappa_law();
      Csv kc({"s", "kappa", "se"});
      const CramerReport rep = [&] {
        try {
          return cramer_report(law, p().s_grid, cramer_options());
        } catch (const ConvergenceError&) {
          CramerReport r;
          const KappaEstimator est(law);
          for (double s : p().s_grid) {
            const KappaValue k = s == 0.0 ? KappaValue{1.0, 0.0, false} : est(s);
            r.grid.push_back({s, k.value, k.se});
          }
          return r;
        }
      }();
      add("log_kappa_convex", 0.0, 0.0, log_kappa_convex(rep.grid));
      if (rep.alpha > 0.0) {
        const MomentStability ms = check_moment_stability(
            law, [a = rep.alpha](double m) { return m > 0.0 ? std::pow(m, a) * std::fabs(std::log(m)) : 0.0; },
            p().seed);
        add("finite_m_alpha_moment", ms.large.value, 0.0, ms.pass);
        if (const auto nl = n_law(spec)) {
          const MomentStability ns =
              check_moment_stability(*nl, [a = rep.alpha](double x) { return std::pow(x, a); }, p().seed);
          add("finite_n_alpha_moment", ns.large.value, 0.0, ns.pass);
          std::vector<double> grid;
          // the ratio can only fall once kappa(s) > 1, so run past alpha
          for (int k = 1; k <= 16; ++k) grid.push_back(rep.alpha * k / 4.0);
          const NontrivialityProbe np = nontriviality_probe(*nl, law, grid);
          add("nontrivial_tail_decreasing", np.curve.empty() ? 0.0 : np.curve.back().root, 0.0, np.tail_decreasing);
        }
        rec.summary["alpha"] = rep.alpha;
      }
      add("arithmetic_risk", rep.arithmetic_risk ? 1.0 : 0.0, 0.0, !rep.arithmetic_risk || cfg_.assertions.non_arithmetic);
      csv("checks.csv", c);
    });
  }

  RunConfig cfg_;
  Experiment verb_;
  Parallelism par_;
  std::ostream& log_;
  std::filesystem::path dir_;
  std::vector<StageRecord> stages_;
  std::vector<std::pair<std::string, std::string>> pending_;
  std::vector<std::string> files_;
  std::string current_ = "setup";
};

inline int exit_code_for(const Error& e) { return static_cast<int>(e.code()); }

}  // namespace detail

// Applies CLI overrides; the result is the configuration that is echoed and
// digested.
inline RunConfig effective_config(RunConfig cfg, const RunOverrides& o) {
  if (o.seed) cfg.params.seed = *o.seed;
  if (o.out) cfg.output.dir = *o.out;
  return cfg;
}

// Dispatches the experiment. Validation and assertion failures return before
// any file is written.
inline RunResult run(const RunConfig& input, Experiment verb, const RunOverrides& overrides, std::ostream& log) {
  RunResult result;
  const RunConfig cfg = effective_config(input, overrides);
  if (cfg.experiment && *cfg.experiment != verb) {
    result.exit_code = static_cast<int>(ErrorCode::kConfig);
    result.error = std::string("stage 'setup': config experiment kind '") + experiment_name(*cfg.experiment) +
                   "' does not match verb '" + experiment_name(verb) + "'";
    return result;
  }
  if ((verb == Experiment::Tail || verb == Experiment::Limit) && !cfg.assertions.non_arithmetic) {
    result.exit_code = static_cast<int>(ErrorCode::kAssertionMissing);
    result.error = std::string("stage 'setup': ") + experiment_name(verb) +
                   " needs [assertions] non_arithmetic = true (law of log|M| must not be arithmetic)";
    return result;
  }
  std::error_code ec;
  const std::filesystem::path dir(cfg.output.dir);
  std::filesystem::create_directories(dir, ec);
  {
    const auto probe = dir / ".irf-write-probe";
    std::ofstream f(probe);
    if (ec || !f) {
      result.exit_code = static_cast<int>(ErrorCode::kConfig);
      result.error = "stage 'setup': output directory '" + cfg.output.dir + "' is not writable";
      return result;
    }
    f.close();
    std::filesystem::remove(probe, ec);
  }

  Parallelism par{static_cast<unsigned>(overrides.threads)};
  detail::Runner runner(cfg, verb, par, log);
  try {
    runner.execute();
  } catch (const Error& e) {
    result.exit_code = detail::exit_code_for(e);
    result.error = "stage '" + runner.current_stage() + "': " + e.what();
  } catch (const std::exception& e) {
    result.exit_code = static_cast<int>(ErrorCode::kGeneric);
    result.error = "stage '" + runner.current_stage() + "': " + e.what();
  }
  result.files = runner.files();

  if (cfg.output.jsonl) {
    nlohmann::json head;
    head["record"] = "run";
    head["verb"] = experiment_name(verb);
    head["version"] = kVersion;
    head["seed"] = cfg.params.seed;
    nlohmann::json echo = nlohmann::json::object();
    for (const auto& [k, v] : canonical_fields(cfg)) echo[k] = v;
    head["config"] = echo;
    char digest[24];
    std::snprintf(digest, sizeof digest, "%016llx", static_cast<unsigned long long>(config_digest(cfg, kVersion)));
    head["config_digest"] = digest;
    std::string text = head.dump() + "\n";
    for (const auto& s : runner.stages()) {
      nlohmann::json j;
      j["record"] = "stage";
      j["name"] = s.name;
      j["wall_ms"] = s.wall_ms;
      std::snprintf(digest, sizeof digest, "%016llx", static_cast<unsigned long long>(s.digest));
      j["digest"] = digest;
      j["files"] = s.files;
      j["summary"] = s.summary;
      text += j.dump() + "\n";
    }
    nlohmann::json tail;
    tail["record"] = "result";
    tail["exit_code"] = result.exit_code;
    if (!result.error.empty()) tail["error"] = result.error;
    text += tail.dump() + "\n";
    const auto path = dir / "manifest.jsonl";
    std::ofstream f(path, std::ios::binary);
    f << text;
    if (f) result.files.push_back(path.string());
  }
  return result;
}

}  // namespace irf
