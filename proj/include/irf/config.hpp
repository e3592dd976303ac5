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


// Line-oriented experiment configuration:
//
//   [model]                 family, dimension, gamma, beta, lambda
//   [distributions.<name>]  kind = constant | discrete | lognormal | uniform | normal
//   [experiment]            kind, seed, counts, grids, tolerances
//   [output]                dir, formats
//   [assertions]            non_arithmetic, phi_linear_on_support
//
// '#' starts a comment. Numbers accept p/q fractions. Lists are comma
// separated, optionally bracketed.

#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "irf/error.hpp"
#include "irf/model.hpp"
#include "irf/point.hpp"
#include "irf/random.hpp"

namespace irf {

enum class Experiment { Cramer, Simulate, Tail, Limit, Support, Check };

inline const char* experiment_name(Experiment e) {
  switch (e) {
    case Experiment::Cramer: return "cramer";
    case Experiment::Simulate: return "simulate";
    case Experiment::Tail: return "tail";
    case Experiment::Limit: return "limit";
    case Experiment::Support: return "support";
    case Experiment::Check: return "check";
  }
  return "?";
}

inline std::optional<Experiment> parse_experiment(std::string_view s) {
  for (auto e : {Experiment::Cramer, Experiment::Simulate, Experiment::Tail, Experiment::Limit,
                 Experiment::Support, Experiment::Check})
    if (s == experiment_name(e)) return e;
  return std::nullopt;
}

struct ExperimentParams {
  std::uint64_t seed = 1;

  // stationary sampling
  std::size_t count = 10000;
  double tol = 1e-9;
  std::size_t max_depth = 100000;
  double envelope = 1e6;
  std::vector<double> x0;  // empty: origin

  // cramer
  std::vector<double> s_grid = {0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 4.0};
  std::optional<std::pair<double, double>> bracket;
  std::string kappa_mode = "auto";  // auto | closed | mc
  double solver_tol = 1e-6;

  // tail
  std::optional<double> alpha;  // overrides the solved exponent
  double moment_s = 0.75;
  double q_lo = 0.99;
  double q_hi = 0.9999;
  std::size_t t_points = 64;

  // limit
  std::size_t n = 10000;
  std::size_t replicas = 10000;
  std::size_t cf_points = 8;
  bool c_alpha = false;
  std::size_t h_reps = 200;
  std::size_t radial_nodes = 48;

  // support
  std::size_t depth = 6;
  double fixpoint_tol = 1e-10;
  double dedupe_tol = 1e-8;
  double eps = 1e-6;

  // check
  std::size_t n_theta = 20000;
  std::vector<double> x_grid = {-10.0, -1.0, -0.1, 0.0, 0.1, 1.0, 10.0};
  std::vector<double> t_grid = {0.01, 0.1, 0.5, 1.0};
};

struct OutputSpec {
  std::string dir = "irf-out";
  bool csv = true;
  bool jsonl = true;
  bool svg = false;
};

struct Assertions {
  bool non_arithmetic = false;
  bool phi_linear_on_support = false;
};

struct RunConfig {
  ModelSpec model;
  std::optional<Experiment> experiment;  // [experiment] kind; the CLI verb must agree
  ExperimentParams params;
  OutputSpec output;
  Assertions assertions;
};

namespace detail {

struct ConfigEntry {
  std::string value;
  std::size_t line = 0;
};

struct ConfigSection {
  std::size_t line = 0;
  std::map<std::string, ConfigEntry> keys;
};

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline bool valid_key(std::string_view k) {
  if (k.empty()) return false;
  return std::all_of(k.begin(), k.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '.';
  });
}

[[noreturn]] inline void config_fail(std::size_t line, const std::string& key, const std::string& msg,
                                     ConfigIssue issue = ConfigIssue::kInvalid) {
  std::string where = "config line " + std::to_string(line);
  if (!key.empty()) where += ", key '" + key + "'";
  throw ConfigError(where + ": " + msg, issue);
}

inline std::optional<double> parse_plain_double(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

// Full-precision double, or p/q.
inline std::optional<double> parse_number_text(std::string_view s) {
  const std::string t = trim(s);
  const auto slash = t.find('/');
  if (slash == std::string::npos) return parse_plain_double(t);
  const auto p = parse_plain_double(trim(std::string_view(t).substr(0, slash)));
  const auto q = parse_plain_double(trim(std::string_view(t).substr(slash + 1)));
  if (!p || !q || *q == 0.0) return std::nullopt;
  return *p / *q;
}

class SectionReader {
 public:
  SectionReader(std::string name, ConfigSection& sec) : name_(std::move(name)), sec_(sec) {}

  bool has(const std::string& key) const { return sec_.keys.count(key) > 0; }
  std::size_t line() const { return sec_.line; }
  std::size_t line_of(const std::string& key) const { return has(key) ? sec_.keys.at(key).line : sec_.line; }

  const ConfigEntry* raw(const std::string& key) {
    used_.insert(key);
    const auto it = sec_.keys.find(key);
    return it == sec_.keys.end() ? nullptr : &it->second;
  }

  const ConfigEntry& require(const std::string& key) {
    const ConfigEntry* e = raw(key);
    if (!e) config_fail(sec_.line, key, "required key missing in [" + name_ + "]");
    return *e;
  }

  std::optional<std::string> text(const std::string& key) {
    const ConfigEntry* e = raw(key);
    if (!e) return std::nullopt;
    return e->value;
  }

  double number(const ConfigEntry& e, const std::string& key) {
    const auto v = parse_number_text(e.value);
    if (!v) config_fail(e.line, key, "malformed number '" + e.value + "'", ConfigIssue::kMalformedNumber);
    return *v;
  }
  std::optional<double> number(const std::string& key) {
    const ConfigEntry* e = raw(key);
    if (!e) return std::nullopt;
    return number(*e, key);
  }

  std::optional<std::vector<double>> list(const std::string& key) {
    const ConfigEntry* e = raw(key);
    if (!e) return std::nullopt;
    std::string body = trim(e->value);
    if (!body.empty() && body.front() == '[') {
      if (body.back() != ']') config_fail(e->line, key, "unterminated list", ConfigIssue::kMalformedNumber);
      body = body.substr(1, body.size() - 2);
    }
    std::vector<double> out;
    if (trim(body).empty()) return out;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto v = parse_number_text(item);
      if (!v) config_fail(e->line, key, "malformed number '" + trim(item) + "'", ConfigIssue::kMalformedNumber);
      out.push_back(*v);
    }
    return out;
  }

  // Non-negative integer; scientific notation allowed when integral (1e6).
  std::optional<std::uint64_t> integer(const std::string& key) {
    const ConfigEntry* e = raw(key);
    if (!e) return std::nullopt;
    const std::string t = trim(e->value);
    std::uint64_t u = 0;
    const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), u);
    if (ec == std::errc() && p == t.data() + t.size()) return u;
    const auto d = parse_plain_double(t);
    if (!d || *d < 0.0 || *d != std::floor(*d) || *d > 9.007199254740992e15)
      config_fail(e->line, key, "malformed non-negative integer '" + t + "'", ConfigIssue::kMalformedNumber);
    return static_cast<std::uint64_t>(*d);
  }

  std::optional<std::size_t> positive(const std::string& key) {
    const auto v = integer(key);
    if (v && *v == 0) config_fail(line_of(key), key, "must be positive");
    if (!v) return std::nullopt;
    return static_cast<std::size_t>(*v);
  }

  std::optional<bool> flag(const std::string& key) {
    const ConfigEntry* e = raw(key);
    if (!e) return std::nullopt;
    if (e->value == "true" || e->value == "yes" || e->value == "1") return true;
    if (e->value == "false" || e->value == "no" || e->value == "0") return false;
    config_fail(e->line, key, "expected true or false, got '" + e->value + "'");
  }

  void reject_unused() const {
    for (const auto& [k, e] : sec_.keys)
      if (!used_.count(k)) config_fail(e.line, k, "unknown key in [" + name_ + "]", ConfigIssue::kUnknownKey);
  }

 private:
  std::string name_;
  ConfigSection& sec_;
  std::set<std::string> used_;
};

inline DistributionSpec parse_distribution(const std::string& name, SectionReader& r) {
  const auto kind_text = r.text("kind");
  if (!kind_text) config_fail(r.line(), "kind", "distribution '" + name + "' needs a kind");
  const std::string kind = *kind_text;
  const auto need = [&](const char* key) { return r.number(r.require(key), key); };
  DistributionSpec d;
  if (kind == "constant") {
    d = dist::Constant{need("value")};
  } else if (kind == "discrete") {
    r.require("values");
    r.require("probabilities");
    d = dist::DiscreteTable{*r.list("values"), *r.list("probabilities")};
  } else if (kind == "lognormal") {
    d = dist::LogNormal{need("meanlog"), need("sdlog")};
  } else if (kind == "uniform") {
    d = dist::Uniform{need("low"), need("high")};
  } else if (kind == "normal") {
    d = dist::Normal{need("mean"), need("sd")};
  } else {
    config_fail(r.line_of("kind"), "kind", "unknown distribution kind '" + kind + "'");
  }
  r.reject_unused();
  try {
    validate(d);
  } catch (const ConfigError& e) {
    const std::string key = e.issue() == ConfigIssue::kProbabilities ? "probabilities" : "kind";
    config_fail(r.line_of(key), key, e.what(), e.issue());
  }
  return d;
}

inline std::optional<Family> parse_family(std::string_view s) {
  for (auto f : {Family::Affine, Family::Extremal, Family::Letac, Family::SqrtQuadratic, Family::Arch1})
    if (s == family_name(f)) return f;
  return std::nullopt;
}

}  // namespace detail

// Parses and validates; every failure names the offending key and line.
inline RunConfig parse_config(std::string_view text) {
  using namespace detail;
  std::map<std::string, ConfigSection> sections;
  std::vector<std::string> order;
  ConfigSection* current = nullptr;
  std::size_t lineno = 0;
  std::stringstream in{std::string(text)};
  std::string raw_line;
  while (std::getline(in, raw_line)) {
    ++lineno;
    const auto hash = raw_line.find('#');
    const std::string line = trim(hash == std::string::npos ? raw_line : raw_line.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') config_fail(lineno, "", "malformed section header '" + line + "'");
      const std::string name = trim(line.substr(1, line.size() - 2));
      if (!valid_key(name)) config_fail(lineno, "", "malformed section name '" + name + "'");
      if (sections.count(name)) config_fail(lineno, "", "duplicate section [" + name + "]");
      current = &sections[name];
      current->line = lineno;
      order.push_back(name);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) config_fail(lineno, "", "expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!valid_key(key)) config_fail(lineno, key, "keys are lowercase snake_case");
    if (!current) config_fail(lineno, key, "key outside any section");
    if (current->keys.count(key)) config_fail(lineno, key, "duplicate key");
    current->keys[key] = {value, lineno};
  }

  RunConfig cfg;
  const std::string dist_prefix = "distributions.";
  for (const auto& name : order) {
    const bool known = name == "model" || name == "experiment" || name == "output" || name == "assertions" ||
                       name.rfind(dist_prefix, 0) == 0;
    if (!known) config_fail(sections[name].line, "", "unknown section [" + name + "]", ConfigIssue::kUnknownKey);
  }

  // [model]
  if (!sections.count("model")) config_fail(1, "", "missing [model] section");
  SectionReader model("model", sections["model"]);
  const ConfigEntry& fam = model.require("family");
  const auto family = parse_family(fam.value);
  if (!family) config_fail(fam.line, "family", "unknown family '" + fam.value + "'", ConfigIssue::kUnknownFamily);
  cfg.model.family = *family;
  if (const auto d = model.integer("dimension")) {
    if (*d < 1 || *d > kMaxDim)
      config_fail(model.line_of("dimension"), "dimension", "dimension <= 3 required (got " + std::to_string(*d) + ")",
                  ConfigIssue::kDimension);
    cfg.model.dimension = static_cast<std::size_t>(*d);
  }
  if (cfg.model.family != Family::Affine && cfg.model.dimension != 1)
    config_fail(model.line_of("dimension"), "dimension", std::string("family ") + family_name(cfg.model.family) +
                                                             " is scalar (dimension 1)", ConfigIssue::kDimension);
  if (const auto v = model.number("gamma")) cfg.model.arch.gamma = *v;
  if (const auto v = model.number("beta")) cfg.model.arch.beta = *v;
  if (const auto v = model.number("lambda")) cfg.model.arch.lambda = *v;
  model.reject_unused();

  // [distributions.<name>]
  std::vector<std::string> allowed = required_parameters(cfg.model.family, cfg.model.dimension);
  if (cfg.model.family == Family::Affine && cfg.model.dimension == 1) allowed.push_back("sign");
  for (const auto& name : order) {
    if (name.rfind(dist_prefix, 0) != 0) continue;
    const std::string param = name.substr(dist_prefix.size());
    if (std::find(allowed.begin(), allowed.end(), param) == allowed.end())
      config_fail(sections[name].line, "", "family " + std::string(family_name(cfg.model.family)) +
                                               " has no parameter '" + param + "'", ConfigIssue::kUnknownKey);
    SectionReader r(name, sections[name]);
    cfg.model.laws[param] = parse_distribution(param, r);
  }
  for (const auto& p : required_parameters(cfg.model.family, cfg.model.dimension))
    if (!cfg.model.laws.count(p))
      config_fail(model.line_of("family"), "family", "missing parameter law [distributions." + p + "]",
                  ConfigIssue::kMissingLaw);
  try {
    validate(cfg.model);
  } catch (const ConfigError& e) {
    config_fail(model.line_of("family"), "family", e.what(), e.issue());
  }

  // [experiment]
  if (sections.count("experiment")) {
    SectionReader x("experiment", sections["experiment"]);
    auto& p = cfg.params;
    if (const auto k = x.text("kind")) {
      cfg.experiment = parse_experiment(*k);
      if (!cfg.experiment) config_fail(x.line_of("kind"), "kind", "unknown experiment '" + *k + "'");
    }
    if (const auto v = x.integer("seed")) p.seed = *v;
    if (const auto v = x.positive("count")) p.count = *v;
    if (const auto v = x.number("tol")) p.tol = *v;
    if (const auto v = x.positive("max_depth")) p.max_depth = *v;
    if (const auto v = x.number("envelope")) p.envelope = *v;
    if (const auto v = x.list("x0")) p.x0 = *v;
    if (const auto v = x.list("s_grid")) p.s_grid = *v;
    if (const auto v = x.list("bracket")) {
      if (v->size() != 2 || !((*v)[0] < (*v)[1]))
        config_fail(x.line_of("bracket"), "bracket", "expected two increasing numbers");
      p.bracket = std::pair{(*v)[0], (*v)[1]};
    }
    if (const auto v = x.text("kappa_mode")) {
      if (*v != "auto" && *v != "closed" && *v != "mc")
        config_fail(x.line_of("kappa_mode"), "kappa_mode", "expected auto, closed or mc");
      p.kappa_mode = *v;
    }
    if (const auto v = x.number("solver_tol")) p.solver_tol = *v;
    if (const auto v = x.number("alpha")) p.alpha = *v;
    if (const auto v = x.number("moment_s")) p.moment_s = *v;
    if (const auto v = x.number("q_lo")) p.q_lo = *v;
    if (const auto v = x.number("q_hi")) p.q_hi = *v;
    if (const auto v = x.positive("t_points")) p.t_points = *v;
    if (const auto v = x.positive("n")) p.n = *v;
    if (const auto v = x.positive("replicas")) p.replicas = *v;
    if (const auto v = x.positive("cf_points")) p.cf_points = *v;
    if (const auto v = x.flag("c_alpha")) p.c_alpha = *v;
    if (const auto v = x.positive("h_reps")) p.h_reps = *v;
    if (const auto v = x.positive("radial_nodes")) p.radial_nodes = *v;
    if (const auto v = x.positive("depth")) p.depth = *v;
    if (const auto v = x.number("fixpoint_tol")) p.fixpoint_tol = *v;
    if (const auto v = x.number("dedupe_tol")) p.dedupe_tol = *v;
    if (const auto v = x.number("eps")) p.eps = *v;
    if (const auto v = x.positive("n_theta")) p.n_theta = *v;
    if (const auto v = x.list("x_grid")) p.x_grid = *v;
    if (const auto v = x.list("t_grid")) p.t_grid = *v;
    x.reject_unused();

    auto positive_real = [&](const char* key, double v) {
      if (!(v > 0.0)) config_fail(x.line_of(key), key, "must be > 0");
    };
    positive_real("tol", p.tol);
    positive_real("envelope", p.envelope);
    positive_real("solver_tol", p.solver_tol);
    positive_real("moment_s", p.moment_s);
    positive_real("fixpoint_tol", p.fixpoint_tol);
    positive_real("dedupe_tol", p.dedupe_tol);
    positive_real("eps", p.eps);
    if (p.alpha) positive_real("alpha", *p.alpha);
    if (!(0.0 < p.q_lo && p.q_lo < p.q_hi && p.q_hi < 1.0))
      config_fail(x.line_of("q_lo"), "q_lo", "need 0 < q_lo < q_hi < 1");
    for (const char* key : {"s_grid", "x_grid", "t_grid"}) {
      const auto& g = std::string(key) == "s_grid" ? p.s_grid : std::string(key) == "x_grid" ? p.x_grid : p.t_grid;
      if (g.empty()) config_fail(x.line_of(key), key, "grid must not be empty");
      if (!std::is_sorted(g.begin(), g.end())) config_fail(x.line_of(key), key, "grid must be sorted");
    }
    if (p.s_grid.front() < 0.0) config_fail(x.line_of("s_grid"), "s_grid", "s must be >= 0");
    if (p.t_grid.front() <= 0.0) config_fail(x.line_of("t_grid"), "t_grid", "t must be > 0");
    if (!p.x0.empty() && p.x0.size() != cfg.model.dimension)
      config_fail(x.line_of("x0"), "x0", "x0 needs " + std::to_string(cfg.model.dimension) + " coordinates");
  }

  // [output]
  if (sections.count("output")) {
    SectionReader o("output", sections["output"]);
    if (const auto v = o.text("dir")) {
      if (v->empty()) config_fail(o.line_of("dir"), "dir", "empty output directory");
      cfg.output.dir = *v;
    }
    if (const auto v = o.text("formats")) {
      cfg.output.csv = cfg.output.jsonl = cfg.output.svg = false;
      std::stringstream ss(*v);
      std::string item;
      while (std::getline(ss, item, ',')) {
        const std::string f = trim(item);
        if (f == "csv") cfg.output.csv = true;
        else if (f == "jsonl") cfg.output.jsonl = true;
        else if (f == "svg") cfg.output.svg = true;
        else config_fail(o.line_of("formats"), "formats", "unknown format '" + f + "'");
      }
    }
    o.reject_unused();
  }

  // [assertions]
  if (sections.count("assertions")) {
    SectionReader a("assertions", sections["assertions"]);
    if (const auto v = a.flag("non_arithmetic")) cfg.assertions.non_arithmetic = *v;
    if (const auto v = a.flag("phi_linear_on_support")) cfg.assertions.phi_linear_on_support = *v;
    a.reject_unused();
  }
  return cfg;
}

// ---------------------------------------------------------------------------
// Canonical text: every effective field, full precision, fixed order. Used
// for the manifest echo and digest.
// ---------------------------------------------------------------------------

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string format_list(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
  return s + "]";
}

inline std::string canonical_law(const DistributionSpec& d) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, dist::Constant>) return "constant(" + format_double(x.value) + ")";
        else if constexpr (std::is_same_v<T, dist::DiscreteTable>)
          return "discrete(" + format_list(x.values) + ";" + format_list(x.probabilities) + ")";
        else if constexpr (std::is_same_v<T, dist::LogNormal>)
          return "lognormal(" + format_double(x.meanlog) + "," + format_double(x.sdlog) + ")";
        else if constexpr (std::is_same_v<T, dist::Uniform>)
          return "uniform(" + format_double(x.a) + "," + format_double(x.b) + ")";
        else return "normal(" + format_double(x.mean) + "," + format_double(x.sd) + ")";
      },
      d);
}

// Ordered (key, value) pairs of the effective configuration.
inline std::vector<std::pair<std::string, std::string>> canonical_fields(const RunConfig& c) {
  std::vector<std::pair<std::string, std::string>> f;
  const auto& p = c.params;
  auto num = [&](const std::string& k, double v) { f.emplace_back(k, format_double(v)); };
  auto cnt = [&](const std::string& k, std::uint64_t v) { f.emplace_back(k, std::to_string(v)); };
  f.emplace_back("model.family", family_name(c.model.family));
  cnt("model.dimension", c.model.dimension);
  num("model.gamma", c.model.arch.gamma);
  num("model.beta", c.model.arch.beta);
  num("model.lambda", c.model.arch.lambda);
  for (const auto& [name, law] : c.model.laws) f.emplace_back("distributions." + name, canonical_law(law));
  f.emplace_back("experiment.kind", c.experiment ? experiment_name(*c.experiment) : "");
  cnt("experiment.seed", p.seed);
  cnt("experiment.count", p.count);
  num("experiment.tol", p.tol);
  cnt("experiment.max_depth", p.max_depth);
  num("experiment.envelope", p.envelope);
  f.emplace_back("experiment.x0", format_list(p.x0));
  f.emplace_back("experiment.s_grid", format_list(p.s_grid));
  f.emplace_back("experiment.bracket",
                 p.bracket ? format_list({p.bracket->first, p.bracket->second}) : std::string("auto"));
  f.emplace_back("experiment.kappa_mode", p.kappa_mode);
  num("experiment.solver_tol", p.solver_tol);
  f.emplace_back("experiment.alpha", p.alpha ? format_double(*p.alpha) : std::string("solve"));
  num("experiment.moment_s", p.moment_s);
  num("experiment.q_lo", p.q_lo);
  num("experiment.q_hi", p.q_hi);
  cnt("experiment.t_points", p.t_points);
  cnt("experiment.n", p.n);
  cnt("experiment.replicas", p.replicas);
  cnt("experiment.cf_points", p.cf_points);
  f.emplace_back("experiment.c_alpha", p.c_alpha ? "true" : "false");
  cnt("experiment.h_reps", p.h_reps);
  cnt("experiment.radial_nodes", p.radial_nodes);
  cnt("experiment.depth", p.depth);
  num("experiment.fixpoint_tol", p.fixpoint_tol);
  num("experiment.dedupe_tol", p.dedupe_tol);
  num("experiment.eps", p.eps);
  cnt("experiment.n_theta", p.n_theta);
  f.emplace_back("experiment.x_grid", format_list(p.x_grid));
  f.emplace_back("experiment.t_grid", format_list(p.t_grid));
  f.emplace_back("output.dir", c.output.dir);
  f.emplace_back("output.formats", std::string(c.output.csv ? "csv;" : "") + (c.output.jsonl ? "jsonl;" : "") +
                                       (c.output.svg ? "svg;" : ""));
  f.emplace_back("assertions.non_arithmetic", c.assertions.non_arithmetic ? "true" : "false");
  f.emplace_back("assertions.phi_linear_on_support", c.assertions.phi_linear_on_support ? "true" : "false");
  return f;
}

inline std::uint64_t config_digest(const RunConfig& c, std::string_view version) {
  std::string text;
  for (const auto& [k, v] : canonical_fields(c)) text += k + "=" + v + "\n";
  text += "version=";
  text += version;
  return fnv1a64(text);
}

}  // namespace irf
