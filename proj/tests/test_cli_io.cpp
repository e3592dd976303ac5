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
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "irf/config.hpp"
#include "irf/run.hpp"
#include "irf/version.hpp"
#include "json.hpp"

namespace irf {
namespace {

namespace fs = std::filesystem;

const char* kLetac = R"(# two-point support
[model]
family = letac

[distributions.a]
kind = discrete
values = 1/3, 2
probabilities = 3/4, 1/4

[distributions.b]
kind = constant
value = 1/2

[distributions.c]
kind = constant
value = -1

[experiment]
seed = 2024
count = 4000
depth = 6
)";

const char* kExtremal = R"([model]
family = extremal

[distributions.a]
kind = lognormal
meanlog = -0.75
sdlog = 1

[distributions.b]
kind = constant
value = 1

[experiment]
seed = 7
count = 3000
)";

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("irf-test-" + std::to_string(::getpid()) + "-" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

std::string first_line(const fs::path& p) {
  std::ifstream f(p);
  std::string l;
  std::getline(f, l);
  return l;
}

RunResult run_in(const std::string& text, Experiment verb, const fs::path& dir, std::size_t threads = 1) {
  RunOverrides o;
  o.out = dir.string();
  o.threads = threads;
  std::ostringstream log;
  return run(parse_config(text), verb, o, log);
}

// Replaces the first line starting with `key =`.
std::string with(std::string text, const std::string& key, const std::string& value) {
  const auto at = text.find("\n" + key + " =");
  if (at == std::string::npos) return text;
  const auto end = text.find('\n', at + 1);
  return text.replace(at + 1, end - at - 1, key + " = " + value);
}

ConfigIssue issue_of(const std::string& text, std::string* what = nullptr) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    if (what) *what = e.what();
    return e.issue();
  }
  ADD_FAILURE() << "config parsed";
  return ConfigIssue::kInvalid;
}

TEST(ParseConfig, LetacExample) {
  const RunConfig c = parse_config(kLetac);
  EXPECT_EQ(c.model.family, Family::Letac);
  const auto& a = std::get<dist::DiscreteTable>(c.model.laws.at("a"));
  ASSERT_EQ(a.values.size(), 2u);
  EXPECT_DOUBLE_EQ(a.values[0], 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(a.probabilities[1], 0.25);
  EXPECT_EQ(std::get<dist::Constant>(c.model.laws.at("c")).value, -1.0);
  EXPECT_EQ(c.params.seed, 2024u);
  EXPECT_EQ(c.params.count, 4000u);
  EXPECT_FALSE(c.experiment.has_value());
  EXPECT_FALSE(c.assertions.non_arithmetic);
  EXPECT_EQ(c.output.dir, "irf-out");
}

TEST(ParseConfig, ListsAndSections) {
  std::string t = std::string(kExtremal) + "s_grid = [0.5, 1, 2]\nkind = tail\n\n[output]\nformats = csv, svg\n\n[assertions]\nnon_arithmetic = true\n";
  const RunConfig c = parse_config(t);
  EXPECT_EQ(c.params.s_grid, (std::vector<double>{0.5, 1.0, 2.0}));
  EXPECT_EQ(*c.experiment, Experiment::Tail);
  EXPECT_TRUE(c.output.svg);
  EXPECT_FALSE(c.output.jsonl);
  EXPECT_TRUE(c.assertions.non_arithmetic);
}

TEST(ParseConfig, ErrorsCarryIssueAndLine) {
  std::string what;
  EXPECT_EQ(issue_of(with(kLetac, "family", "garden"), &what), ConfigIssue::kUnknownFamily);
  EXPECT_NE(what.find("config line 3, key 'family'"), std::string::npos) << what;

  std::string no_c = kLetac;
  no_c.erase(no_c.find("[distributions.c]"), std::string("[distributions.c]\nkind = constant\nvalue = -1\n").size());
  EXPECT_EQ(issue_of(no_c, &what), ConfigIssue::kMissingLaw);
  EXPECT_NE(what.find("distributions.c"), std::string::npos) << what;

  std::string affine4 = with(kExtremal, "family", "affine\ndimension = 4");
  EXPECT_EQ(issue_of(affine4, &what), ConfigIssue::kDimension);
  EXPECT_NE(what.find("dimension <= 3"), std::string::npos) << what;

  EXPECT_EQ(issue_of(with(kLetac, "values", "1/x, 2"), &what), ConfigIssue::kMalformedNumber);
  EXPECT_NE(what.find("config line 7, key 'values'"), std::string::npos) << what;

  EXPECT_EQ(issue_of(std::string(kLetac) + "colour = red\n", &what), ConfigIssue::kUnknownKey);
  EXPECT_NE(what.find("key 'colour'"), std::string::npos) << what;

  EXPECT_EQ(issue_of(std::string(kLetac) + "\n[extras]\nx = 1\n"), ConfigIssue::kUnknownKey);
  EXPECT_EQ(issue_of(with(kLetac, "probabilities", "1/2, 1/4")), ConfigIssue::kProbabilities);
  EXPECT_EQ(issue_of(with(kLetac, "count", "0"), &what), ConfigIssue::kInvalid);
  EXPECT_NE(what.find("key 'count'"), std::string::npos) << what;
  EXPECT_EQ(issue_of(std::string(kLetac) + "s_grid = 2, 1\n"), ConfigIssue::kInvalid);
  EXPECT_EQ(issue_of(std::string(kLetac) + "seed = 3\n"), ConfigIssue::kInvalid);  // duplicate
}

TEST(ConfigDigest, ChangesWithFieldsAndVersion) {
  const RunConfig a = parse_config(kLetac);
  const RunConfig same = parse_config(std::string("# reformatted\n\n") + kLetac + "\n# trailing\n");
  EXPECT_EQ(config_digest(a, kVersion), config_digest(same, kVersion));
  EXPECT_NE(config_digest(a, kVersion), config_digest(a, "9.9.9"));
  EXPECT_NE(config_digest(a, kVersion), config_digest(parse_config(with(kLetac, "seed", "2025")), kVersion));
  EXPECT_NE(config_digest(a, kVersion), config_digest(parse_config(with(kLetac, "value", "1/4")), kVersion));
  EXPECT_NE(config_digest(a, kVersion), config_digest(parse_config(std::string(kLetac) + "eps = 1e-7\n"), kVersion));
  // 0.5 and 1/2 are the same number
  EXPECT_EQ(config_digest(a, kVersion), config_digest(parse_config(with(kLetac, "value", "0.5")), kVersion));
}

TEST(Run, CramerOnLetac) {
  const fs::path dir = scratch("cramer");
  const RunResult r = run_in(kLetac, Experiment::Cramer, dir);
  ASSERT_EQ(r.exit_code, 0) << r.error;
  EXPECT_EQ(first_line(dir / "cramer.csv"), "s,kappa,se");
  std::ifstream f(dir / "cramer.csv");
  std::string line;
  std::getline(f, line);
  bool found = false;
  while (std::getline(f, line)) {
    const double s = std::stod(line.substr(0, line.find(',')));
    const double k = std::stod(line.substr(line.find(',') + 1));
    if (std::fabs(s - 1.851) < 1e-3) {
      found = true;
      EXPECT_NEAR(k, 1.0, 1e-6);
    }
  }
  EXPECT_TRUE(found);
  fs::remove_all(dir);
}

TEST(Run, SupportTwoPoints) {
  const fs::path dir = scratch("support");
  const RunResult r = run_in(kLetac, Experiment::Support, dir);
  ASSERT_EQ(r.exit_code, 0) << r.error;
  std::ifstream f(dir / "support.csv");
  std::string line;
  std::getline(f, line);
  EXPECT_EQ(line, "x1,depth");
  std::vector<double> xs;
  while (std::getline(f, line)) xs.push_back(std::stod(line.substr(0, line.find(','))));
  std::sort(xs.begin(), xs.end());
  ASSERT_EQ(xs.size(), 2u);
  EXPECT_NEAR(xs[0], -5.0 / 6.0, 1e-9);
  EXPECT_NEAR(xs[1], 0.0, 1e-9);
  EXPECT_EQ(first_line(dir / "checks.csv"), "check,value,threshold,pass");
  fs::remove_all(dir);
}

TEST(Run, ExactHeaders) {
  const fs::path dir = scratch("headers");
  ASSERT_EQ(run_in(kExtremal, Experiment::Simulate, dir).exit_code, 0);
  EXPECT_EQ(first_line(dir / "stationary.csv"), "x1,depth,bound");
  const fs::path tail = scratch("headers-tail");
  const std::string t = std::string(kExtremal) + "\n[assertions]\nnon_arithmetic = true\n";
  const RunResult r = run_in(t, Experiment::Tail, tail);
  ASSERT_EQ(r.exit_code, 0) << r.error;
  EXPECT_EQ(first_line(tail / "tail_survival.csv"), "t,p_hat,t_alpha_p");
  EXPECT_EQ(first_line(tail / "hill.csv"), "k,alpha_hat");
  EXPECT_EQ(first_line(tail / "goldie.csv"), "C,se,alpha,m_alpha");
  EXPECT_EQ(first_line(tail / "moments.csv"), "check,value,reference,se,pass");
  fs::remove_all(dir);
  fs::remove_all(tail);
}

TEST(Run, ManifestRecords) {
  const fs::path dir = scratch("manifest");
  ASSERT_EQ(run_in(kLetac, Experiment::Simulate, dir).exit_code, 0);
  std::ifstream f(dir / "manifest.jsonl");
  std::vector<nlohmann::json> recs;
  std::string line;
  while (std::getline(f, line)) recs.push_back(nlohmann::json::parse(line));
  ASSERT_GE(recs.size(), 3u);
  EXPECT_EQ(recs.front()["record"], "run");
  EXPECT_EQ(recs.front()["version"], kVersion);
  EXPECT_EQ(recs.front()["seed"], 2024);
  EXPECT_EQ(recs.front()["config_digest"].get<std::string>().size(), 16u);
  EXPECT_EQ(recs[1]["record"], "stage");
  EXPECT_EQ(recs.back()["record"], "result");
  EXPECT_EQ(recs.back()["exit_code"], 0);
  fs::remove_all(dir);
}

TEST(Run, ThreadCountDoesNotChangeOutputs) {
  for (Experiment verb : {Experiment::Simulate, Experiment::Support, Experiment::Cramer}) {
    const fs::path a = scratch("t1"), b = scratch("t8");
    ASSERT_EQ(run_in(kLetac, verb, a, 1).exit_code, 0);
    ASSERT_EQ(run_in(kLetac, verb, b, 8).exit_code, 0);
    for (const auto& e : fs::directory_iterator(a)) {
      if (e.path().extension() != ".csv") continue;
      EXPECT_EQ(slurp(e.path()), slurp(b / e.path().filename())) << e.path();
    }
    fs::remove_all(a);
    fs::remove_all(b);
  }
  const fs::path a = scratch("e1"), b = scratch("e8");
  ASSERT_EQ(run_in(kExtremal, Experiment::Simulate, a, 1).exit_code, 0);
  ASSERT_EQ(run_in(kExtremal, Experiment::Simulate, b, 8).exit_code, 0);
  EXPECT_EQ(slurp(a / "stationary.csv"), slurp(b / "stationary.csv"));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Run, SeedOverrideChangesOutputs) {
  const fs::path a = scratch("s1"), b = scratch("s2");
  ASSERT_EQ(run_in(kExtremal, Experiment::Simulate, a).exit_code, 0);
  RunOverrides o;
  o.out = b.string();
  o.seed = 8;
  std::ostringstream log;
  ASSERT_EQ(run(parse_config(kExtremal), Experiment::Simulate, o, log).exit_code, 0);
  EXPECT_NE(slurp(a / "stationary.csv"), slurp(b / "stationary.csv"));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Run, MissingAssertionExitsFive) {
  const fs::path dir = scratch("assert");
  for (Experiment verb : {Experiment::Tail, Experiment::Limit}) {
    const RunResult r = run_in(kExtremal, verb, dir);
    EXPECT_EQ(r.exit_code, 5);
    EXPECT_NE(r.error.find("non_arithmetic"), std::string::npos);
    EXPECT_TRUE(r.files.empty());
  }
  EXPECT_FALSE(fs::exists(dir / "tail_survival.csv"));
  fs::remove_all(dir);
}

TEST(Run, VerbMismatchAndStageErrors) {
  const fs::path dir = scratch("mismatch");
  const RunResult r = run_in(std::string(kLetac) + "kind = support\n", Experiment::Cramer, dir);
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.error.find("stage 'setup'"), std::string::npos);
  // continuous laws cannot be enumerated: the failing stage is named
  const RunResult s = run_in(kExtremal, Experiment::Support, dir);
  EXPECT_NE(s.exit_code, 0);
  EXPECT_EQ(s.error.rfind("stage 'support'", 0), 0u) << s.error;
  fs::remove_all(dir);
}

int cli(const std::string& args) {
  const int status = std::system((std::string(IRF_CLI) + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Cli, ExitCodesAndNoFilesOnConfigError) {
  const fs::path dir = scratch("cli");
  fs::create_directories(dir);
  const fs::path good = dir / "good.conf", bad = dir / "bad.conf";
  std::ofstream(good) << kLetac;
  std::ofstream(bad) << with(kLetac, "count", "0");
  const fs::path out = dir / "out", bad_out = dir / "bad-out";
  EXPECT_EQ(cli("cramer --config " + good.string() + " --out " + out.string()), 0);
  EXPECT_TRUE(fs::exists(out / "cramer.csv"));
  EXPECT_EQ(cli("cramer --config " + bad.string() + " --out " + bad_out.string()), 2);
  EXPECT_FALSE(fs::exists(bad_out));
  EXPECT_NE(cli("cramer --config " + (dir / "missing.conf").string()), 0);
  EXPECT_NE(cli("explode --config " + good.string()), 0);
  EXPECT_EQ(cli("tail --config " + good.string() + " --out " + out.string()), 5);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace irf
