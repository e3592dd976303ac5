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


// irf: command-line front end.
//
//   irf <verb> --config <path> [--seed N] [--out DIR] [--threads K]
//
// verbs: cramer, simulate, tail, limit, support, check

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "irf/run.hpp"

namespace {

const char* summary(irf::Experiment v) {
  switch (v) {
    case irf::Experiment::Cramer: return "kappa(s) grid, Cramer exponent alpha and m_alpha";
    case irf::Experiment::Simulate: return "stationary batch by backward iteration";
    case irf::Experiment::Tail: return "survival curve, Hill curve, Goldie constant, moment checks";
    case irf::Experiment::Limit: return "normalized Birkhoff sums, CF diagnostics, optional C_alpha";
    case irf::Experiment::Support: return "fixed points of contracting words and coverage";
    case irf::Experiment::Check: return "sampled hypothesis checks";
  }
  return "";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Iterated random functions: stationary laws, tails and stable limits"};
  app.set_version_flag("--version", irf::kVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 0;
  std::string out;
  std::size_t threads = 1;

  for (auto verb : {irf::Experiment::Cramer, irf::Experiment::Simulate, irf::Experiment::Tail,
                    irf::Experiment::Limit, irf::Experiment::Support, irf::Experiment::Check}) {
    auto* sub = app.add_subcommand(irf::experiment_name(verb), summary(verb));
    sub->add_option("--config", config_path, "experiment config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "master seed (overrides the config)");
    sub->add_option("--out", out, "output directory (overrides the config)");
    sub->add_option("--threads", threads, "worker threads; outputs do not depend on it")->check(CLI::PositiveNumber);
  }
  CLI11_PARSE(app, argc, argv);

  const auto* chosen = app.get_subcommands().front();
  const irf::Experiment verb = *irf::parse_experiment(chosen->get_name());

  std::ifstream in(config_path);
  std::stringstream text;
  text << in.rdbuf();

  irf::RunConfig cfg;
  try {
    cfg = irf::parse_config(text.str());
  } catch (const irf::Error& e) {
    std::cerr << "error: " << config_path << ": " << e.what() << "\n";
    return static_cast<int>(e.code());
  }

  irf::RunOverrides overrides;
  if (chosen->count("--seed")) overrides.seed = seed;
  if (chosen->count("--out")) overrides.out = out;
  overrides.threads = threads;

  const irf::RunResult r = irf::run(cfg, verb, overrides, std::cerr);
  for (const auto& f : r.files) std::cout << f << "\n";
  if (r.exit_code != 0) std::cerr << "error: " << r.error << "\n";
  return r.exit_code;
}
