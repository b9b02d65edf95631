// Copyright 2026 The rratio Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// rratio: risk-ratio confidence intervals for clustered binary data.
//
//   rratio ci STUDY.csv [--alpha A] [--format table|csv|json] [--out FILE]
//   rratio simulate CONFIG [--workers W] [--reps R] [--seed S] [--out FILE] [--medians FILE]
//   rratio appropriateness PARAMS [--reps R] [--seed S] [--format ...] [--out FILE]

#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "rratio/cli.hpp"
#include "rratio/kernels.hpp"

namespace {

const std::map<std::string, rratio::io::Format> kFormats{
    {"table", rratio::io::Format::kTable}, {"csv", rratio::io::Format::kCsv}, {"json", rratio::io::Format::kJson}};
const std::map<std::string, rratio::FormulaVariant> kVariants{
    {"textbook", rratio::FormulaVariant::kTextbook}, {"as-printed", rratio::FormulaVariant::kAsPrinted}};
const std::map<std::string, rratio::FiellerGamma> kFieller{
    {"matched", rratio::FiellerGamma::kKindMatched}, {"pooled", rratio::FiellerGamma::kPooled}};
const std::map<std::string, rratio::MoverRestrictions> kMover{
    {"required", rratio::MoverRestrictions::kRequired}, {"as-printed", rratio::MoverRestrictions::kAsPrinted}};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Confidence intervals for the risk ratio of two clustered binary groups"};
  app.require_subcommand(1);
  bool scalar = false;
  app.add_flag("--scalar", scalar, "Disable the AVX2 kernels");

  rratio::cli::CiArgs ci;
  auto* ci_cmd = app.add_subcommand("ci", "Compute all 17 intervals for a study CSV");
  ci_cmd->add_option("study", ci.study, "Study CSV (group,cluster,size,successes)")->required();
  ci_cmd->add_option("--alpha", ci.alpha, "Nominal level is 1 - alpha")->capture_default_str();
  ci_cmd->add_option("--format", ci.format, "table, csv or json")->transform(CLI::CheckedTransformer(kFormats).description(""))
      ->type_name("FORMAT");
  ci_cmd->add_option("--out", ci.out, "Write to FILE instead of stdout");
  ci_cmd->add_option("--formulas", ci.formulas, "textbook or as-printed")
      ->transform(CLI::CheckedTransformer(kVariants).description(""))
      ->type_name("VARIANT");
  ci_cmd->add_option("--fieller-gamma", ci.fieller_gamma, "matched or pooled")
      ->transform(CLI::CheckedTransformer(kFieller).description(""))
      ->type_name("KIND");
  ci_cmd->add_option("--mover-restrictions", ci.mover_restrictions, "required or as-printed")
      ->transform(CLI::CheckedTransformer(kMover).description(""))
      ->type_name("SET");

  rratio::cli::SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Run a simulation grid");
  sim_cmd->add_option("config", sim.config, "Grid config file")->required();
  sim_cmd->add_option("--workers", sim.workers, "Worker threads")->capture_default_str();
  sim_cmd->add_option("--reps", sim.replications, "Good replications per cell");
  sim_cmd->add_option("--seed", sim.seed, "Master seed");
  sim_cmd->add_option("--alpha", sim.alpha, "Nominal level is 1 - alpha");
  sim_cmd->add_option("--format", sim.format, "csv, json or table")->transform(CLI::CheckedTransformer(kFormats).description(""))
      ->type_name("FORMAT");
  sim_cmd->add_option("--out", sim.out, "Metrics output file");
  sim_cmd->add_option("--medians", sim.medians_out, "Medians summary file");
  sim_cmd->add_option("--formulas", sim.formulas, "textbook or as-printed")
      ->transform(CLI::CheckedTransformer(kVariants).description(""))
      ->type_name("VARIANT");

  rratio::cli::AppropriatenessArgs fit;
  auto* fit_cmd = app.add_subcommand("appropriateness", "Check each method against fitted study parameters");
  fit_cmd->add_option("params", fit.params, "Parameter file")->required();
  fit_cmd->add_option("--reps", fit.replications, "Good replications");
  fit_cmd->add_option("--seed", fit.seed, "Master seed");
  fit_cmd->add_option("--alpha", fit.alpha, "Nominal level is 1 - alpha");
  fit_cmd->add_option("--format", fit.format, "table, csv or json")->transform(CLI::CheckedTransformer(kFormats).description(""))
      ->type_name("FORMAT");
  fit_cmd->add_option("--out", fit.out, "Write to FILE instead of stdout");
  fit_cmd->add_option("--formulas", fit.formulas, "textbook or as-printed")
      ->transform(CLI::CheckedTransformer(kVariants).description(""))
      ->type_name("VARIANT");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : rratio::cli::kExitInput;
  }

  if (scalar) {
    rratio::kernels::set_isa(rratio::kernels::Isa::kScalar);
  }
  if (ci_cmd->parsed()) {
    return rratio::cli::run_ci(ci, std::cout, std::cerr);
  }
  if (sim_cmd->parsed()) {
    return rratio::cli::run_simulate(sim, std::cout, std::cerr);
  }
  return rratio::cli::run_appropriateness(fit, std::cout, std::cerr);
}
