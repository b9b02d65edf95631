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


#ifndef RRATIO_CLI_HPP
#define RRATIO_CLI_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>

#include "rratio/ci_methods.hpp"
#include "rratio/io.hpp"

/**
 * \file
 * \brief The three command-line actions, callable in-process.
 *
 * Exit codes: 0 on success (including methods whose interval does not exist), 2 on input
 * errors (parse, validation, config), 1 on anything else.
 */

namespace rratio::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInput = 2;

struct CiArgs {
  std::filesystem::path study;
  double alpha = 0.05;
  io::Format format = io::Format::kTable;
  std::optional<std::filesystem::path> out;
  FormulaVariant formulas = FormulaVariant::kTextbook;
  FiellerGamma fieller_gamma = FiellerGamma::kKindMatched;
  MoverRestrictions mover_restrictions = MoverRestrictions::kRequired;
};

struct SimulateArgs {
  std::filesystem::path config;
  int workers = 1;
  /// Overrides of the config values.
  std::optional<int> replications;
  std::optional<std::uint64_t> seed;
  std::optional<double> alpha;
  std::optional<FormulaVariant> formulas;
  io::Format format = io::Format::kCsv;
  /// Metrics rows go here (stdout when empty); the medians summary goes to stdout, or to
  /// `medians_out` when given.
  std::optional<std::filesystem::path> out;
  std::optional<std::filesystem::path> medians_out;
};

struct AppropriatenessArgs {
  std::filesystem::path params;
  std::optional<int> replications;
  std::optional<std::uint64_t> seed;
  std::optional<double> alpha;
  std::optional<FormulaVariant> formulas;
  io::Format format = io::Format::kTable;
  std::optional<std::filesystem::path> out;
};

int run_ci(const CiArgs& args, std::ostream& out, std::ostream& err);
int run_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err);
int run_appropriateness(const AppropriatenessArgs& args, std::ostream& out, std::ostream& err);

}  // namespace rratio::cli

#endif  // RRATIO_CLI_HPP
