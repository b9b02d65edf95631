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

#ifndef RRATIO_IO_HPP
#define RRATIO_IO_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rratio/ci_methods.hpp"
#include "rratio/simulation.hpp"
#include "rratio/types.hpp"

/**
 * \file
 * \brief Study CSV, grid and parameter configs, and result rendering.
 *
 * Study CSV: header `group,cluster,size,successes`; group is `treatment` or `control`; cluster
 * is a free-form identifier unique within its group. Clusters keep file order.
 *
 * Config files are `key = value` lines; `#` starts a comment; unknown or repeated keys are
 * errors. List values are comma separated and theta pairs are written `t1:t2`.
 */

namespace rratio::io {

[[nodiscard]] TwoGroupStudy read_study_csv(std::istream& in);
[[nodiscard]] TwoGroupStudy read_study_file(const std::filesystem::path& path);
/// Cluster identifiers are written as 1-based positions.
void write_study_csv(std::ostream& out, const TwoGroupStudy& study);

/// Axes of a simulation grid; the cells are their cross product.
struct GridConfig {
  std::vector<int> clusters{20, 30, 50};
  std::vector<int> cluster_sizes{5, 50, 100};
  double gamma1 = 0.2;
  std::vector<double> etas{1.0, 1.25, 1.5, 2.0};
  std::vector<std::pair<double, double>> theta_pairs{{0.1, 0.1}, {0.1, 0.25}, {0.2, 0.2}, {0.2, 0.25}};
  double alpha = 0.05;
  int replications = 2000;
  std::uint64_t seed = 20240601;
  double stall_cap = 100.0;
  bool per_method_accounting = false;
  FormulaVariant formulas = FormulaVariant::kTextbook;
  FiellerGamma fieller_gamma = FiellerGamma::kKindMatched;
  MoverRestrictions mover_restrictions = MoverRestrictions::kRequired;

  [[nodiscard]] std::size_t cell_count() const noexcept {
    return clusters.size() * cluster_sizes.size() * etas.size() * theta_pairs.size();
  }
  [[nodiscard]] RunOptions run_options() const;
};

/// Throws ParseError for malformed lines and ConfigError for unknown keys or bad values.
[[nodiscard]] GridConfig parse_grid_config(std::istream& in);
[[nodiscard]] GridConfig read_grid_config(const std::filesystem::path& path);

/// Cells in (clusters, size, eta, theta pair) nesting order. Each cell's seed is derived from
/// the master seed and its axis values.
[[nodiscard]] std::vector<ScenarioSpec> expand_grid(const GridConfig& config);

struct ParamsConfig {
  AppropriatenessParams params;
  int replications = 2000;
  std::uint64_t seed = 20240601;
  double stall_cap = 100.0;
  FormulaVariant formulas = FormulaVariant::kTextbook;
  FiellerGamma fieller_gamma = FiellerGamma::kKindMatched;
  MoverRestrictions mover_restrictions = MoverRestrictions::kRequired;

  [[nodiscard]] RunOptions run_options() const;
};

[[nodiscard]] ParamsConfig parse_params(std::istream& in);
[[nodiscard]] ParamsConfig read_params(const std::filesystem::path& path);

enum class Format { kTable, kCsv, kJson };

[[nodiscard]] std::optional<Format> parse_format(std::string_view name) noexcept;

/// Full-precision decimal (round-trips a double); "NA" for NaN.
[[nodiscard]] std::string format_exact(double value);
/// Six significant digits.
[[nodiscard]] std::string format_short(double value);

/// One row per method: method, lower, upper, width, estimate, status, flags.
void write_intervals(std::ostream& out, const IntervalSet& results, Format format);

struct IntervalRow {
  std::string method;
  std::optional<double> lower;
  std::optional<double> upper;
  std::string status;
  std::string flags;
};

/// Reads back the CSV written by write_intervals.
[[nodiscard]] std::vector<IntervalRow> read_intervals_csv(std::istream& in);

/// One row per (cell, method).
void write_metrics(std::ostream& out, const GridResult& grid, Format format);
void write_medians(std::ostream& out, const std::array<MethodMedians, kMethodCount>& medians, Format format);
void write_appropriateness(std::ostream& out, const AppropriatenessReport& report, Format format);

}  // namespace rratio::io

#endif  // RRATIO_IO_HPP
