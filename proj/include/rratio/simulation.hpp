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

#ifndef RRATIO_SIMULATION_HPP
#define RRATIO_SIMULATION_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "rratio/ci_methods.hpp"
#include "rratio/types.hpp"

/**
 * \file
 * \brief Beta-binomial data generation and the Monte-Carlo coverage protocol.
 *
 * Randomness is keyed: every generated study draws from its own engine seeded by
 * (cell seed, attempt index), so results never depend on worker count or scheduling.
 */

namespace rratio {

using Rng = std::mt19937_64;

/// SplitMix64 finaliser; a bijective 64-bit mixer.
[[nodiscard]] std::uint64_t mix64(std::uint64_t x) noexcept;

/// Combines a seed with further key words into a new seed.
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> key) noexcept;

/// The engine for one replication attempt of a cell.
[[nodiscard]] Rng replication_rng(std::uint64_t cell_seed, std::uint64_t attempt) noexcept;

/// Draws one cluster count: Binomial(size, p) with p ~ Beta(gamma(1-theta)/theta, (1-gamma)(1-theta)/theta),
/// or Binomial(size, gamma) when theta == 0.
[[nodiscard]] int beta_binomial_draw(int size, double gamma, double theta, Rng& rng);

/// A group of clusters with the given sizes. Requires gamma in (0, 1), theta in [0, 1).
[[nodiscard]] GroupData beta_binomial_group(std::span<const int> sizes, double gamma, double theta, Rng& rng);
[[nodiscard]] GroupData beta_binomial_group(int clusters, int size, double gamma, double theta, Rng& rng);

/// Generating model for one arm.
struct GroupDesign {
  std::vector<int> sizes;
  double gamma = 0.2;
  double theta = 0.0;
};

struct StudyDesign {
  GroupDesign treatment;
  GroupDesign control;
  /// True risk ratio, treatment.gamma / control.gamma.
  double eta = 1.0;
};

struct RunOptions {
  int replications = 2000;
  std::uint64_t seed = 0;
  double alpha = 0.05;
  /// Stop with `stalled` once rejected samples exceed stall_cap * replications.
  double stall_cap = 100.0;
  /// Count nonexistence against the failing method only, instead of discarding the study.
  bool per_method_accounting = false;
  FormulaVariant formulas = FormulaVariant::kTextbook;
  FiellerGamma fieller_gamma = FiellerGamma::kKindMatched;
  MoverRestrictions mover_restrictions = MoverRestrictions::kRequired;
};

/// How one method fared in one replication.
enum class Side : std::uint8_t { kCovered, kDistal, kMesial };

[[nodiscard]] Side classify(const Interval& interval, double eta) noexcept;

/// Generates studies until `replications` good ones are collected (all 17 intervals exist) and
/// accumulates CP, EW, DISNCP, MESNCP and DNPTNP over the good ones.
[[nodiscard]] ScenarioMetrics run_design(const StudyDesign& design, const RunOptions& options);

/// The fixed-size grid cell variant of run_design. Throws ValidationError on an invalid spec.
[[nodiscard]] ScenarioMetrics run_scenario(const ScenarioSpec& spec, const RunOptions& base = {});

struct MethodMedians {
  std::optional<double> cp;
  std::optional<double> ew;
  std::optional<double> dnptnp;
};

struct GridResult {
  std::vector<ScenarioSpec> specs;
  std::vector<ScenarioMetrics> cells;
  std::array<MethodMedians, kMethodCount> medians{};
};

/// Runs every cell with its own spec.seed on `workers` threads. Output order matches input order.
[[nodiscard]] GridResult run_grid(std::span<const ScenarioSpec> specs, int workers, const RunOptions& base = {});

/// Per-method medians of CP, EW and DNPTNP over cells; missing DNPTNP values are skipped.
[[nodiscard]] std::array<MethodMedians, kMethodCount> grid_medians(std::span<const ScenarioMetrics> cells);

/// Median of a sample (mean of the middle pair for even sizes); empty for an empty sample.
[[nodiscard]] std::optional<double> median(std::vector<double> values);

/// Sizes for `clusters` clusters whose mean matches `mean_size`: round(clusters * mean) individuals
/// split into ceil and floor sizes, larger clusters first.
[[nodiscard]] std::vector<int> mixed_cluster_sizes(int clusters, double mean_size);

/// Fitted parameters of a real study, used to check whether each method suits it.
struct AppropriatenessParams {
  double gamma_treatment = 0.0;
  double eta = 1.0;
  double icc_treatment = 0.0;
  double icc_control = 0.0;
  int clusters_treatment = 0;
  int clusters_control = 0;
  double mean_size_treatment = 0.0;
  double mean_size_control = 0.0;
  double alpha = 0.05;

  [[nodiscard]] StudyDesign design() const;
};

inline constexpr double kCpLow = 0.94;
inline constexpr double kCpHigh = 0.96;
inline constexpr double kDnptnpLow = 0.375;
inline constexpr double kDnptnpHigh = 0.625;

struct Qualification {
  Method method = Method::kHB1;
  double cp = 0.0;
  double ew = 0.0;
  std::optional<double> dnptnp;
  bool cp_ok = false;
  /// A missing DNPTNP (no noncoverage at all) is not flagged.
  bool dnptnp_ok = false;
};

struct AppropriatenessReport {
  ScenarioMetrics metrics;
  std::array<Qualification, kMethodCount> methods{};
};

[[nodiscard]] AppropriatenessReport appropriateness_check(const AppropriatenessParams& params,
                                                          const RunOptions& options);

}  // namespace rratio

#endif  // RRATIO_SIMULATION_HPP
