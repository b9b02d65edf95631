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

#ifndef RRATIO_ESTIMATORS_HPP
#define RRATIO_ESTIMATORS_HPP

#include <optional>

#include "rratio/types.hpp"

/**
 * \file
 * \brief Point estimates, ICC, variance inflation and the three design-based variance estimators
 * with their effective sample sizes.
 *
 * All functions are pure and permutation invariant over clusters (up to floating-point summation
 * order).
 */

namespace rratio {

/// Y_i. / n_i.
[[nodiscard]] double pooled_proportion(const GroupData& g) noexcept;

/// One-way ANOVA estimate of the intraclass correlation.
struct IccEstimate {
  double raw = 0.0;
  /// raw clamped to [0, 1]; 0 when degenerate.
  double truncated = 0.0;
  double bms = 0.0;
  double wms = 0.0;
  double n_star = 0.0;
  /// Within-cluster degrees of freedom are zero, or BMS + (n* - 1) WMS == 0.
  bool degenerate = false;
};

[[nodiscard]] IccEstimate anova_icc(const GroupData& g) noexcept;

/// sum_j n_ij [1 + (n_ij - 1) theta] / n_i.
[[nodiscard]] double variance_inflation(const GroupData& g, double theta) noexcept;

struct WeightedVariance {
  double variance = 0.0;
  /// The weighted mean of cluster proportions the variance is centred on.
  double gamma = 0.0;
};

/// Equal cluster weights: gamma^zeta and v^eq.
[[nodiscard]] WeightedVariance variance_equal_weights(const GroupData& g) noexcept;

/// Weights proportional to n_ij / [1 + (n_ij - 1) theta]: gamma^xi and v^op.
[[nodiscard]] WeightedVariance variance_optimal_weights(const GroupData& g, double theta) noexcept;

/// Ratio-estimator variance m/(m-1) * sum (Y_ij - n_ij gamma_hat)^2 / n_i.^2.
[[nodiscard]] double variance_ratio_estimator(const GroupData& g) noexcept;

[[nodiscard]] GroupSummary summarize(const GroupData& g) noexcept;

/// Effective size, or the reason it cannot be formed.
struct EffectiveSizeOutcome {
  std::optional<EffectiveSize> value;
  /// kZeroVariance or kBoundaryProportion when value is empty.
  Failure failure = Failure::kNone;

  [[nodiscard]] bool ok() const noexcept { return value.has_value(); }
};

/// Builds an effective sample size from its variance estimate.
/**
 * EQ and OP are multiplied by the squared ratio of the t quantiles on n_i. - 1 and m_i - 1
 * degrees of freedom; RE is not. The OP weights use the summary's truncated ICC.
 * The adjusted success count is gamma_used * n_eff and is left fractional.
 */
[[nodiscard]] EffectiveSizeOutcome effective_size(const GroupData& g, const GroupSummary& summary,
                                                  SizeKind kind, double alpha);
[[nodiscard]] EffectiveSizeOutcome effective_size(const GroupData& g, SizeKind kind, double alpha);

}  // namespace rratio

#endif  // RRATIO_ESTIMATORS_HPP
