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

#ifndef RRATIO_CI_METHODS_HPP
#define RRATIO_CI_METHODS_HPP

#include "rratio/estimators.hpp"
#include "rratio/types.hpp"

/**
 * \file
 * \brief Confidence intervals for the risk ratio gamma_1 / gamma_2 of two clustered binary groups.
 *
 * Seventeen procedures:
 *  - HB1: MOVER combination of two ICC-adjusted Wilson intervals.
 *  - MKk, IHk, KAk, DKk, FBk (k = 1, 2, 3): modified Katz log, inverse hyperbolic sine, Koopman
 *    score, delta/Katz log and Fieller/Bailey cube-root intervals evaluated on the equal-weight
 *    (k = 1), optimal-weight (k = 2) and ratio-estimator (k = 3) effective sample sizes.
 *  - MR3: Fieller interval with ratio-estimator variances on the raw counts.
 *
 * A method whose defining restriction fails returns a nonexistent IntervalResult carrying the
 * reason; nothing here throws for statistical degeneracy.
 */

namespace rratio {

/// Which algebraic form of the Katz, sinh^-1 and Koopman statistics to evaluate.
enum class FormulaVariant {
  /// Katz/sinh^-1 variance 1/Y1 - 1/n1 + 1/Y2 - 1/n2; Koopman correction n1 (eta - L) / (n2 (1 - L)).
  kTextbook,
  /// All four reciprocals added; Koopman correction Y1 (eta - L) / (n2 (1 - L)).
  kAsPrinted,
};

/// Proportion estimate paired with the effective n inside FB1-FB3.
enum class FiellerGamma { kKindMatched, kPooled };

/// Which MOVER restrictions make the ratio interval nonexistent.
enum class MoverRestrictions {
  /// Only conditions under which a limit is undefined: l2 (2 g2 - l2) > 0 and both radicands >= 0.
  kRequired,
  /// Additionally u2 (2 g2 - u2) > 0.
  kAsPrinted,
};

struct MethodParams {
  double alpha = 0.05;
  /// Upper alpha/2 standard normal point.
  double z = 1.959963984540054;
  /// chi^2_{1, 1-alpha} == z^2.
  double chi2 = 1.959963984540054 * 1.959963984540054;
  /// Relative tolerance on the Koopman roots and on |Psi(root) - chi2| / chi2.
  double root_tolerance = 1e-10;
  double bracket_growth = 2.0;
  int max_bracket_steps = 60;
  FormulaVariant formulas = FormulaVariant::kTextbook;
  FiellerGamma fieller_gamma = FiellerGamma::kKindMatched;
  MoverRestrictions mover_restrictions = MoverRestrictions::kRequired;

  /// Parameters at nominal level 1 - alpha with every other field defaulted.
  [[nodiscard]] static MethodParams for_alpha(double alpha);
};

struct ProportionInterval {
  double lower = 0.0;
  double upper = 0.0;
};

/// Wilson score interval for a proportion with variance inflated by `xi`, clipped to [0, 1].
[[nodiscard]] ProportionInterval wilson_interval(double successes, double size, double xi, double z) noexcept;

/// Wilson interval for one group using its ANOVA ICC (truncated) inside xi.
[[nodiscard]] ProportionInterval wilson_single(const GroupData& g, const GroupSummary& summary,
                                               const MethodParams& params) noexcept;
[[nodiscard]] ProportionInterval wilson_single(const GroupData& g, double alpha);

/// MOVER limits for gamma1 / gamma2 from single-proportion intervals.
[[nodiscard]] IntervalResult mover_ratio(ProportionInterval ci1, ProportionInterval ci2, double gamma1,
                                         double gamma2, Method method = Method::kHB1,
                                         MoverRestrictions restrictions = MoverRestrictions::kRequired) noexcept;

[[nodiscard]] IntervalResult katz_modified(const EffectiveSize& es1, const EffectiveSize& es2,
                                           const MethodParams& params) noexcept;
[[nodiscard]] IntervalResult inverse_sinh(const EffectiveSize& es1, const EffectiveSize& es2,
                                          const MethodParams& params) noexcept;
[[nodiscard]] IntervalResult koopman_score(const EffectiveSize& es1, const EffectiveSize& es2,
                                           const MethodParams& params) noexcept;
[[nodiscard]] IntervalResult delta_katz(const EffectiveSize& es1, const EffectiveSize& es2,
                                        const MethodParams& params) noexcept;
[[nodiscard]] IntervalResult fieller_bailey(const EffectiveSize& es1, const EffectiveSize& es2,
                                            const MethodParams& params) noexcept;

/// Koopman's score statistic at eta on (possibly fractional) counts.
[[nodiscard]] double koopman_psi(double eta, double y1, double n1, double y2, double n2,
                                 FormulaVariant variant = FormulaVariant::kTextbook) noexcept;

/// Constrained estimate of gamma1 under gamma1 / gamma2 == eta used inside koopman_psi.
[[nodiscard]] double koopman_constrained_gamma1(double eta, double y1, double n1, double y2, double n2) noexcept;

/// Fieller quadratic [max((b - sqrt(b^2 - ac)) / a, 0), (b + sqrt(b^2 - ac)) / a].
[[nodiscard]] IntervalResult fieller_quadratic(double a, double b, double c, Method method,
                                               double estimate) noexcept;

[[nodiscard]] IntervalResult mr3(const GroupData& treatment, const GroupData& control,
                                 const MethodParams& params) noexcept;
[[nodiscard]] IntervalResult mr3(const TwoGroupStudy& study, const MethodParams& params) noexcept;

/// Method for a family (given by its first member, e.g. kMK1) and effective-size kind.
[[nodiscard]] Method method_for(Method family, SizeKind kind) noexcept;

/// All seventeen intervals in report order. Individual failures are recorded, never thrown.
[[nodiscard]] IntervalSet compute_all(const TwoGroupStudy& study, const MethodParams& params);
[[nodiscard]] IntervalSet compute_all(const GroupData& treatment, const GroupData& control,
                                      const MethodParams& params);

}  // namespace rratio

#endif  // RRATIO_CI_METHODS_HPP
