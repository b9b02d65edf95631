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

#include "rratio/estimators.hpp"

#include <algorithm>
#include <limits>

#include "rratio/kernels.hpp"
#include "rratio/quantiles.hpp"

namespace rratio {

double pooled_proportion(const GroupData& g) noexcept { return g.total_successes() / g.total_size(); }

IccEstimate anova_icc(const GroupData& g) noexcept {
  const auto s = kernels::basic_sums(g.sizes(), g.successes());
  const double m = static_cast<double>(g.cluster_count());
  const double within_df = s.n - m;

  IccEstimate est;
  est.bms = (s.y_sq_over_n - s.y * s.y / s.n) / (m - 1.0);
  est.n_star = (s.n * s.n - s.n_sq) / ((m - 1.0) * s.n);
  if (within_df <= 0.0) {
    est.degenerate = true;
    return est;
  }
  est.wms = (s.y - s.y_sq_over_n) / within_df;
  const double denom = est.bms + (est.n_star - 1.0) * est.wms;
  if (denom == 0.0) {
    est.degenerate = true;
    return est;
  }
  est.raw = (est.bms - est.wms) / denom;
  est.truncated = std::clamp(est.raw, 0.0, 1.0);
  return est;
}

double variance_inflation(const GroupData& g, double theta) noexcept {
  if (theta == 0.0) {
    return 1.0;
  }
  return kernels::inflation_sum(g.sizes(), theta) / g.total_size();
}

WeightedVariance variance_equal_weights(const GroupData& g) noexcept {
  const double m = static_cast<double>(g.cluster_count());
  const auto s = kernels::basic_sums(g.sizes(), g.successes());
  WeightedVariance out;
  out.gamma = s.prop / m;
  out.variance = kernels::prop_sq_dev(g.sizes(), g.successes(), out.gamma) / (m * (m - 1.0));
  return out;
}

WeightedVariance variance_optimal_weights(const GroupData& g, double theta) noexcept {
  const double m = static_cast<double>(g.cluster_count());
  const auto w = kernels::weight_sums(g.sizes(), g.successes(), theta);
  WeightedVariance out;
  out.gamma = w.w_prop / w.w;
  out.variance = kernels::weighted_prop_sq_dev(g.sizes(), g.successes(), theta, out.gamma) / w.w / (m - 1.0);
  return out;
}

double variance_ratio_estimator(const GroupData& g) noexcept {
  const double m = static_cast<double>(g.cluster_count());
  const double n = g.total_size();
  return m / (m - 1.0) * kernels::residual_sq(g.sizes(), g.successes(), pooled_proportion(g)) / (n * n);
}

GroupSummary summarize(const GroupData& g) noexcept {
  const IccEstimate icc = anova_icc(g);
  GroupSummary s;
  s.gamma_hat = pooled_proportion(g);
  s.icc_raw = icc.raw;
  s.icc_hat = icc.truncated;
  s.icc_degenerate = icc.degenerate;
  s.icc_truncated = !icc.degenerate && icc.raw != icc.truncated;
  s.xi_hat = variance_inflation(g, s.icc_hat);
  s.bms = icc.bms;
  s.wms = icc.wms;
  s.n_star = icc.n_star;
  return s;
}

EffectiveSizeOutcome effective_size(const GroupData& g, const GroupSummary& summary, SizeKind kind,
                                    double alpha) {
  WeightedVariance wv;
  switch (kind) {
    case SizeKind::kEqual:
      wv = variance_equal_weights(g);
      break;
    case SizeKind::kOptimal:
      wv = variance_optimal_weights(g, summary.icc_hat);
      break;
    case SizeKind::kRatio:
      wv = {variance_ratio_estimator(g), summary.gamma_hat};
      break;
  }

  EffectiveSizeOutcome out;
  if (!(wv.gamma > 0.0 && wv.gamma < 1.0)) {
    out.failure = Failure::kBoundaryProportion;
    return out;
  }
  const double binomial_var = wv.gamma * (1.0 - wv.gamma);
  // Variances at rounding-noise level relative to the binomial variance mean an unbounded size.
  if (wv.variance <= 64.0 * std::numeric_limits<double>::epsilon() * binomial_var) {
    out.failure = Failure::kZeroVariance;
    return out;
  }

  double n_eff = binomial_var / wv.variance;
  if (kind != SizeKind::kRatio) {
    n_eff *= df_adjustment(alpha, g.total_size(), static_cast<double>(g.cluster_count()));
  }
  out.value = EffectiveSize{kind, n_eff, wv.gamma * n_eff, wv.gamma, wv.variance};
  return out;
}

EffectiveSizeOutcome effective_size(const GroupData& g, SizeKind kind, double alpha) {
  return effective_size(g, summarize(g), kind, alpha);
}

}  // namespace rratio
