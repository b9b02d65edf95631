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

#include "rratio/ci_methods.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rratio/quantiles.hpp"

namespace rratio {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Radicands and discriminants this close to zero (relative to the leading square) are zero.
constexpr double kRadicandSlack = 1e-13;

IntervalResult make_interval(Method m, double lower, double upper, double estimate) {
  IntervalResult r;
  r.method = m;
  r.limits = Interval{lower, upper};
  r.estimate = estimate;
  return r;
}

// Clamps a slightly negative radicand to zero; returns false when it is genuinely negative.
bool settle_radicand(double& value, double scale) noexcept {
  if (value >= 0.0) {
    return true;
  }
  if (value >= -kRadicandSlack * scale) {
    value = 0.0;
    return true;
  }
  return false;
}

bool is_degenerate(const EffectiveSize& es) noexcept { return !(es.y_eff < es.n_eff) || !(es.n_eff > 0.0); }

}  // namespace

MethodParams MethodParams::for_alpha(double alpha) {
  MethodParams p;
  p.alpha = alpha;
  p.z = normal_upper_quantile(alpha);
  p.chi2 = p.z * p.z;
  return p;
}

ProportionInterval wilson_interval(double successes, double size, double xi, double z) noexcept {
  const double z2 = z * z;
  const double gamma = successes / size;
  const double n_tilde = size + xi * z2;
  const double centre = (successes + 0.5 * xi * z2) / n_tilde;
  const double half = z / n_tilde * std::sqrt(size * gamma * (1.0 - gamma) * xi + xi * xi * z2 / 4.0);
  ProportionInterval ci{centre - half, centre + half};
  if (successes == 0.0) {
    ci.lower = 0.0;
  }
  if (successes == size) {
    ci.upper = 1.0;
  }
  ci.lower = std::clamp(ci.lower, 0.0, 1.0);
  ci.upper = std::clamp(ci.upper, 0.0, 1.0);
  return ci;
}

ProportionInterval wilson_single(const GroupData& g, const GroupSummary& summary,
                                 const MethodParams& params) noexcept {
  return wilson_interval(g.total_successes(), g.total_size(), summary.xi_hat, params.z);
}

ProportionInterval wilson_single(const GroupData& g, double alpha) {
  return wilson_single(g, summarize(g), MethodParams::for_alpha(alpha));
}

IntervalResult mover_ratio(ProportionInterval ci1, ProportionInterval ci2, double gamma1, double gamma2,
                           Method method, MoverRestrictions restrictions) noexcept {
  const double estimate = gamma2 > 0.0 ? gamma1 / gamma2 : kNaN;
  const double l1 = ci1.lower;
  const double u1 = ci1.upper;
  const double l2 = ci2.lower;
  const double u2 = ci2.upper;

  const double lower_denom = u2 * (2.0 * gamma2 - u2);
  if (restrictions == MoverRestrictions::kAsPrinted && !(lower_denom > 0.0)) {
    return IntervalResult::nonexistent(method, Failure::kUpperDenominatorNonpositive, estimate);
  }
  const double upper_denom = l2 * (2.0 * gamma2 - l2);
  if (!(upper_denom > 0.0)) {
    return IntervalResult::nonexistent(method, Failure::kLowerDenominatorNonpositive, estimate);
  }
  const double b = gamma1 * gamma2;
  const double b2 = b * b;
  const double lower_c = l1 * (2.0 * gamma1 - l1);
  double lower_rad = b2 - u2 * (2.0 * gamma1 - l1) * l1 * (2.0 * gamma2 - u2);
  if (!settle_radicand(lower_rad, b2)) {
    return IntervalResult::nonexistent(method, Failure::kLowerRadicandNegative, estimate);
  }
  double upper_rad = b2 - u1 * (2.0 * gamma1 - u1) * l2 * (2.0 * gamma2 - l2);
  if (!settle_radicand(upper_rad, b2)) {
    return IntervalResult::nonexistent(method, Failure::kUpperRadicandNegative, estimate);
  }
  // Conjugate form of (b - sqrt(rad)) / lower_denom: no cancellation, and it stays valid when
  // u2 >= 2 gamma2, where the quadratic still has exactly one root in [0, gamma1 / gamma2].
  const double lower_den = b + std::sqrt(lower_rad);
  const double lower = lower_den > 0.0 ? lower_c / lower_den : 0.0;
  const double upper = (b + std::sqrt(upper_rad)) / upper_denom;
  return make_interval(method, std::max(lower, 0.0), upper, estimate);
}

Method method_for(Method family, SizeKind kind) noexcept {
  return static_cast<Method>(index_of(family) + static_cast<std::size_t>(kind));
}

IntervalResult katz_modified(const EffectiveSize& es1, const EffectiveSize& es2,
                             const MethodParams& params) noexcept {
  const Method m = method_for(Method::kMK1, es1.kind);
  if (is_degenerate(es1) || is_degenerate(es2)) {
    return IntervalResult::nonexistent(m, Failure::kDegenerateGroup, kNaN);
  }
  const double y1 = es1.y_eff + 0.5;
  const double n1 = es1.n_eff + 0.5;
  const double y2 = es2.y_eff + 0.5;
  const double n2 = es2.n_eff + 0.5;
  const double estimate = (y1 * n2) / (y2 * n1);
  const double var = params.formulas == FormulaVariant::kTextbook
                         ? (1.0 / y1 - 1.0 / n1) + (1.0 / y2 - 1.0 / n2)
                         : 1.0 / y1 + 1.0 / y2 + 1.0 / n1 + 1.0 / n2;
  const double half = params.z * std::sqrt(var);
  const double centre = std::log(estimate);
  return make_interval(m, std::exp(centre - half), std::exp(centre + half), estimate);
}

IntervalResult inverse_sinh(const EffectiveSize& es1, const EffectiveSize& es2,
                            const MethodParams& params) noexcept {
  const Method m = method_for(Method::kIH1, es1.kind);
  if (is_degenerate(es1) || is_degenerate(es2) || !(es1.y_eff > 0.0) || !(es2.y_eff > 0.0)) {
    return IntervalResult::nonexistent(m, Failure::kDegenerateGroup, kNaN);
  }
  const double estimate = (es1.y_eff / es1.n_eff) / (es2.y_eff / es2.n_eff);
  const double var = params.formulas == FormulaVariant::kTextbook
                         ? (1.0 / es1.y_eff - 1.0 / es1.n_eff) + (1.0 / es2.y_eff - 1.0 / es2.n_eff)
                         : 1.0 / es1.y_eff + 1.0 / es2.y_eff + 1.0 / es1.n_eff + 1.0 / es2.n_eff;
  const double half = 2.0 * std::asinh(params.z / 2.0 * std::sqrt(var));
  const double centre = std::log(estimate);
  return make_interval(m, std::exp(centre - half), std::exp(centre + half), estimate);
}

double koopman_constrained_gamma1(double eta, double y1, double n1, double y2, double n2) noexcept {
  const double total = n1 + n2;
  const double s = eta * (n1 + y2) + y1 + n2;
  const double disc = std::max(s * s - 4.0 * eta * total * (y1 + y2), 0.0);
  // (s - sqrt(disc)) / (2N) rewritten to avoid cancellation.
  return 2.0 * eta * (y1 + y2) / (s + std::sqrt(disc));
}

double koopman_psi(double eta, double y1, double n1, double y2, double n2, FormulaVariant variant) noexcept {
  const double lambda = koopman_constrained_gamma1(eta, y1, n1, y2, n2);
  const double resid = y1 - n1 * lambda;
  const double lead = variant == FormulaVariant::kTextbook ? n1 : y1;
  return resid * resid / (n1 * lambda * (1.0 - lambda)) *
         (1.0 + lead * (eta - lambda) / (n2 * (1.0 - lambda)));
}

namespace {

struct RootSearch {
  double root = 0.0;
  bool ok = false;
  bool expanded = false;
};

// Bisection on f(x) = psi(x) - chi2 over [lo, hi] where f(lo) and f(hi) differ in sign.
template <typename F>
double bisect(F&& f, double lo, double hi, double tol, double target) {
  double f_lo = f(lo);
  double mid = 0.5 * (lo + hi);
  for (int iter = 0; iter < 400; ++iter) {
    mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) {
      break;
    }
    const double f_mid = f(mid);
    if ((hi - lo) <= tol * mid && std::abs(f_mid) <= tol * target) {
      break;
    }
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return mid;
}

}  // namespace

IntervalResult koopman_score(const EffectiveSize& es1, const EffectiveSize& es2,
                             const MethodParams& params) noexcept {
  const Method m = method_for(Method::kKA1, es1.kind);
  const double y1 = es1.y_eff;
  const double n1 = es1.n_eff;
  const double y2 = es2.y_eff;
  const double n2 = es2.n_eff;
  if (!(n1 > 0.0) || !(n2 > 0.0) || !(y1 >= 0.0) || !(y2 >= 0.0) || y1 > n1 || y2 > n2) {
    return IntervalResult::nonexistent(m, Failure::kDegenerateGroup, kNaN);
  }
  const bool flat1 = y1 == 0.0 || y1 == n1;
  const bool flat2 = y2 == 0.0 || y2 == n2;
  // An empty control makes the ratio unbounded; a saturated group leaves the constrained
  // estimate on the boundary where psi is singular.
  if ((flat1 && flat2) || y2 == 0.0 || y1 == n1 || y2 == n2) {
    return IntervalResult::nonexistent(m, Failure::kDegenerateGroup, kNaN);
  }
  const double estimate = (y1 / n1) / (y2 / n2);
  const double target = params.chi2;
  const auto f = [&](double eta) { return koopman_psi(eta, y1, n1, y2, n2, params.formulas) - target; };
  const double growth = params.bracket_growth;
  IntervalResult r = make_interval(m, 0.0, 0.0, estimate);

  double lower = 0.0;
  if (y1 > 0.0) {
    double hi = estimate;
    double lo = estimate / growth;
    int steps = 0;
    for (double v = f(lo); !(v >= 0.0); v = f(lo)) {
      if (std::isnan(v) || ++steps > params.max_bracket_steps) {
        return IntervalResult::nonexistent(m, Failure::kRootNotBracketed, estimate);
      }
      hi = lo;
      lo /= growth;
    }
    if (steps > 0) {
      r.flags.set(Flag::kRootBracketExpanded);
    }
    lower = bisect(f, lo, hi, params.root_tolerance, target);
  }

  double lo = estimate;
  double hi = estimate * growth;
  if (y1 == 0.0) {
    // psi vanishes at eta = 0; start from a scale set by half a success in group 1.
    lo = 0.0;
    hi = (0.5 / n1) / (y2 / n2);
  }
  int steps = 0;
  for (double v = f(hi); !(v >= 0.0); v = f(hi)) {
    if (std::isnan(v) || ++steps > params.max_bracket_steps) {
      return IntervalResult::nonexistent(m, Failure::kRootNotBracketed, estimate);
    }
    lo = hi;
    hi *= growth;
  }
  if (steps > 0) {
    r.flags.set(Flag::kRootBracketExpanded);
  }
  const double upper = bisect(f, lo, hi, params.root_tolerance, target);
  r.limits = Interval{lower, upper};
  return r;
}

IntervalResult delta_katz(const EffectiveSize& es1, const EffectiveSize& es2,
                          const MethodParams& params) noexcept {
  const Method m = method_for(Method::kDK1, es1.kind);
  const double g1 = es1.gamma_used;
  const double g2 = es2.gamma_used;
  if (!(g1 > 0.0 && g1 < 1.0) || !(g2 > 0.0 && g2 < 1.0)) {
    return IntervalResult::nonexistent(m, Failure::kBoundaryProportion, kNaN);
  }
  if (!(es1.n_eff > 0.0) || !(es2.n_eff > 0.0)) {
    return IntervalResult::nonexistent(m, Failure::kDegenerateGroup, kNaN);
  }
  const double estimate = g1 / g2;
  const double var = (1.0 - g1) / (es1.n_eff * g1) + (1.0 - g2) / (es2.n_eff * g2);
  const double spread = std::exp(params.z * std::sqrt(var));
  return make_interval(m, estimate / spread, estimate * spread, estimate);
}

IntervalResult fieller_bailey(const EffectiveSize& es1, const EffectiveSize& es2,
                              const MethodParams& params) noexcept {
  const Method m = method_for(Method::kFB1, es1.kind);
  const double g1 = es1.gamma_used;
  const double g2 = es2.gamma_used;
  if (!(g1 > 0.0 && g1 < 1.0) || !(g2 > 0.0 && g2 < 1.0)) {
    return IntervalResult::nonexistent(m, Failure::kBoundaryProportion, kNaN);
  }
  const double estimate = g1 / g2;
  const double z2 = params.z * params.z;
  const double a = std::cbrt(g2 * g2) - z2 * (1.0 - g2) / (9.0 * es2.n_eff * std::cbrt(g2));
  const double b = std::cbrt(g1 * g2);
  const double c = std::cbrt(g1 * g1) - z2 * (1.0 - g1) / (9.0 * es1.n_eff * std::cbrt(g1));
  if (!(a > 0.0)) {
    return IntervalResult::nonexistent(m, Failure::kANonpositive, estimate);
  }
  double disc = b * b - a * c;
  if (!settle_radicand(disc, b * b)) {
    return IntervalResult::nonexistent(m, Failure::kDiscriminantNegative, estimate);
  }
  const double root = std::sqrt(disc);
  const double lo = (b - root) / a;
  const double hi = (b + root) / a;
  IntervalResult r = make_interval(m, 0.0, hi * hi * hi, estimate);
  if (lo < 0.0) {
    r.flags.set(Flag::kLowerClampedAtZero);
  } else {
    r.limits->lower = lo * lo * lo;
  }
  return r;
}

IntervalResult fieller_quadratic(double a, double b, double c, Method method, double estimate) noexcept {
  if (!(a > 0.0)) {
    return IntervalResult::nonexistent(method, Failure::kANonpositive, estimate);
  }
  double disc = b * b - a * c;
  if (!settle_radicand(disc, b * b)) {
    return IntervalResult::nonexistent(method, Failure::kDiscriminantNegative, estimate);
  }
  const double root = std::sqrt(disc);
  const double lo = (b - root) / a;
  IntervalResult r = make_interval(method, std::max(lo, 0.0), (b + root) / a, estimate);
  if (lo < 0.0) {
    r.flags.set(Flag::kLowerClampedAtZero);
  }
  return r;
}

IntervalResult mr3(const GroupData& treatment, const GroupData& control, const MethodParams& params) noexcept {
  const double g1 = pooled_proportion(treatment);
  const double g2 = pooled_proportion(control);
  const double v1 = variance_ratio_estimator(treatment);
  const double v2 = variance_ratio_estimator(control);
  const double z2 = params.z * params.z;
  const double estimate = g2 > 0.0 ? g1 / g2 : kNaN;
  return fieller_quadratic(g2 * g2 - z2 * v2, g1 * g2, g1 * g1 - z2 * v1, Method::kMR3, estimate);
}

IntervalResult mr3(const TwoGroupStudy& study, const MethodParams& params) noexcept {
  return mr3(study.treatment, study.control, params);
}

IntervalSet compute_all(const GroupData& treatment, const GroupData& control, const MethodParams& params) {
  const GroupSummary s1 = summarize(treatment);
  const GroupSummary s2 = summarize(control);

  Flags icc_flags;
  for (const auto* s : {&s1, &s2}) {
    if (s->icc_truncated) {
      icc_flags.set(Flag::kIccTruncated);
    }
    if (s->icc_degenerate) {
      icc_flags.set(Flag::kIccDegenerate);
    }
  }

  IntervalSet out;
  auto put = [&out](IntervalResult r) { out[index_of(r.method)] = r; };

  IntervalResult hb1 = mover_ratio(wilson_single(treatment, s1, params), wilson_single(control, s2, params),
                                   s1.gamma_hat, s2.gamma_hat, Method::kHB1, params.mover_restrictions);
  hb1.flags |= icc_flags;
  put(hb1);

  for (const SizeKind kind : kSizeKinds) {
    EffectiveSizeOutcome e1 = effective_size(treatment, s1, kind, params.alpha);
    EffectiveSizeOutcome e2 = effective_size(control, s2, kind, params.alpha);
    if (!e1.ok() || !e2.ok()) {
      const Failure why = e1.ok() ? e2.failure : e1.failure;
      for (const Method family : {Method::kMK1, Method::kIH1, Method::kKA1, Method::kDK1, Method::kFB1}) {
        put(IntervalResult::nonexistent(method_for(family, kind), why, kNaN));
      }
      continue;
    }
    const EffectiveSize& es1 = *e1.value;
    const EffectiveSize& es2 = *e2.value;
    std::array<IntervalResult, 5> family_results{
        katz_modified(es1, es2, params), inverse_sinh(es1, es2, params), koopman_score(es1, es2, params),
        delta_katz(es1, es2, params), IntervalResult{}};
    if (params.fieller_gamma == FiellerGamma::kPooled) {
      EffectiveSize p1 = es1;
      EffectiveSize p2 = es2;
      p1.gamma_used = s1.gamma_hat;
      p1.y_eff = p1.gamma_used * p1.n_eff;
      p2.gamma_used = s2.gamma_hat;
      p2.y_eff = p2.gamma_used * p2.n_eff;
      family_results[4] = fieller_bailey(p1, p2, params);
    } else {
      family_results[4] = fieller_bailey(es1, es2, params);
    }
    for (IntervalResult& r : family_results) {
      if (kind == SizeKind::kOptimal) {
        r.flags |= icc_flags;
      }
      put(r);
    }
  }

  put(mr3(treatment, control, params));
  return out;
}

IntervalSet compute_all(const TwoGroupStudy& study, const MethodParams& params) {
  return compute_all(study.treatment, study.control, params);
}

}  // namespace rratio
