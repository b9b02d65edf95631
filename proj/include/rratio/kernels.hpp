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

#ifndef RRATIO_KERNELS_HPP
#define RRATIO_KERNELS_HPP

#include <span>
#include <string_view>

/**
 * \file
 * \brief Per-cluster reduction kernels.
 *
 * Every estimator reduces two columns, cluster sizes `n` and success counts `y`, to a handful
 * of sums. The scalar kernels are the reference; the AVX2 variants accumulate four lanes at a
 * time and agree with the reference to rounding. The variant is picked once per process from
 * CPUID, and can be forced with `RRATIO_ISA=scalar` or set_isa().
 *
 * Both spans must have the same length.
 */

namespace rratio::kernels {

struct BasicSums {
  double n = 0.0;            // sum n_j
  double y = 0.0;            // sum y_j
  double n_sq = 0.0;         // sum n_j^2
  double y_sq_over_n = 0.0;  // sum y_j^2 / n_j
  double prop = 0.0;         // sum y_j / n_j
};

struct WeightSums {
  double w = 0.0;       // sum w_j, w_j = n_j / (1 + (n_j - 1) theta)
  double w_prop = 0.0;  // sum w_j y_j / n_j
};

using BasicSumsFn = BasicSums (*)(std::span<const double> n, std::span<const double> y);
/// sum (y_j / n_j - center)^2
using PropSqDevFn = double (*)(std::span<const double> n, std::span<const double> y, double center);
/// sum (y_j - n_j gamma)^2
using ResidualSqFn = double (*)(std::span<const double> n, std::span<const double> y, double gamma);
using WeightSumsFn = WeightSums (*)(std::span<const double> n, std::span<const double> y, double theta);
/// sum w_j (y_j / n_j - center)^2
using WeightedPropSqDevFn = double (*)(std::span<const double> n, std::span<const double> y,
                                       double theta, double center);
/// sum n_j (1 + (n_j - 1) theta)
using InflationSumFn = double (*)(std::span<const double> n, double theta);

struct KernelTable {
  std::string_view name;
  BasicSumsFn basic_sums;
  PropSqDevFn prop_sq_dev;
  ResidualSqFn residual_sq;
  WeightSumsFn weight_sums;
  WeightedPropSqDevFn weighted_prop_sq_dev;
  InflationSumFn inflation_sum;
};

enum class Isa { kScalar, kAvx2 };

[[nodiscard]] const KernelTable& scalar_table() noexcept;
/// nullptr when the binary was built without AVX2 support.
[[nodiscard]] const KernelTable* avx2_table() noexcept;
[[nodiscard]] bool cpu_has_avx2() noexcept;

/// The table used by the free functions below.
[[nodiscard]] const KernelTable& active() noexcept;
/// Returns false (and leaves the selection alone) when the ISA is unavailable.
bool set_isa(Isa isa) noexcept;

inline BasicSums basic_sums(std::span<const double> n, std::span<const double> y) {
  return active().basic_sums(n, y);
}
inline double prop_sq_dev(std::span<const double> n, std::span<const double> y, double center) {
  return active().prop_sq_dev(n, y, center);
}
inline double residual_sq(std::span<const double> n, std::span<const double> y, double gamma) {
  return active().residual_sq(n, y, gamma);
}
inline WeightSums weight_sums(std::span<const double> n, std::span<const double> y, double theta) {
  return active().weight_sums(n, y, theta);
}
inline double weighted_prop_sq_dev(std::span<const double> n, std::span<const double> y,
                                   double theta, double center) {
  return active().weighted_prop_sq_dev(n, y, theta, center);
}
inline double inflation_sum(std::span<const double> n, double theta) {
  return active().inflation_sum(n, theta);
}

}  // namespace rratio::kernels

#endif  // RRATIO_KERNELS_HPP
