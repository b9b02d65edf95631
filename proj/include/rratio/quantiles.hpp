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

#ifndef RRATIO_QUANTILES_HPP
#define RRATIO_QUANTILES_HPP

namespace rratio {

/// Upper alpha/2 point of the standard normal, z_{alpha/2}.
[[nodiscard]] double normal_upper_quantile(double alpha);

/// Upper alpha/2 point of Student's t with `df` degrees of freedom. Requires df >= 1.
[[nodiscard]] double t_upper_quantile(double alpha, double df);

/// (t_{alpha/2, total - 1} / t_{alpha/2, clusters - 1})^2, the degrees-of-freedom correction
/// applied to design-based effective sample sizes. Memoised per thread.
[[nodiscard]] double df_adjustment(double alpha, double total_size, double clusters);

}  // namespace rratio

#endif  // RRATIO_QUANTILES_HPP
