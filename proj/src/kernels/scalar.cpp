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

#include "rratio/kernels.hpp"

#include <cstddef>

namespace rratio::kernels {
namespace {

BasicSums basic_sums_scalar(std::span<const double> n, std::span<const double> y) {
  BasicSums s;
  for (std::size_t j = 0; j < n.size(); ++j) {
    const double p = y[j] / n[j];
    s.n += n[j];
    s.y += y[j];
    s.n_sq += n[j] * n[j];
    s.y_sq_over_n += y[j] * p;
    s.prop += p;
  }
  return s;
}

double prop_sq_dev_scalar(std::span<const double> n, std::span<const double> y, double center) {
  double acc = 0.0;
  for (std::size_t j = 0; j < n.size(); ++j) {
    const double d = y[j] / n[j] - center;
    acc += d * d;
  }
  return acc;
}

double residual_sq_scalar(std::span<const double> n, std::span<const double> y, double gamma) {
  double acc = 0.0;
  for (std::size_t j = 0; j < n.size(); ++j) {
    const double r = y[j] - n[j] * gamma;
    acc += r * r;
  }
  return acc;
}

WeightSums weight_sums_scalar(std::span<const double> n, std::span<const double> y, double theta) {
  WeightSums s;
  for (std::size_t j = 0; j < n.size(); ++j) {
    const double w = n[j] / (1.0 + (n[j] - 1.0) * theta);
    s.w += w;
    s.w_prop += w * (y[j] / n[j]);
  }
  return s;
}

double weighted_prop_sq_dev_scalar(std::span<const double> n, std::span<const double> y,
                                   double theta, double center) {
  double acc = 0.0;
  for (std::size_t j = 0; j < n.size(); ++j) {
    const double w = n[j] / (1.0 + (n[j] - 1.0) * theta);
    const double d = y[j] / n[j] - center;
    acc += w * d * d;
  }
  return acc;
}

double inflation_sum_scalar(std::span<const double> n, double theta) {
  double acc = 0.0;
  for (const double nj : n) {
    acc += nj * (1.0 + (nj - 1.0) * theta);
  }
  return acc;
}

}  // namespace

const KernelTable& scalar_table() noexcept {
  static constexpr KernelTable table{
      "scalar",
      &basic_sums_scalar,
      &prop_sq_dev_scalar,
      &residual_sq_scalar,
      &weight_sums_scalar,
      &weighted_prop_sq_dev_scalar,
      &inflation_sum_scalar,
  };
  return table;
}

}  // namespace rratio::kernels
