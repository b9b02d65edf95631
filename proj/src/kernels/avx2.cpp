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

// Compiled with -mavx2 -mfma. Nothing here may run before the dispatcher has checked CPUID.

#include <immintrin.h>

#include <cstddef>

#include "rratio/kernels.hpp"

namespace rratio::kernels {
namespace {

constexpr std::size_t kLanes = 4;

// Lanes summed in a fixed order so results are reproducible run to run.
inline double reduce(__m256d v) {
  alignas(32) double lanes[kLanes];
  _mm256_store_pd(lanes, v);
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

BasicSums basic_sums_avx2(std::span<const double> n, std::span<const double> y) {
  __m256d sn = _mm256_setzero_pd();
  __m256d sy = _mm256_setzero_pd();
  __m256d snn = _mm256_setzero_pd();
  __m256d syy = _mm256_setzero_pd();
  __m256d sp = _mm256_setzero_pd();
  const std::size_t size = n.size();
  std::size_t j = 0;
  for (; j + kLanes <= size; j += kLanes) {
    const __m256d vn = _mm256_loadu_pd(n.data() + j);
    const __m256d vy = _mm256_loadu_pd(y.data() + j);
    const __m256d p = _mm256_div_pd(vy, vn);
    sn = _mm256_add_pd(sn, vn);
    sy = _mm256_add_pd(sy, vy);
    snn = _mm256_fmadd_pd(vn, vn, snn);
    syy = _mm256_fmadd_pd(vy, p, syy);
    sp = _mm256_add_pd(sp, p);
  }
  BasicSums s{reduce(sn), reduce(sy), reduce(snn), reduce(syy), reduce(sp)};
  for (; j < size; ++j) {
    const double p = y[j] / n[j];
    s.n += n[j];
    s.y += y[j];
    s.n_sq += n[j] * n[j];
    s.y_sq_over_n += y[j] * p;
    s.prop += p;
  }
  return s;
}

double prop_sq_dev_avx2(std::span<const double> n, std::span<const double> y, double center) {
  const __m256d c = _mm256_set1_pd(center);
  __m256d acc = _mm256_setzero_pd();
  const std::size_t size = n.size();
  std::size_t j = 0;
  for (; j + kLanes <= size; j += kLanes) {
    const __m256d d = _mm256_sub_pd(_mm256_div_pd(_mm256_loadu_pd(y.data() + j), _mm256_loadu_pd(n.data() + j)), c);
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double total = reduce(acc);
  for (; j < size; ++j) {
    const double d = y[j] / n[j] - center;
    total += d * d;
  }
  return total;
}

double residual_sq_avx2(std::span<const double> n, std::span<const double> y, double gamma) {
  const __m256d g = _mm256_set1_pd(gamma);
  __m256d acc = _mm256_setzero_pd();
  const std::size_t size = n.size();
  std::size_t j = 0;
  for (; j + kLanes <= size; j += kLanes) {
    const __m256d r = _mm256_fnmadd_pd(_mm256_loadu_pd(n.data() + j), g, _mm256_loadu_pd(y.data() + j));
    acc = _mm256_fmadd_pd(r, r, acc);
  }
  double total = reduce(acc);
  for (; j < size; ++j) {
    const double r = y[j] - n[j] * gamma;
    total += r * r;
  }
  return total;
}

inline __m256d weights(__m256d vn, __m256d theta, __m256d one) {
  // n / (1 + (n - 1) theta)
  return _mm256_div_pd(vn, _mm256_fmadd_pd(_mm256_sub_pd(vn, one), theta, one));
}

WeightSums weight_sums_avx2(std::span<const double> n, std::span<const double> y, double theta) {
  const __m256d t = _mm256_set1_pd(theta);
  const __m256d one = _mm256_set1_pd(1.0);
  __m256d sw = _mm256_setzero_pd();
  __m256d swp = _mm256_setzero_pd();
  const std::size_t size = n.size();
  std::size_t j = 0;
  for (; j + kLanes <= size; j += kLanes) {
    const __m256d vn = _mm256_loadu_pd(n.data() + j);
    const __m256d w = weights(vn, t, one);
    sw = _mm256_add_pd(sw, w);
    swp = _mm256_fmadd_pd(w, _mm256_div_pd(_mm256_loadu_pd(y.data() + j), vn), swp);
  }
  WeightSums s{reduce(sw), reduce(swp)};
  for (; j < size; ++j) {
    const double w = n[j] / (1.0 + (n[j] - 1.0) * theta);
    s.w += w;
    s.w_prop += w * (y[j] / n[j]);
  }
  return s;
}

double weighted_prop_sq_dev_avx2(std::span<const double> n, std::span<const double> y, double theta,
                                 double center) {
  const __m256d t = _mm256_set1_pd(theta);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d c = _mm256_set1_pd(center);
  __m256d acc = _mm256_setzero_pd();
  const std::size_t size = n.size();
  std::size_t j = 0;
  for (; j + kLanes <= size; j += kLanes) {
    const __m256d vn = _mm256_loadu_pd(n.data() + j);
    const __m256d w = weights(vn, t, one);
    const __m256d d = _mm256_sub_pd(_mm256_div_pd(_mm256_loadu_pd(y.data() + j), vn), c);
    acc = _mm256_fmadd_pd(_mm256_mul_pd(w, d), d, acc);
  }
  double total = reduce(acc);
  for (; j < size; ++j) {
    const double w = n[j] / (1.0 + (n[j] - 1.0) * theta);
    const double d = y[j] / n[j] - center;
    total += w * d * d;
  }
  return total;
}

double inflation_sum_avx2(std::span<const double> n, double theta) {
  const __m256d t = _mm256_set1_pd(theta);
  const __m256d one = _mm256_set1_pd(1.0);
  __m256d acc = _mm256_setzero_pd();
  const std::size_t size = n.size();
  std::size_t j = 0;
  for (; j + kLanes <= size; j += kLanes) {
    const __m256d vn = _mm256_loadu_pd(n.data() + j);
    acc = _mm256_fmadd_pd(vn, _mm256_fmadd_pd(_mm256_sub_pd(vn, one), t, one), acc);
  }
  double total = reduce(acc);
  for (; j < size; ++j) {
    total += n[j] * (1.0 + (n[j] - 1.0) * theta);
  }
  return total;
}

}  // namespace

const KernelTable* avx2_table() noexcept {
  static constexpr KernelTable table{
      "avx2",
      &basic_sums_avx2,
      &prop_sq_dev_avx2,
      &residual_sq_avx2,
      &weight_sums_avx2,
      &weighted_prop_sq_dev_avx2,
      &inflation_sum_avx2,
  };
  return &table;
}

}  // namespace rratio::kernels
