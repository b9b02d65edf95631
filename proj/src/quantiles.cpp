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

#include "rratio/quantiles.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <map>
#include <tuple>

#include "rratio/types.hpp"

namespace rratio {

double normal_upper_quantile(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ValidationError("alpha must lie in (0, 1)");
  }
  const boost::math::normal_distribution<double> dist;
  return boost::math::quantile(boost::math::complement(dist, alpha / 2.0));
}

double t_upper_quantile(double alpha, double df) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ValidationError("alpha must lie in (0, 1)");
  }
  if (!(df >= 1.0)) {
    throw ValidationError("t quantile needs df >= 1");
  }
  const boost::math::students_t_distribution<double> dist(df);
  return boost::math::quantile(boost::math::complement(dist, alpha / 2.0));
}

double df_adjustment(double alpha, double total_size, double clusters) {
  if (total_size == clusters) {
    return 1.0;
  }
  using Key = std::tuple<double, double, double>;
  thread_local std::map<Key, double> cache;
  const Key key{alpha, total_size, clusters};
  if (const auto it = cache.find(key); it != cache.end()) {
    return it->second;
  }
  const double ratio = t_upper_quantile(alpha, total_size - 1.0) / t_upper_quantile(alpha, clusters - 1.0);
  const double value = ratio * ratio;
  cache.emplace(key, value);
  return value;
}

}  // namespace rratio
