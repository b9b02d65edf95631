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

#include "rratio/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace rratio {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30U)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27U)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31U);
}

std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> key) noexcept {
  std::uint64_t h = mix64(seed);
  for (const std::uint64_t k : key) {
    h = mix64(h ^ mix64(k));
  }
  return h;
}

Rng replication_rng(std::uint64_t cell_seed, std::uint64_t attempt) noexcept {
  return Rng{derive_seed(cell_seed, {attempt})};
}

int beta_binomial_draw(int size, double gamma, double theta, Rng& rng) {
  double p = gamma;
  if (theta > 0.0) {
    const double scale = (1.0 - theta) / theta;
    std::gamma_distribution<double> ga(gamma * scale, 1.0);
    std::gamma_distribution<double> gb((1.0 - gamma) * scale, 1.0);
    const double x = ga(rng);
    const double y = gb(rng);
    p = (x + y) > 0.0 ? x / (x + y) : gamma;
  }
  std::binomial_distribution<int> bin(size, p);
  return bin(rng);
}

GroupData beta_binomial_group(std::span<const int> sizes, double gamma, double theta, Rng& rng) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw ValidationError("gamma must lie in (0, 1)");
  }
  if (!(theta >= 0.0 && theta < 1.0)) {
    throw ValidationError("theta must lie in [0, 1)");
  }
  std::vector<ClusterRecord> clusters;
  clusters.reserve(sizes.size());
  for (const int n : sizes) {
    clusters.push_back({n, beta_binomial_draw(n, gamma, theta, rng)});
  }
  return GroupData{clusters};
}

GroupData beta_binomial_group(int clusters, int size, double gamma, double theta, Rng& rng) {
  const std::vector<int> sizes(static_cast<std::size_t>(std::max(clusters, 0)), size);
  return beta_binomial_group(sizes, gamma, theta, rng);
}

Side classify(const Interval& interval, double eta) noexcept {
  if (eta > interval.upper) {
    return Side::kDistal;
  }
  if (eta < interval.lower) {
    return Side::kMesial;
  }
  return Side::kCovered;
}

namespace {

void accumulate(MethodMetrics& m, const Interval& interval, double eta) {
  ++m.evaluated;
  m.width_sum += interval.width();
  switch (classify(interval, eta)) {
    case Side::kCovered:
      ++m.covered;
      break;
    case Side::kDistal:
      ++m.distal;
      break;
    case Side::kMesial:
      ++m.mesial;
      break;
  }
}

void finalize(MethodMetrics& m) {
  if (m.evaluated == 0) {
    return;
  }
  const auto total = static_cast<double>(m.evaluated);
  m.cp = static_cast<double>(m.covered) / total;
  m.ew = m.width_sum / total;
  m.disncp = static_cast<double>(m.distal) / total;
  m.mesncp = static_cast<double>(m.mesial) / total;
  const std::int64_t missed = m.distal + m.mesial;
  if (missed > 0) {
    m.dnptnp = static_cast<double>(m.distal) / static_cast<double>(missed);
  } else {
    m.dnptnp.reset();
  }
}

}  // namespace

ScenarioMetrics run_design(const StudyDesign& design, const RunOptions& options) {
  if (options.replications < 1) {
    throw ValidationError("replications must be >= 1");
  }
  MethodParams params = MethodParams::for_alpha(options.alpha);
  params.formulas = options.formulas;
  params.fieller_gamma = options.fieller_gamma;
  params.mover_restrictions = options.mover_restrictions;

  ScenarioMetrics metrics;
  const auto target = static_cast<std::int64_t>(options.replications);
  const auto reject_cap = static_cast<double>(options.replications) * options.stall_cap;

  for (std::uint64_t attempt = 0;; ++attempt) {
    if (options.per_method_accounting) {
      if (static_cast<std::int64_t>(attempt) >= target) {
        break;
      }
    } else if (metrics.good_replications >= target) {
      break;
    }

    Rng rng = replication_rng(options.seed, attempt);
    const GroupData t = beta_binomial_group(design.treatment.sizes, design.treatment.gamma,
                                            design.treatment.theta, rng);
    const GroupData c = beta_binomial_group(design.control.sizes, design.control.gamma,
                                            design.control.theta, rng);
    const IntervalSet results = compute_all(t, c, params);
    const bool all_exist = std::all_of(results.begin(), results.end(),
                                       [](const IntervalResult& r) { return r.exists(); });

    if (options.per_method_accounting) {
      for (const IntervalResult& r : results) {
        MethodMetrics& m = metrics[r.method];
        if (r.exists()) {
          accumulate(m, *r.limits, design.eta);
        } else {
          ++m.nonexistent;
        }
      }
      if (all_exist) {
        ++metrics.good_replications;
      } else {
        ++metrics.rejected_samples;
      }
      continue;
    }

    if (!all_exist) {
      for (const IntervalResult& r : results) {
        if (!r.exists()) {
          ++metrics[r.method].nonexistent;
        }
      }
      ++metrics.rejected_samples;
      if (static_cast<double>(metrics.rejected_samples) > reject_cap) {
        metrics.stalled = true;
        break;
      }
      continue;
    }
    ++metrics.good_replications;
    for (const IntervalResult& r : results) {
      accumulate(metrics[r.method], *r.limits, design.eta);
    }
  }

  for (MethodMetrics& m : metrics.methods) {
    finalize(m);
  }
  return metrics;
}

ScenarioMetrics run_scenario(const ScenarioSpec& spec, const RunOptions& base) {
  spec.validate();
  StudyDesign design;
  const std::vector<int> sizes(static_cast<std::size_t>(spec.clusters_per_group), spec.cluster_size);
  design.treatment = GroupDesign{sizes, spec.gamma1, spec.theta1};
  design.control = GroupDesign{sizes, spec.gamma2(), spec.theta2};
  design.eta = spec.eta;
  RunOptions options = base;
  options.replications = spec.replications;
  options.seed = spec.seed;
  options.alpha = spec.alpha;
  return run_design(design, options);
}

std::optional<double> median(std::vector<double> values) {
  if (values.empty()) {
    return std::nullopt;
  }
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) {
    return values[mid];
  }
  return 0.5 * (values[mid - 1] + values[mid]);
}

std::array<MethodMedians, kMethodCount> grid_medians(std::span<const ScenarioMetrics> cells) {
  std::array<MethodMedians, kMethodCount> out{};
  for (std::size_t k = 0; k < kMethodCount; ++k) {
    std::vector<double> cp;
    std::vector<double> ew;
    std::vector<double> dn;
    for (const ScenarioMetrics& cell : cells) {
      const MethodMetrics& m = cell.methods[k];
      if (m.evaluated == 0) {
        continue;
      }
      cp.push_back(m.cp);
      ew.push_back(m.ew);
      if (m.dnptnp) {
        dn.push_back(*m.dnptnp);
      }
    }
    out[k] = MethodMedians{median(cp), median(ew), median(dn)};
  }
  return out;
}

GridResult run_grid(std::span<const ScenarioSpec> specs, int workers, const RunOptions& base) {
  for (const ScenarioSpec& spec : specs) {
    spec.validate();
  }
  GridResult result;
  result.specs.assign(specs.begin(), specs.end());
  result.cells.resize(specs.size());

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next.fetch_add(1); i < specs.size(); i = next.fetch_add(1)) {
      try {
        result.cells[i] = run_scenario(specs[i], base);
      } catch (...) {
        const std::lock_guard lock(failure_mutex);
        if (!failure) {
          failure = std::current_exception();
        }
      }
    }
  };

  const int threads = std::clamp(workers, 1, static_cast<int>(std::max<std::size_t>(specs.size(), 1)));
  if (threads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back(work);
    }
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
  result.medians = grid_medians(result.cells);
  return result;
}

std::vector<int> mixed_cluster_sizes(int clusters, double mean_size) {
  if (clusters < 1) {
    throw ValidationError("clusters must be >= 1");
  }
  if (!(mean_size >= 1.0)) {
    throw ValidationError("mean cluster size must be >= 1");
  }
  const auto total = static_cast<long long>(std::llround(mean_size * clusters));
  const long long base = total / clusters;
  const long long extra = total % clusters;
  std::vector<int> sizes(static_cast<std::size_t>(clusters), static_cast<int>(base));
  for (long long j = 0; j < extra; ++j) {
    sizes[static_cast<std::size_t>(j)] += 1;
  }
  return sizes;
}

StudyDesign AppropriatenessParams::design() const {
  if (!(gamma_treatment > 0.0 && gamma_treatment < 1.0)) {
    throw ValidationError("gamma_treatment must lie in (0, 1)");
  }
  if (!(eta > 0.0)) {
    throw ValidationError("eta must be positive");
  }
  const double gamma_control = gamma_treatment / eta;
  if (!(gamma_control > 0.0 && gamma_control < 1.0)) {
    throw ValidationError("gamma_treatment / eta must lie in (0, 1)");
  }
  if (!(icc_treatment >= 0.0 && icc_treatment < 1.0) || !(icc_control >= 0.0 && icc_control < 1.0)) {
    throw ValidationError("icc values must lie in [0, 1)");
  }
  if (clusters_treatment < 2 || clusters_control < 2) {
    throw ValidationError("each group needs at least 2 clusters");
  }
  StudyDesign d;
  d.treatment = GroupDesign{mixed_cluster_sizes(clusters_treatment, mean_size_treatment), gamma_treatment,
                            icc_treatment};
  d.control = GroupDesign{mixed_cluster_sizes(clusters_control, mean_size_control), gamma_control, icc_control};
  d.eta = eta;
  return d;
}

AppropriatenessReport appropriateness_check(const AppropriatenessParams& params, const RunOptions& options) {
  RunOptions run = options;
  run.alpha = params.alpha;
  AppropriatenessReport report;
  report.metrics = run_design(params.design(), run);
  for (std::size_t k = 0; k < kMethodCount; ++k) {
    const MethodMetrics& m = report.metrics.methods[k];
    Qualification q;
    q.method = kAllMethods[k];
    q.cp = m.cp;
    q.ew = m.ew;
    q.dnptnp = m.dnptnp;
    q.cp_ok = m.evaluated > 0 && m.cp >= kCpLow && m.cp <= kCpHigh;
    q.dnptnp_ok = !m.dnptnp || (*m.dnptnp >= kDnptnpLow && *m.dnptnp <= kDnptnpHigh);
    report.methods[k] = q;
  }
  return report;
}

}  // namespace rratio
