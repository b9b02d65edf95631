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

#include "rratio/types.hpp"

#include <cmath>

namespace rratio {

GroupData::GroupData(std::span<const ClusterRecord> clusters) {
  if (clusters.size() < 2) {
    throw ValidationError("a group needs at least 2 clusters, got " + std::to_string(clusters.size()));
  }
  sizes_.reserve(clusters.size());
  successes_.reserve(clusters.size());
  for (std::size_t j = 0; j < clusters.size(); ++j) {
    const auto& c = clusters[j];
    if (c.size < 1) {
      throw ValidationError("cluster " + std::to_string(j) + ": size must be >= 1");
    }
    if (c.successes < 0 || c.successes > c.size) {
      throw ValidationError("cluster " + std::to_string(j) + ": successes must lie in [0, size]");
    }
    sizes_.push_back(static_cast<double>(c.size));
    successes_.push_back(static_cast<double>(c.successes));
    total_size_ += static_cast<double>(c.size);
    total_successes_ += static_cast<double>(c.successes);
  }
}

GroupData::GroupData(std::initializer_list<ClusterRecord> clusters)
    : GroupData(std::span<const ClusterRecord>(clusters.begin(), clusters.size())) {}

ClusterRecord GroupData::cluster(std::size_t j) const {
  return ClusterRecord{static_cast<int>(sizes_.at(j)), static_cast<int>(successes_.at(j))};
}

std::vector<ClusterRecord> GroupData::clusters() const {
  std::vector<ClusterRecord> out;
  out.reserve(sizes_.size());
  for (std::size_t j = 0; j < sizes_.size(); ++j) {
    out.push_back(cluster(j));
  }
  return out;
}

std::string_view to_string(SizeKind kind) noexcept {
  switch (kind) {
    case SizeKind::kEqual:
      return "EQ";
    case SizeKind::kOptimal:
      return "OP";
    case SizeKind::kRatio:
      return "RE";
  }
  return "?";
}

namespace {

constexpr std::array<std::string_view, kMethodCount> kMethodNames{
    "HB1", "MK1", "MK2", "MK3", "IH1", "IH2", "IH3", "KA1", "KA2",
    "KA3", "DK1", "DK2", "DK3", "FB1", "FB2", "FB3", "MR3"};

}  // namespace

std::string_view to_string(Method m) noexcept { return kMethodNames[index_of(m)]; }

std::optional<Method> parse_method(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kMethodCount; ++i) {
    if (kMethodNames[i] == name) {
      return kAllMethods[i];
    }
  }
  return std::nullopt;
}

std::string_view to_string(Failure f) noexcept {
  switch (f) {
    case Failure::kNone:
      return "NONE";
    case Failure::kUpperDenominatorNonpositive:
      return "UPPER_DENOMINATOR_NONPOSITIVE";
    case Failure::kLowerDenominatorNonpositive:
      return "LOWER_DENOMINATOR_NONPOSITIVE";
    case Failure::kLowerRadicandNegative:
      return "LOWER_RADICAND_NEGATIVE";
    case Failure::kUpperRadicandNegative:
      return "UPPER_RADICAND_NEGATIVE";
    case Failure::kANonpositive:
      return "A_NONPOSITIVE";
    case Failure::kDiscriminantNegative:
      return "DISCRIMINANT_NEGATIVE";
    case Failure::kDegenerateGroup:
      return "DEGENERATE_GROUP";
    case Failure::kBoundaryProportion:
      return "BOUNDARY_PROPORTION";
    case Failure::kZeroVariance:
      return "ZERO_VARIANCE";
    case Failure::kRootNotBracketed:
      return "ROOT_NOT_BRACKETED";
  }
  return "UNKNOWN";
}

std::string to_string(Flags flags) {
  static constexpr std::array<std::pair<Flag, std::string_view>, 4> names{{
      {Flag::kIccTruncated, "ICC_TRUNCATED"},
      {Flag::kLowerClampedAtZero, "LOWER_CLAMPED_AT_ZERO"},
      {Flag::kRootBracketExpanded, "ROOT_BRACKET_EXPANDED"},
      {Flag::kIccDegenerate, "ICC_DEGENERATE"},
  }};
  std::string out;
  for (const auto& [flag, name] : names) {
    if (flags.has(flag)) {
      if (!out.empty()) {
        out += '|';
      }
      out += name;
    }
  }
  return out;
}

void ScenarioSpec::validate() const {
  if (clusters_per_group < 2) {
    throw ValidationError("clusters_per_group must be >= 2");
  }
  if (cluster_size < 1) {
    throw ValidationError("cluster_size must be >= 1");
  }
  if (!(gamma1 > 0.0 && gamma1 < 1.0)) {
    throw ValidationError("gamma1 must lie in (0, 1)");
  }
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw ValidationError("eta must be positive and finite");
  }
  const double g2 = gamma2();
  if (!(g2 > 0.0 && g2 < 1.0)) {
    throw ValidationError("gamma1 / eta must lie in (0, 1)");
  }
  if (!(theta1 >= 0.0 && theta1 < 1.0) || !(theta2 >= 0.0 && theta2 < 1.0)) {
    throw ValidationError("theta values must lie in [0, 1)");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ValidationError("alpha must lie in (0, 1)");
  }
  if (replications < 1) {
    throw ValidationError("replications must be >= 1");
  }
}

}  // namespace rratio
