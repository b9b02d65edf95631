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

#ifndef RRATIO_TYPES_HPP
#define RRATIO_TYPES_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

/**
 * \file
 * \brief Domain types shared by the estimators, interval methods, simulation and I/O layers.
 */

namespace rratio {

/// A study or configuration violates a documented invariant.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed input text; carries the 1-based line number (0 when not line-specific).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_{line} {}

  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Grid or parameter file problem (unknown key, bad value, missing key).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One cluster: `successes` of `size` individuals responded.
struct ClusterRecord {
  int size = 1;
  int successes = 0;

  friend bool operator==(const ClusterRecord&, const ClusterRecord&) = default;
};

/// One treatment arm.
/**
 * Cluster sizes and counts are stored column-wise as doubles so the reduction kernels can
 * stream over them. All values are integral by construction. Immutable after construction.
 */
class GroupData {
 public:
  /// Throws ValidationError unless there are at least two clusters and 0 <= successes <= size, size >= 1.
  explicit GroupData(std::span<const ClusterRecord> clusters);
  GroupData(std::initializer_list<ClusterRecord> clusters);

  [[nodiscard]] std::size_t cluster_count() const noexcept { return sizes_.size(); }
  [[nodiscard]] std::span<const double> sizes() const noexcept { return sizes_; }
  [[nodiscard]] std::span<const double> successes() const noexcept { return successes_; }
  [[nodiscard]] ClusterRecord cluster(std::size_t j) const;
  [[nodiscard]] std::vector<ClusterRecord> clusters() const;

  /// Y_i. and n_i.
  [[nodiscard]] double total_successes() const noexcept { return total_successes_; }
  [[nodiscard]] double total_size() const noexcept { return total_size_; }

  friend bool operator==(const GroupData&, const GroupData&) = default;

 private:
  std::vector<double> sizes_;
  std::vector<double> successes_;
  double total_successes_ = 0.0;
  double total_size_ = 0.0;
};

/// Treatment (numerator of the risk ratio) and control (denominator).
struct TwoGroupStudy {
  GroupData treatment;
  GroupData control;
};

/// Derived per-group quantities. Pure function of the GroupData.
struct GroupSummary {
  double gamma_hat = 0.0;
  double icc_raw = 0.0;
  /// Clamped to [0, 1]; used by all downstream formulas.
  double icc_hat = 0.0;
  bool icc_truncated = false;
  /// The ANOVA estimator was undefined (all clusters of size one or zero denominator).
  bool icc_degenerate = false;
  double xi_hat = 1.0;
  double bms = 0.0;
  double wms = 0.0;
  double n_star = 0.0;
};

enum class SizeKind : std::uint8_t { kEqual, kOptimal, kRatio };

inline constexpr std::array<SizeKind, 3> kSizeKinds{SizeKind::kEqual, SizeKind::kOptimal,
                                                    SizeKind::kRatio};

[[nodiscard]] std::string_view to_string(SizeKind kind) noexcept;

/// An effective sample size and the matching adjusted success count.
struct EffectiveSize {
  SizeKind kind = SizeKind::kRatio;
  double n_eff = 0.0;
  double y_eff = 0.0;
  double gamma_used = 0.0;
  double variance = 0.0;
};

enum class Method : std::uint8_t {
  kHB1,
  kMK1, kMK2, kMK3,
  kIH1, kIH2, kIH3,
  kKA1, kKA2, kKA3,
  kDK1, kDK2, kDK3,
  kFB1, kFB2, kFB3,
  kMR3,
};

inline constexpr std::size_t kMethodCount = 17;

/// Report order: HB1, MK1-3, IH1-3, KA1-3, DK1-3, FB1-3, MR3.
inline constexpr std::array<Method, kMethodCount> kAllMethods{
    Method::kHB1, Method::kMK1, Method::kMK2, Method::kMK3, Method::kIH1, Method::kIH2,
    Method::kIH3, Method::kKA1, Method::kKA2, Method::kKA3, Method::kDK1, Method::kDK2,
    Method::kDK3, Method::kFB1, Method::kFB2, Method::kFB3, Method::kMR3};

/// The eight methods carried into the example comparisons.
inline constexpr std::array<Method, 8> kFeaturedMethods{Method::kHB1, Method::kMK3, Method::kIH2,
                                                        Method::kKA2, Method::kDK2, Method::kDK3,
                                                        Method::kFB2, Method::kMR3};

[[nodiscard]] constexpr std::size_t index_of(Method m) noexcept { return static_cast<std::size_t>(m); }
[[nodiscard]] std::string_view to_string(Method m) noexcept;
[[nodiscard]] std::optional<Method> parse_method(std::string_view name) noexcept;

/// Why an interval does not exist.
enum class Failure : std::uint8_t {
  kNone,
  kUpperDenominatorNonpositive,  // u2(2g2 - u2) <= 0
  kLowerDenominatorNonpositive,  // l2(2g2 - l2) <= 0
  kLowerRadicandNegative,
  kUpperRadicandNegative,
  kANonpositive,
  kDiscriminantNegative,
  kDegenerateGroup,
  kBoundaryProportion,
  kZeroVariance,
  kRootNotBracketed,
};

[[nodiscard]] std::string_view to_string(Failure f) noexcept;

enum class Flag : std::uint8_t {
  kIccTruncated = 1U << 0U,
  kLowerClampedAtZero = 1U << 1U,
  kRootBracketExpanded = 1U << 2U,
  kIccDegenerate = 1U << 3U,
};

/// Bit set of Flag values.
class Flags {
 public:
  constexpr Flags() = default;

  constexpr void set(Flag f) noexcept { bits_ = static_cast<std::uint8_t>(bits_ | static_cast<std::uint8_t>(f)); }
  [[nodiscard]] constexpr bool has(Flag f) const noexcept { return (bits_ & static_cast<std::uint8_t>(f)) != 0; }
  [[nodiscard]] constexpr bool empty() const noexcept { return bits_ == 0; }
  [[nodiscard]] constexpr std::uint8_t bits() const noexcept { return bits_; }
  constexpr Flags& operator|=(Flags other) noexcept {
    bits_ = static_cast<std::uint8_t>(bits_ | other.bits_);
    return *this;
  }

  friend constexpr bool operator==(Flags, Flags) = default;

 private:
  std::uint8_t bits_ = 0;
};

/// "ICC_TRUNCATED|LOWER_CLAMPED_AT_ZERO" style rendering; empty string for no flags.
[[nodiscard]] std::string to_string(Flags flags);

struct Interval {
  double lower = 0.0;
  double upper = 0.0;

  [[nodiscard]] double width() const noexcept { return upper - lower; }
  [[nodiscard]] bool contains(double x) const noexcept { return lower <= x && x <= upper; }
};

/// Outcome of one interval procedure: limits, or the reason they do not exist.
struct IntervalResult {
  Method method = Method::kHB1;
  std::optional<Interval> limits;
  Failure failure = Failure::kNone;
  Flags flags;
  /// The point estimate the method is centred on (NaN when undefined).
  double estimate = 0.0;

  [[nodiscard]] bool exists() const noexcept { return limits.has_value(); }

  static IntervalResult nonexistent(Method m, Failure why, double estimate = 0.0) {
    IntervalResult r;
    r.method = m;
    r.failure = why;
    r.estimate = estimate;
    return r;
  }
};

using IntervalSet = std::array<IntervalResult, kMethodCount>;

/// One cell of a simulation grid.
struct ScenarioSpec {
  int clusters_per_group = 20;
  int cluster_size = 5;
  double gamma1 = 0.2;
  double eta = 1.0;
  double theta1 = 0.1;
  double theta2 = 0.1;
  double alpha = 0.05;
  int replications = 2000;
  std::uint64_t seed = 0;

  [[nodiscard]] double gamma2() const noexcept { return gamma1 / eta; }

  /// Throws ValidationError when gamma2 falls outside (0, 1), a theta outside [0, 1), or alpha outside (0, 1).
  void validate() const;
};

struct MethodMetrics {
  double cp = 0.0;
  double ew = 0.0;
  double disncp = 0.0;
  double mesncp = 0.0;
  /// DISNCP / (DISNCP + MESNCP); empty when there was no noncoverage.
  std::optional<double> dnptnp;
  std::int64_t evaluated = 0;
  std::int64_t covered = 0;
  std::int64_t distal = 0;
  std::int64_t mesial = 0;
  /// Replications in which this method had no interval.
  std::int64_t nonexistent = 0;
  double width_sum = 0.0;
};

struct ScenarioMetrics {
  std::array<MethodMetrics, kMethodCount> methods{};
  std::int64_t good_replications = 0;
  std::int64_t rejected_samples = 0;
  /// The rejection cap was hit before the target number of good replications.
  bool stalled = false;

  [[nodiscard]] const MethodMetrics& operator[](Method m) const { return methods[index_of(m)]; }
  [[nodiscard]] MethodMetrics& operator[](Method m) { return methods[index_of(m)]; }
};

}  // namespace rratio

#endif  // RRATIO_TYPES_HPP
