// Copyright 2026 The ambiser Authors.
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

#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "ambiser/emotion_set.hpp"
#include "ambiser/errors.hpp"

namespace ambiser {

enum class InvalidReason { kUnparseable, kZeroSum, kNegativeMass, kMissingClasses };

std::string_view to_string(InvalidReason r);
std::optional<InvalidReason> parse_invalid_reason(std::string_view s);

/// Probability vector over an EmotionSet, or an invalid marker with a reason.
///
/// Valid distributions have every entry in [0,1] and sum to 1 within
/// kSumTolerance. Instances are immutable.
template <typename Scalar_>
class BasicEmotionDistribution {
 public:
  using Scalar = Scalar_;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  static constexpr double kSumTolerance = 1e-9;

  /// Wraps already-normalized probabilities. Use make_distribution() for raw
  /// values.
  static BasicEmotionDistribution from_probabilities(Vector probs) {
    BasicEmotionDistribution d;
    d.probs_ = std::move(probs);
    return d;
  }

  static BasicEmotionDistribution invalid(InvalidReason reason, Eigen::Index size) {
    BasicEmotionDistribution d;
    d.probs_ = Vector::Zero(size);
    d.reason_ = reason;
    return d;
  }

  bool is_valid() const { return !reason_.has_value(); }
  std::optional<InvalidReason> reason() const { return reason_; }
  Eigen::Index size() const { return probs_.size(); }

  /// Throws InvalidDistributionError when the distribution is invalid.
  const Vector& probs() const {
    if (reason_)
      throw InvalidDistributionError("invalid distribution (" +
                                     std::string(to_string(*reason_)) + ")");
    return probs_;
  }

  Scalar operator[](Eigen::Index i) const { return probs()(i); }

 private:
  BasicEmotionDistribution() = default;

  Vector probs_;
  std::optional<InvalidReason> reason_;
};

using EmotionDistribution = BasicEmotionDistribution<double>;

/// Normalizes raw nonnegative mass into a distribution.
///
/// Any negative entry gives invalid(negative-mass); a nonpositive or
/// non-finite sum gives invalid(zero-sum). Throws StructuralError when the
/// length differs from the set size.
template <typename Derived>
BasicEmotionDistribution<typename Derived::Scalar> make_distribution(
    const Eigen::MatrixBase<Derived>& values, const EmotionSet& set) {
  using Dist = BasicEmotionDistribution<typename Derived::Scalar>;
  const auto n = static_cast<Eigen::Index>(set.size());
  if (values.size() != n)
    throw StructuralError("distribution has " + std::to_string(values.size()) +
                          " values, emotion set has " + std::to_string(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    using std::isnan;
    if (isnan(values(i))) throw StructuralError("distribution value is NaN");
    if (values(i) < 0) return Dist::invalid(InvalidReason::kNegativeMass, n);
  }
  const auto sum = values.sum();
  using std::isfinite;
  if (!(sum > 0) || !isfinite(sum)) return Dist::invalid(InvalidReason::kZeroSum, n);
  typename Dist::Vector probs = values / sum;
  return Dist::from_probabilities(std::move(probs));
}

/// Index of the largest probability; the earliest class wins ties.
template <typename Scalar>
std::size_t argmax_index(const BasicEmotionDistribution<Scalar>& d) {
  const auto& p = d.probs();
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < p.size(); ++i)
    if (p(i) > p(best)) best = i;
  return static_cast<std::size_t>(best);
}

template <typename Scalar>
const std::string& argmax_label(const BasicEmotionDistribution<Scalar>& d,
                                const EmotionSet& set) {
  if (d.is_valid() && d.size() != static_cast<Eigen::Index>(set.size()))
    throw StructuralError("distribution size does not match emotion set");
  return set.name(argmax_index(d));
}

}  // namespace ambiser
