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
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ambiser/distribution.hpp"
#include "ambiser/errors.hpp"

namespace ambiser {

enum class KlDirection { kGtToPred, kPredToGt };
enum class F1Averaging { kMacro, kWeighted };

std::string_view to_string(KlDirection d);
std::optional<KlDirection> parse_kl_direction(std::string_view s);
std::string_view to_string(F1Averaging a);
std::optional<F1Averaging> parse_f1_averaging(std::string_view s);

struct MetricConfig {
  KlDirection kl_direction = KlDirection::kGtToPred;
  double epsilon = 1e-10;  // added to every entry before KL, then renormalized
  F1Averaging f1_averaging = F1Averaging::kMacro;

  /// Throws StructuralError unless epsilon is in (0, 1e-3).
  void validate() const;
};

namespace detail {

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> smooth(
    const Eigen::MatrixBase<Derived>& p, typename Derived::Scalar eps) {
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> s = p.array() + eps;
  return s / s.sum();
}

}  // namespace detail

/// KL divergence between epsilon-smoothed ground truth and prediction, in
/// nats. cfg.kl_direction picks KL(gt||pred) or KL(pred||gt).
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar kl_divergence(const Eigen::MatrixBase<DerivedA>& ground_truth,
                                        const Eigen::MatrixBase<DerivedB>& predicted,
                                        const MetricConfig& cfg = {}) {
  using Scalar = typename DerivedA::Scalar;
  if (ground_truth.size() != predicted.size())
    throw StructuralError("kl_divergence: size mismatch");
  const auto eps = static_cast<Scalar>(cfg.epsilon);
  auto gt = detail::smooth(ground_truth, eps);
  auto pred = detail::smooth(predicted, eps);
  const auto& a = cfg.kl_direction == KlDirection::kGtToPred ? gt : pred;
  const auto& b = cfg.kl_direction == KlDirection::kGtToPred ? pred : gt;
  Scalar kl = (a.array() * (a.array() / b.array()).log()).sum();
  return kl < 0 ? Scalar(0) : kl;
}

template <typename Scalar>
Scalar kl_divergence(const BasicEmotionDistribution<Scalar>& ground_truth,
                     const BasicEmotionDistribution<Scalar>& predicted,
                     const MetricConfig& cfg = {}) {
  return kl_divergence(ground_truth.probs(), predicted.probs(), cfg);
}

/// -ln(sum_i sqrt(p_i q_i)), clamped at 0. +infinity when the supports are
/// disjoint.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar bhattacharyya(const Eigen::MatrixBase<DerivedA>& p,
                                        const Eigen::MatrixBase<DerivedB>& q) {
  using Scalar = typename DerivedA::Scalar;
  if (p.size() != q.size()) throw StructuralError("bhattacharyya: size mismatch");
  const Scalar coefficient = (p.array() * q.array()).sqrt().sum();
  if (!(coefficient > 0)) return std::numeric_limits<Scalar>::infinity();
  const Scalar bd = -std::log(coefficient);
  return bd > 0 ? bd : Scalar(0);
}

template <typename Scalar>
Scalar bhattacharyya(const BasicEmotionDistribution<Scalar>& p,
                     const BasicEmotionDistribution<Scalar>& q) {
  return bhattacharyya(p.probs(), q.probs());
}

/// Coefficient of determination over every entry of the two matrices
/// (classes x utterances, flattened). Throws UndefinedMetricError when the
/// ground truth has zero variance.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar r2_score(const Eigen::MatrixBase<DerivedA>& ground_truth,
                                   const Eigen::MatrixBase<DerivedB>& predicted) {
  using Scalar = typename DerivedA::Scalar;
  if (ground_truth.rows() != predicted.rows() || ground_truth.cols() != predicted.cols())
    throw StructuralError("r2_score: shape mismatch");
  const Scalar mean = ground_truth.mean();
  const Scalar ss_tot = (ground_truth.array() - mean).square().sum();
  if (!(ss_tot > 0)) throw UndefinedMetricError("r2_score: ground truth has zero variance");
  const Scalar ss_res = (ground_truth - predicted).squaredNorm();
  return Scalar(1) - ss_res / ss_tot;
}

using DistributionPair = std::pair<EmotionDistribution, EmotionDistribution>;

/// R^2 over (ground truth, prediction) pairs. Needs at least two pairs.
double r2_score(std::span<const DistributionPair> pairs);

/// R^2 of each class (row) separately; NaN where a row has zero variance.
Eigen::VectorXd r2_per_class(const Eigen::MatrixXd& ground_truth, const Eigen::MatrixXd& predicted);

struct AccuracyF1 {
  double accuracy = 0;
  double f1 = 0;
  std::vector<double> per_class_f1;
  std::size_t n = 0;  // utterances in both maps
};

/// Single-label scores over utterances present in both maps. Labels are
/// class indices in [0, num_classes). Macro F1 averages all classes, so a
/// class missing from the ground truth contributes 0; weighted F1 weights
/// by ground-truth support. Throws UndefinedMetricError on an empty
/// intersection.
AccuracyF1 accuracy_f1(const std::map<std::string, std::size_t>& predicted,
                       const std::map<std::string, std::size_t>& ground_truth,
                       std::size_t num_classes, const MetricConfig& cfg = {});

}  // namespace ambiser
