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

#include "ambiser/metrics.hpp"

#include <array>

namespace ambiser {

namespace {
constexpr std::array<std::pair<KlDirection, std::string_view>, 2> kDirections{{
    {KlDirection::kGtToPred, "gt-to-pred"},
    {KlDirection::kPredToGt, "pred-to-gt"},
}};
constexpr std::array<std::pair<F1Averaging, std::string_view>, 2> kAveraging{{
    {F1Averaging::kMacro, "macro"},
    {F1Averaging::kWeighted, "weighted"},
}};
}  // namespace

std::string_view to_string(KlDirection d) {
  for (auto [v, name] : kDirections)
    if (v == d) return name;
  return "unknown";
}

std::optional<KlDirection> parse_kl_direction(std::string_view s) {
  for (auto [v, name] : kDirections)
    if (name == s) return v;
  return std::nullopt;
}

std::string_view to_string(F1Averaging a) {
  for (auto [v, name] : kAveraging)
    if (v == a) return name;
  return "unknown";
}

std::optional<F1Averaging> parse_f1_averaging(std::string_view s) {
  for (auto [v, name] : kAveraging)
    if (name == s) return v;
  return std::nullopt;
}

void MetricConfig::validate() const {
  if (!(epsilon > 0 && epsilon < 1e-3))
    throw StructuralError("epsilon must lie in (0, 1e-3), got " + std::to_string(epsilon));
}

double r2_score(std::span<const DistributionPair> pairs) {
  if (pairs.size() < 2) throw UndefinedMetricError("r2_score needs at least 2 pairs");
  const auto n = pairs.front().first.size();
  const auto cols = static_cast<Eigen::Index>(pairs.size());
  Eigen::MatrixXd y(n, cols);
  Eigen::MatrixXd y_hat(n, cols);
  for (Eigen::Index u = 0; u < cols; ++u) {
    const auto& [gt, pred] = pairs[static_cast<std::size_t>(u)];
    if (gt.size() != n || pred.size() != n) throw StructuralError("r2_score: size mismatch");
    y.col(u) = gt.probs();
    y_hat.col(u) = pred.probs();
  }
  return r2_score(y, y_hat);
}

Eigen::VectorXd r2_per_class(const Eigen::MatrixXd& ground_truth, const Eigen::MatrixXd& predicted) {
  Eigen::VectorXd out(ground_truth.rows());
  for (Eigen::Index c = 0; c < ground_truth.rows(); ++c) {
    try {
      out(c) = r2_score(ground_truth.row(c), predicted.row(c));
    } catch (const UndefinedMetricError&) {
      out(c) = std::numeric_limits<double>::quiet_NaN();
    }
  }
  return out;
}

AccuracyF1 accuracy_f1(const std::map<std::string, std::size_t>& predicted,
                       const std::map<std::string, std::size_t>& ground_truth,
                       std::size_t num_classes, const MetricConfig& cfg) {
  std::vector<double> tp(num_classes, 0), fp(num_classes, 0), fn(num_classes, 0),
      support(num_classes, 0);
  AccuracyF1 out;
  std::size_t correct = 0;
  for (const auto& [id, gt] : ground_truth) {
    auto it = predicted.find(id);
    if (it == predicted.end()) continue;
    const auto pred = it->second;
    if (gt >= num_classes || pred >= num_classes)
      throw StructuralError("accuracy_f1: label index out of range for '" + id + "'");
    ++out.n;
    support[gt] += 1;
    if (pred == gt) {
      ++correct;
      tp[gt] += 1;
    } else {
      fp[pred] += 1;
      fn[gt] += 1;
    }
  }
  if (out.n == 0) throw UndefinedMetricError("accuracy_f1: no utterance has both labels");
  out.accuracy = static_cast<double>(correct) / static_cast<double>(out.n);
  out.per_class_f1.resize(num_classes);
  double f1_sum = 0;
  for (std::size_t c = 0; c < num_classes; ++c) {
    const double denom = 2 * tp[c] + fp[c] + fn[c];
    out.per_class_f1[c] = denom > 0 ? 2 * tp[c] / denom : 0.0;
    f1_sum += cfg.f1_averaging == F1Averaging::kMacro ? out.per_class_f1[c]
                                                      : out.per_class_f1[c] * support[c];
  }
  out.f1 = cfg.f1_averaging == F1Averaging::kMacro ? f1_sum / static_cast<double>(num_classes)
                                                   : f1_sum / static_cast<double>(out.n);
  return out;
}

}  // namespace ambiser
