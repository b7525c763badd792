/*
 * Copyright 2026 The relacq Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef RELACQ_FEATURES_HPP_
#define RELACQ_FEATURES_HPP_

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace relacq {

// Per-feature acquisition cost in abstract units. Every entry is > 0.
class CostVector {
 public:
  CostVector() = default;
  // Throws std::invalid_argument on a non-positive or non-finite cost.
  explicit CostVector(std::vector<double> costs);

  static CostVector Uniform(std::size_t features, double cost = 1.0);

  std::size_t size() const { return costs_.size(); }
  double operator[](std::size_t i) const { return costs_[i]; }
  const std::vector<double>& values() const { return costs_; }
  double total() const;

  bool operator==(const CostVector&) const = default;

 private:
  std::vector<double> costs_;
};

// Training-set mean of each feature plus the box [lower, upper] the feature
// is known to live in. The means fill unknown entries during acquisition;
// the bounds parameterise the first-layer relevance rule.
struct FeatureStatistics {
  Eigen::VectorXd means;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  std::size_t size() const { return static_cast<std::size_t>(means.size()); }
  // Throws std::invalid_argument unless lengths agree, lower <= upper and
  // every mean lies inside its bounds.
  void Validate() const;
};

// Affine map of raw feature values to [0, 1], fitted on the training split.
// Features with min == max map to 0.
struct NormalizationSpec {
  Eigen::VectorXd min;
  Eigen::VectorXd max;

  std::size_t size() const { return static_cast<std::size_t>(min.size()); }
  double Apply(std::size_t feature, double raw) const;
  Eigen::VectorXd Apply(const Eigen::VectorXd& raw) const;
};

}  // namespace relacq

#endif  // RELACQ_FEATURES_HPP_
