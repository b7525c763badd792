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

#include "relacq/features.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace relacq {

CostVector::CostVector(std::vector<double> costs) : costs_(std::move(costs)) {
  for (std::size_t i = 0; i < costs_.size(); ++i) {
    if (!std::isfinite(costs_[i]) || costs_[i] <= 0.0) {
      throw std::invalid_argument("cost of feature " + std::to_string(i) +
                                  " must be a positive finite number");
    }
  }
}

CostVector CostVector::Uniform(std::size_t features, double cost) {
  return CostVector(std::vector<double>(features, cost));
}

double CostVector::total() const {
  return std::accumulate(costs_.begin(), costs_.end(), 0.0);
}

void FeatureStatistics::Validate() const {
  if (lower.size() != means.size() || upper.size() != means.size()) {
    throw std::invalid_argument("feature statistics vectors differ in length");
  }
  for (Eigen::Index i = 0; i < means.size(); ++i) {
    if (!(lower(i) <= upper(i))) {
      throw std::invalid_argument("feature " + std::to_string(i) +
                                  " has lower bound above upper bound");
    }
    if (!(means(i) >= lower(i) && means(i) <= upper(i))) {
      throw std::invalid_argument("feature " + std::to_string(i) +
                                  " mean lies outside its bounds");
    }
  }
}

double NormalizationSpec::Apply(std::size_t feature, double raw) const {
  const auto i = static_cast<Eigen::Index>(feature);
  const double span = max(i) - min(i);
  if (!(span > 0.0)) return 0.0;
  return std::clamp((raw - min(i)) / span, 0.0, 1.0);
}

Eigen::VectorXd NormalizationSpec::Apply(const Eigen::VectorXd& raw) const {
  if (raw.size() != min.size()) {
    throw std::invalid_argument("row length does not match normalization spec");
  }
  Eigen::VectorXd out(raw.size());
  for (Eigen::Index i = 0; i < raw.size(); ++i) {
    out(i) = Apply(static_cast<std::size_t>(i), raw(i));
  }
  return out;
}

}  // namespace relacq
