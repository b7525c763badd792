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

#ifndef RELACQ_RELEVANCE_HPP_
#define RELACQ_RELEVANCE_HPP_

#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "relacq/features.hpp"
#include "relacq/nn.hpp"

namespace relacq::relevance {

// Relevance of every neuron of one layer.
using RelevanceVector = Eigen::VectorXd;

// Rules for redistributing a layer's output relevance onto its inputs.
// Biases never receive relevance.
//
//   WSquare       R_i = Σ_j w_ij² / Σ_i' w_i'j² · R_j        (unbounded input)
//   ZPlus         R_i = Σ_j z⁺_ij / Σ_i' z⁺_i'j · R_j        (input >= 0)
//   ZBounds       R_i = Σ_j (z_ij - l_i w⁺_ij - h_i w⁻_ij) /
//                       Σ_i' (...) · R_j                     (l <= input <= h)
//   Proportional  R_i = Σ_j z_ij / (Σ_i' z_i'j ± ε) · R_j    (plain LRP)
//
// with z_ij = x_i w_ij, w⁺ = max(w, 0) and w⁻ = min(w, 0).
struct WSquare {};
struct ZPlus {};
struct ZBounds {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};
struct Proportional {
  double epsilon = 1e-9;
};

using PropagationRule = std::variant<WSquare, ZPlus, ZBounds, Proportional>;

// One rule per network layer, index 0 being the input layer.
using RuleAssignment = std::vector<PropagationRule>;

std::string RuleName(const PropagationRule& rule);

// A column whose denominator magnitude falls below this while carrying
// nonzero relevance has that relevance spread uniformly over its inputs.
inline constexpr double kDegenerateDenominator = 1e-12;

struct LayerRelevance {
  RelevanceVector relevance;
  std::size_t stabilized_columns = 0;
};

LayerRelevance PropagateWSquare(const nn::Matrix& weights,
                                const RelevanceVector& relevance_out);

// `inputs` must be nonnegative.
LayerRelevance PropagateZPlus(const Eigen::VectorXd& inputs,
                              const nn::Matrix& weights,
                              const RelevanceVector& relevance_out);

// `inputs` must satisfy lower <= inputs <= upper elementwise.
LayerRelevance PropagateZBounds(const Eigen::VectorXd& inputs,
                                const nn::Matrix& weights,
                                const Eigen::VectorXd& lower,
                                const Eigen::VectorXd& upper,
                                const RelevanceVector& relevance_out);

LayerRelevance PropagateProportional(const Eigen::VectorXd& inputs,
                                     const nn::Matrix& weights,
                                     const RelevanceVector& relevance_out,
                                     double epsilon);

LayerRelevance PropagateLayer(const PropagationRule& rule,
                              const Eigen::VectorXd& inputs,
                              const nn::Matrix& weights,
                              const RelevanceVector& relevance_out);

// ZBounds on the first layer with the bounds carried by `statistics`, ZPlus
// on every later layer (their inputs are ReLU outputs).
RuleAssignment DefaultRuleAssignment(const nn::Network& network,
                                     const FeatureStatistics& statistics);

struct BackwardResult {
  RelevanceVector input_relevance;
  // Columns that hit the degenerate-denominator fallback, per layer.
  std::vector<std::size_t> stabilized_columns;

  std::size_t total_stabilized() const;
};

// Runs the assigned rule from the last layer down to the first.
BackwardResult RelevanceBackward(const nn::Network& network,
                                 const nn::ForwardTrace& trace,
                                 const RuleAssignment& assignment,
                                 const RelevanceVector& output_relevance);

// The predicted class probabilities, validated to lie on the simplex.
RelevanceVector OutputRelevanceDirect(const Eigen::VectorXd& prediction);
// Raw logits of the trace; an alternative head for direct propagation.
RelevanceVector OutputRelevanceLogits(const nn::ForwardTrace& trace);
RelevanceVector OutputRelevanceOneHot(std::size_t class_index,
                                      std::size_t n_classes);

// Writes a relevance dump: the output relevance vector, then one line per
// feature sorted by descending |relevance| (ties by index). When `acquired`
// is non-empty, each feature line carries its acquisition status.
void WriteExplanation(std::ostream& out,
                      std::span<const std::string> feature_names,
                      const RelevanceVector& input_relevance,
                      const RelevanceVector& output_relevance,
                      std::span<const bool> acquired = {});

}  // namespace relacq::relevance

#endif  // RELACQ_RELEVANCE_HPP_
