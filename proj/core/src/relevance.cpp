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

#include "relacq/relevance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "relacq/format.hpp"

namespace relacq::relevance {
namespace {

void CheckShapes(const nn::Matrix& weights, const RelevanceVector& relevance_out) {
  if (weights.cols() != relevance_out.size()) {
    throw std::invalid_argument(
        "relevance length " + std::to_string(relevance_out.size()) +
        " does not match layer output width " + std::to_string(weights.cols()));
  }
  if (weights.rows() == 0) throw std::invalid_argument("layer has no inputs");
}

void CheckInputs(const Eigen::VectorXd& inputs, const nn::Matrix& weights) {
  if (inputs.size() != weights.rows()) {
    throw std::invalid_argument("input length " + std::to_string(inputs.size()) +
                                " does not match layer input width " +
                                std::to_string(weights.rows()));
  }
}

// Distributes R_j over column j of `contributions` in proportion to its
// entries. `epsilon` is added to each denominator with the denominator's
// sign; a column whose denominator is still degenerate is spread uniformly.
LayerRelevance Redistribute(const nn::Matrix& contributions,
                            const RelevanceVector& relevance_out,
                            double epsilon = 0.0) {
  const Eigen::Index inputs = contributions.rows();
  LayerRelevance result;
  result.relevance = RelevanceVector::Zero(inputs);
  for (Eigen::Index j = 0; j < contributions.cols(); ++j) {
    const double r = relevance_out(j);
    if (r == 0.0) continue;
    double denominator = contributions.col(j).sum();
    denominator += denominator >= 0.0 ? epsilon : -epsilon;
    if (std::abs(denominator) < kDegenerateDenominator) {
      result.relevance.array() += r / static_cast<double>(inputs);
      ++result.stabilized_columns;
      continue;
    }
    result.relevance += contributions.col(j) * (r / denominator);
  }
  return result;
}

}  // namespace

std::string RuleName(const PropagationRule& rule) {
  struct Namer {
    std::string operator()(const WSquare&) const { return "wsquare"; }
    std::string operator()(const ZPlus&) const { return "zplus"; }
    std::string operator()(const ZBounds&) const { return "zbounds"; }
    std::string operator()(const Proportional&) const { return "proportional"; }
  };
  return std::visit(Namer{}, rule);
}

LayerRelevance PropagateWSquare(const nn::Matrix& weights,
                                const RelevanceVector& relevance_out) {
  CheckShapes(weights, relevance_out);
  return Redistribute(weights.array().square().matrix(), relevance_out);
}

LayerRelevance PropagateZPlus(const Eigen::VectorXd& inputs,
                              const nn::Matrix& weights,
                              const RelevanceVector& relevance_out) {
  CheckShapes(weights, relevance_out);
  CheckInputs(inputs, weights);
  if ((inputs.array() < 0.0).any()) {
    throw std::invalid_argument("zplus rule requires nonnegative inputs");
  }
  const nn::Matrix contributions = inputs.asDiagonal() * weights.cwiseMax(0.0);
  return Redistribute(contributions, relevance_out);
}

LayerRelevance PropagateZBounds(const Eigen::VectorXd& inputs,
                                const nn::Matrix& weights,
                                const Eigen::VectorXd& lower,
                                const Eigen::VectorXd& upper,
                                const RelevanceVector& relevance_out) {
  CheckShapes(weights, relevance_out);
  CheckInputs(inputs, weights);
  if (lower.size() != inputs.size() || upper.size() != inputs.size()) {
    throw std::invalid_argument("zbounds bounds do not match the input width");
  }
  for (Eigen::Index i = 0; i < inputs.size(); ++i) {
    if (!(lower(i) <= upper(i))) {
      throw std::invalid_argument("zbounds lower bound above upper bound");
    }
    if (inputs(i) < lower(i) || inputs(i) > upper(i)) {
      throw std::invalid_argument("input " + std::to_string(i) +
                                  " lies outside its zbounds interval");
    }
  }
  const nn::Matrix positive = weights.cwiseMax(0.0);
  const nn::Matrix negative = weights.cwiseMin(0.0);
  const nn::Matrix contributions = inputs.asDiagonal() * weights -
                                   lower.asDiagonal() * positive -
                                   upper.asDiagonal() * negative;
  return Redistribute(contributions, relevance_out);
}

LayerRelevance PropagateProportional(const Eigen::VectorXd& inputs,
                                     const nn::Matrix& weights,
                                     const RelevanceVector& relevance_out,
                                     double epsilon) {
  CheckShapes(weights, relevance_out);
  CheckInputs(inputs, weights);
  if (!(epsilon >= 0.0)) throw std::invalid_argument("epsilon must be >= 0");
  return Redistribute(inputs.asDiagonal() * weights, relevance_out, epsilon);
}

LayerRelevance PropagateLayer(const PropagationRule& rule,
                              const Eigen::VectorXd& inputs,
                              const nn::Matrix& weights,
                              const RelevanceVector& relevance_out) {
  struct Dispatch {
    const Eigen::VectorXd& inputs;
    const nn::Matrix& weights;
    const RelevanceVector& relevance_out;

    LayerRelevance operator()(const WSquare&) const {
      return PropagateWSquare(weights, relevance_out);
    }
    LayerRelevance operator()(const ZPlus&) const {
      return PropagateZPlus(inputs, weights, relevance_out);
    }
    LayerRelevance operator()(const ZBounds& rule) const {
      return PropagateZBounds(inputs, weights, rule.lower, rule.upper,
                              relevance_out);
    }
    LayerRelevance operator()(const Proportional& rule) const {
      return PropagateProportional(inputs, weights, relevance_out, rule.epsilon);
    }
  };
  return std::visit(Dispatch{inputs, weights, relevance_out}, rule);
}

RuleAssignment DefaultRuleAssignment(const nn::Network& network,
                                     const FeatureStatistics& statistics) {
  network.Validate();
  statistics.Validate();
  if (statistics.size() != network.input_dim()) {
    throw std::invalid_argument("feature statistics do not match network input width");
  }
  RuleAssignment assignment;
  assignment.reserve(network.layers.size());
  assignment.emplace_back(ZBounds{statistics.lower, statistics.upper});
  for (std::size_t t = 1; t < network.layers.size(); ++t) {
    assignment.emplace_back(ZPlus{});
  }
  return assignment;
}

std::size_t BackwardResult::total_stabilized() const {
  return std::accumulate(stabilized_columns.begin(), stabilized_columns.end(),
                         std::size_t{0});
}

BackwardResult RelevanceBackward(const nn::Network& network,
                                 const nn::ForwardTrace& trace,
                                 const RuleAssignment& assignment,
                                 const RelevanceVector& output_relevance) {
  const std::size_t depth = network.layers.size();
  if (assignment.size() != depth) {
    throw std::invalid_argument("rule assignment length does not match layer count");
  }
  if (trace.inputs.size() != depth) {
    throw std::invalid_argument("forward trace does not belong to this network");
  }
  if (static_cast<std::size_t>(output_relevance.size()) != network.output_dim()) {
    throw std::invalid_argument("output relevance length does not match class count");
  }
  BackwardResult result;
  result.stabilized_columns.assign(depth, 0);
  RelevanceVector relevance = output_relevance;
  for (std::size_t t = depth; t-- > 0;) {
    LayerRelevance layer = PropagateLayer(assignment[t], trace.inputs[t],
                                          network.layers[t].weights, relevance);
    result.stabilized_columns[t] = layer.stabilized_columns;
    relevance = std::move(layer.relevance);
  }
  result.input_relevance = std::move(relevance);
  return result;
}

RelevanceVector OutputRelevanceDirect(const Eigen::VectorXd& prediction) {
  if (prediction.size() == 0) throw std::invalid_argument("empty prediction");
  if ((prediction.array() < 0.0).any() || (prediction.array() > 1.0).any() ||
      std::abs(prediction.sum() - 1.0) > 1e-9) {
    throw std::invalid_argument("prediction is not a probability vector");
  }
  return prediction;
}

RelevanceVector OutputRelevanceLogits(const nn::ForwardTrace& trace) {
  return trace.logits();
}

RelevanceVector OutputRelevanceOneHot(std::size_t class_index,
                                      std::size_t n_classes) {
  if (class_index >= n_classes) {
    throw std::invalid_argument("class index " + std::to_string(class_index) +
                                " outside [0, " + std::to_string(n_classes) + ")");
  }
  RelevanceVector out = RelevanceVector::Zero(static_cast<Eigen::Index>(n_classes));
  out(static_cast<Eigen::Index>(class_index)) = 1.0;
  return out;
}

void WriteExplanation(std::ostream& out,
                      std::span<const std::string> feature_names,
                      const RelevanceVector& input_relevance,
                      const RelevanceVector& output_relevance,
                      std::span<const bool> acquired) {
  const auto m = static_cast<std::size_t>(input_relevance.size());
  if (feature_names.size() != m) {
    throw std::invalid_argument("feature names do not match relevance length");
  }
  if (!acquired.empty() && acquired.size() != m) {
    throw std::invalid_argument("acquired mask does not match relevance length");
  }
  out << "output_relevance";
  for (Eigen::Index c = 0; c < output_relevance.size(); ++c) {
    out << ',' << FormatShortest(output_relevance(c));
  }
  out << "\ntotal_output," << FormatShortest(output_relevance.sum())
      << "\ntotal_input," << FormatShortest(input_relevance.sum()) << '\n';

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(input_relevance(static_cast<Eigen::Index>(a))) >
           std::abs(input_relevance(static_cast<Eigen::Index>(b)));
  });
  out << (acquired.empty() ? "feature,relevance\n" : "feature,relevance,status\n");
  for (const std::size_t i : order) {
    out << feature_names[i] << ','
        << FormatShortest(input_relevance(static_cast<Eigen::Index>(i)));
    if (!acquired.empty()) out << ',' << (acquired[i] ? "acquired" : "unknown");
    out << '\n';
  }
}

}  // namespace relacq::relevance
