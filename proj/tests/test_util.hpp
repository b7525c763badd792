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

#ifndef RELACQ_TESTS_TEST_UTIL_HPP_
#define RELACQ_TESTS_TEST_UTIL_HPP_

// Test-only helpers: random instance generators and scalar, loop-based
// re-implementations of the relevance rules and selectors. The reference
// code deliberately avoids Eigen expressions and the library's relevance
// path so it can serve as an independent oracle.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "relacq/features.hpp"
#include "relacq/nn.hpp"
#include "relacq/random.hpp"

namespace relacq::testing {

using Vec = std::vector<double>;
using Mat = std::vector<std::vector<double>>;  // [input][output]

inline Mat ToMat(const Eigen::MatrixXd& m) {
  Mat out(static_cast<std::size_t>(m.rows()), Vec(static_cast<std::size_t>(m.cols())));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
  }
  return out;
}

inline Vec ToVec(const Eigen::VectorXd& v) { return Vec(v.begin(), v.end()); }

inline Eigen::VectorXd ToEigen(const Vec& v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i];
  return out;
}

inline Eigen::MatrixXd ToEigen(const Mat& m) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(m.size()),
                      static_cast<Eigen::Index>(m.empty() ? 0 : m[0].size()));
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m[i].size(); ++j) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m[i][j];
    }
  }
  return out;
}

// Shared redistribution step of the reference rules: column j's relevance
// is split in proportion to contributions[.][j]; degenerate columns
// (|denominator| < 1e-12) are spread uniformly.
inline Vec ReferenceRedistribute(const Mat& contributions, const Vec& relevance_out) {
  const std::size_t inputs = contributions.size();
  Vec out(inputs, 0.0);
  for (std::size_t j = 0; j < relevance_out.size(); ++j) {
    if (relevance_out[j] == 0.0) continue;
    double denominator = 0.0;
    for (std::size_t i = 0; i < inputs; ++i) denominator += contributions[i][j];
    for (std::size_t i = 0; i < inputs; ++i) {
      out[i] += std::abs(denominator) < 1e-12
                    ? relevance_out[j] / static_cast<double>(inputs)
                    : contributions[i][j] / denominator * relevance_out[j];
    }
  }
  return out;
}

inline Vec ReferenceWSquare(const Mat& w, const Vec& r) {
  Mat c = w;
  for (auto& row : c) {
    for (double& v : row) v = v * v;
  }
  return ReferenceRedistribute(c, r);
}

inline Vec ReferenceZPlus(const Vec& x, const Mat& w, const Vec& r) {
  Mat c = w;
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (std::size_t j = 0; j < w[i].size(); ++j) c[i][j] = x[i] * (w[i][j] > 0 ? w[i][j] : 0.0);
  }
  return ReferenceRedistribute(c, r);
}

inline Vec ReferenceZBounds(const Vec& x, const Mat& w, const Vec& l, const Vec& h,
                            const Vec& r) {
  Mat c = w;
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (std::size_t j = 0; j < w[i].size(); ++j) {
      const double plus = w[i][j] > 0 ? w[i][j] : 0.0;
      const double minus = w[i][j] < 0 ? w[i][j] : 0.0;
      c[i][j] = x[i] * w[i][j] - l[i] * plus - h[i] * minus;
    }
  }
  return ReferenceRedistribute(c, r);
}

struct ReferenceNet {
  std::vector<Mat> weights;
  std::vector<Vec> biases;
  std::vector<bool> relu;
};

inline ReferenceNet ToReference(const nn::Network& network) {
  ReferenceNet net;
  for (const nn::Layer& layer : network.layers) {
    net.weights.push_back(ToMat(layer.weights));
    net.biases.push_back(ToVec(layer.biases));
    net.relu.push_back(layer.spec.activation == nn::Activation::kRelu);
  }
  return net;
}

// Scalar forward pass; returns per-layer inputs and the softmax output.
struct ReferenceTrace {
  std::vector<Vec> inputs;
  Vec probabilities;
};

inline ReferenceTrace ReferenceForward(const ReferenceNet& net, const Vec& x) {
  ReferenceTrace trace;
  Vec a = x;
  for (std::size_t t = 0; t < net.weights.size(); ++t) {
    trace.inputs.push_back(a);
    Vec z(net.biases[t]);
    for (std::size_t j = 0; j < z.size(); ++j) {
      for (std::size_t i = 0; i < a.size(); ++i) z[j] += a[i] * net.weights[t][i][j];
    }
    if (net.relu[t]) {
      for (double& v : z) v = v > 0 ? v : 0.0;
    }
    a = z;
  }
  double peak = -std::numeric_limits<double>::infinity();
  for (const double v : a) peak = std::max(peak, v);
  double total = 0.0;
  trace.probabilities.resize(a.size());
  for (std::size_t c = 0; c < a.size(); ++c) {
    trace.probabilities[c] = std::exp(a[c] - peak);
    total += trace.probabilities[c];
  }
  for (double& p : trace.probabilities) p /= total;
  return trace;
}

// zbounds on the first layer, zplus above.
inline Vec ReferenceBackward(const ReferenceNet& net, const ReferenceTrace& trace,
                             const Vec& lower, const Vec& upper, Vec relevance) {
  for (std::size_t t = net.weights.size(); t-- > 0;) {
    relevance = t == 0 ? ReferenceZBounds(trace.inputs[0], net.weights[0], lower, upper,
                                          relevance)
                       : ReferenceZPlus(trace.inputs[t], net.weights[t], relevance);
  }
  return relevance;
}

struct ReferenceChoice {
  std::size_t feature = 0;
  double score = 0.0;
};

// Brute force: impute, propagate, score every unknown feature.
inline Vec ReferenceFilled(const Vec& partial, const std::vector<int>& known,
                           const Vec& means) {
  Vec filled(partial.size());
  for (std::size_t i = 0; i < partial.size(); ++i) filled[i] = known[i] ? partial[i] : means[i];
  return filled;
}

inline std::optional<ReferenceChoice> ReferenceArgmax(const Vec& relevance,
                                                      const std::vector<int>& known,
                                                      const Vec& costs) {
  std::optional<ReferenceChoice> best;
  for (std::size_t i = 0; i < relevance.size(); ++i) {
    if (known[i]) continue;
    const double score = std::abs(relevance[i]) / costs[i];
    if (!best || score > best->score) best = ReferenceChoice{i, score};
  }
  return best;
}

inline ReferenceChoice ReferenceSelectDirect(const ReferenceNet& net, const Vec& partial,
                                             const std::vector<int>& known, const Vec& means,
                                             const Vec& lower, const Vec& upper,
                                             const Vec& costs) {
  const ReferenceTrace trace = ReferenceForward(net, ReferenceFilled(partial, known, means));
  const Vec r = ReferenceBackward(net, trace, lower, upper, trace.probabilities);
  return *ReferenceArgmax(r, known, costs);
}

// Exhaustive over every (class, feature) pair: largest score, then lowest
// feature index.
inline ReferenceChoice ReferenceSelectMultiProp(const ReferenceNet& net, const Vec& partial,
                                                const std::vector<int>& known,
                                                const Vec& means, const Vec& lower,
                                                const Vec& upper, const Vec& costs) {
  const ReferenceTrace trace = ReferenceForward(net, ReferenceFilled(partial, known, means));
  const std::size_t classes = trace.probabilities.size();
  std::optional<ReferenceChoice> best;
  for (std::size_t c = 0; c < classes; ++c) {
    Vec onehot(classes, 0.0);
    onehot[c] = 1.0;
    const Vec r = ReferenceBackward(net, trace, lower, upper, onehot);
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (known[i]) continue;
      const double score = std::abs(r[i]) / costs[i];
      if (!best || score > best->score || (score == best->score && i < best->feature)) {
        best = ReferenceChoice{i, score};
      }
    }
  }
  return *best;
}

// Random ReLU network with widths in [1, max_width] and 1..max_layers layers.
inline nn::Network RandomNetwork(Rng& rng, std::size_t inputs, std::size_t classes,
                                 std::size_t max_layers, std::size_t max_width) {
  const std::size_t layers = 1 + rng.index(max_layers);
  std::vector<nn::LayerSpec> specs;
  std::size_t width = inputs;
  for (std::size_t l = 0; l + 1 < layers; ++l) {
    const std::size_t next = 1 + rng.index(max_width);
    specs.push_back({width, next, nn::Activation::kRelu});
    width = next;
  }
  specs.push_back({width, classes, nn::Activation::kLinear});
  nn::Network network = nn::InitNetwork(specs, rng.next());
  for (nn::Layer& layer : network.layers) {
    for (Eigen::Index j = 0; j < layer.biases.size(); ++j) layer.biases(j) = rng.uniform(-0.5, 0.5);
  }
  return network;
}

inline Eigen::VectorXd RandomUnitVector(Rng& rng, std::size_t n) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.uniform01();
  return v;
}

inline FeatureStatistics UnitStatistics(const Eigen::VectorXd& means) {
  return {means, Eigen::VectorXd::Zero(means.size()), Eigen::VectorXd::Ones(means.size())};
}

}  // namespace relacq::testing

#endif  // RELACQ_TESTS_TEST_UTIL_HPP_
