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

#ifndef RELACQ_NN_HPP_
#define RELACQ_NN_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace relacq::nn {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class Activation { kRelu, kLinear };

std::string_view ActivationName(Activation activation);
// Throws std::invalid_argument for anything but "relu" or "linear".
Activation ParseActivation(std::string_view name);

struct LayerSpec {
  std::size_t input_dim = 0;
  std::size_t output_dim = 0;
  Activation activation = Activation::kRelu;

  bool operator==(const LayerSpec&) const = default;
};

// Dense layer computing z = weightsᵀ x + biases.
struct Layer {
  LayerSpec spec;
  Matrix weights;  // input_dim x output_dim; entry (i, j) connects i to j.
  Vector biases;   // output_dim
};

// Feed-forward classifier: ReLU hidden layers under a linear head. Softmax is
// applied outside the layer stack.
struct Network {
  std::vector<Layer> layers;

  std::size_t input_dim() const { return layers.front().spec.input_dim; }
  std::size_t output_dim() const { return layers.back().spec.output_dim; }
  std::size_t parameter_count() const;

  // Throws std::invalid_argument on broken dimension chains, non-linear-head
  // violations (only the last layer may be linear) or non-finite parameters.
  void Validate() const;
};

// Cached activations of one forward pass. `inputs[t]` is what layer t
// consumed (the post-activation of layer t-1, or x for t = 0) and
// `pre_activations[t]` is its z.
struct ForwardTrace {
  std::vector<Vector> inputs;
  std::vector<Vector> pre_activations;
  Vector prediction;  // softmax of the last pre-activation

  const Vector& logits() const { return pre_activations.back(); }
  std::size_t predicted_class() const;
  double confidence() const { return prediction.maxCoeff(); }
};

struct TrainConfig {
  double learning_rate = 0.05;
  std::size_t batch_size = 32;
  std::size_t epochs = 100;
  std::uint64_t seed = 0;
  double init_scale = 1.0;
  double momentum = 0.9;

  void Validate() const;
};

// Uniform Glorot initialisation in [-s, s], s = init_scale * sqrt(6 / (fan_in
// + fan_out)); biases zero.
Network InitNetwork(std::span<const LayerSpec> specs, std::uint64_t seed,
                    double init_scale = 1.0);

// Convenience for the usual shape: `hidden_layers` ReLU layers of width
// `hidden_width` followed by a linear head.
std::vector<LayerSpec> MlpSpecs(std::size_t inputs, std::size_t hidden_width,
                                std::size_t hidden_layers, std::size_t classes);

Vector Softmax(const Vector& logits);

ForwardTrace Forward(const Network& network, const Vector& x);

// Mean softmax cross-entropy over the rows of `features`.
double CrossEntropyLoss(const Network& network, const Matrix& features,
                        std::span<const int> labels);

struct Gradients {
  std::vector<Matrix> weights;
  std::vector<Vector> biases;
};

// Backpropagated gradient of CrossEntropyLoss.
Gradients LossGradient(const Network& network, const Matrix& features,
                       std::span<const int> labels);

// Mini-batch SGD with momentum on softmax cross-entropy. `features` holds one
// example per row. When `epoch_losses` is given it receives the mean
// training loss observed during each epoch.
Network Fit(Network network, const Matrix& features,
            std::span<const int> labels, const TrainConfig& config,
            std::vector<double>* epoch_losses = nullptr);

// Largest relative error between LossGradient and central finite differences
// over every parameter: |a - n| / max(|a| + |n|, 1e-6).
double GradientCheck(const Network& network, const Matrix& features,
                     std::span<const int> labels, double step = 1e-5);

}  // namespace relacq::nn

#endif  // RELACQ_NN_HPP_
