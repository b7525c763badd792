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

#include "relacq/nn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "relacq/random.hpp"

namespace relacq::nn {
namespace {

void CheckLabels(const Matrix& features, std::span<const int> labels,
                 std::size_t classes) {
  if (static_cast<std::size_t>(features.rows()) != labels.size()) {
    throw std::invalid_argument("feature rows and labels differ in length");
  }
  for (const int label : labels) {
    if (label < 0 || static_cast<std::size_t>(label) >= classes) {
      throw std::invalid_argument("label " + std::to_string(label) +
                                  " outside [0, " + std::to_string(classes) +
                                  ")");
    }
  }
}

Matrix RowSoftmax(const Matrix& logits) {
  Matrix out(logits.rows(), logits.cols());
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    out.row(r) = Softmax(logits.row(r).transpose()).transpose();
  }
  return out;
}

struct BatchPass {
  std::vector<Matrix> inputs;  // per layer, batch x input_dim
  std::vector<Matrix> pre_activations;
  Matrix probabilities;
};

BatchPass ForwardBatch(const Network& network, const Matrix& features) {
  BatchPass pass;
  Matrix activation = features;
  for (const Layer& layer : network.layers) {
    Matrix z = activation * layer.weights;
    z.rowwise() += layer.biases.transpose();
    pass.inputs.push_back(std::move(activation));
    activation = layer.spec.activation == Activation::kRelu
                     ? Matrix(z.cwiseMax(0.0))
                     : z;
    pass.pre_activations.push_back(std::move(z));
  }
  pass.probabilities = RowSoftmax(pass.pre_activations.back());
  return pass;
}

double BatchLoss(const Matrix& probabilities, std::span<const int> labels) {
  double loss = 0.0;
  for (std::size_t r = 0; r < labels.size(); ++r) {
    const double p = probabilities(static_cast<Eigen::Index>(r), labels[r]);
    loss -= std::log(std::max(p, 1e-300));
  }
  return loss / static_cast<double>(labels.size());
}

Gradients Backward(const Network& network, const BatchPass& pass,
                   std::span<const int> labels) {
  const std::size_t depth = network.layers.size();
  const double scale = 1.0 / static_cast<double>(labels.size());
  Gradients grads;
  grads.weights.resize(depth);
  grads.biases.resize(depth);

  Matrix delta = pass.probabilities;
  for (std::size_t r = 0; r < labels.size(); ++r) {
    delta(static_cast<Eigen::Index>(r), labels[r]) -= 1.0;
  }
  delta *= scale;

  for (std::size_t t = depth; t-- > 0;) {
    grads.weights[t] = pass.inputs[t].transpose() * delta;
    grads.biases[t] = delta.colwise().sum().transpose();
    if (t == 0) break;
    Matrix upstream = delta * network.layers[t].weights.transpose();
    if (network.layers[t - 1].spec.activation == Activation::kRelu) {
      upstream = upstream.cwiseProduct(
          (pass.pre_activations[t - 1].array() > 0.0).cast<double>().matrix());
    }
    delta = std::move(upstream);
  }
  return grads;
}

}  // namespace

std::string_view ActivationName(Activation activation) {
  return activation == Activation::kRelu ? "relu" : "linear";
}

Activation ParseActivation(std::string_view name) {
  if (name == "relu") return Activation::kRelu;
  if (name == "linear") return Activation::kLinear;
  throw std::invalid_argument("unknown activation '" + std::string(name) + "'");
}

std::size_t Network::parameter_count() const {
  std::size_t count = 0;
  for (const Layer& layer : layers) {
    count += static_cast<std::size_t>(layer.weights.size() + layer.biases.size());
  }
  return count;
}

void Network::Validate() const {
  if (layers.empty()) throw std::invalid_argument("network has no layers");
  for (std::size_t t = 0; t < layers.size(); ++t) {
    const Layer& layer = layers[t];
    const LayerSpec& spec = layer.spec;
    if (spec.input_dim == 0 || spec.output_dim == 0) {
      throw std::invalid_argument("layer " + std::to_string(t) +
                                  " has a zero dimension");
    }
    if (t + 1 < layers.size() && spec.activation == Activation::kLinear) {
      throw std::invalid_argument("only the final layer may be linear");
    }
    if (t > 0 && layers[t - 1].spec.output_dim != spec.input_dim) {
      throw std::invalid_argument(
          "layer " + std::to_string(t) + " input_dim " +
          std::to_string(spec.input_dim) + " does not match previous output_dim " +
          std::to_string(layers[t - 1].spec.output_dim));
    }
    if (static_cast<std::size_t>(layer.weights.rows()) != spec.input_dim ||
        static_cast<std::size_t>(layer.weights.cols()) != spec.output_dim ||
        static_cast<std::size_t>(layer.biases.size()) != spec.output_dim) {
      throw std::invalid_argument("layer " + std::to_string(t) +
                                  " parameter shape disagrees with its spec");
    }
    if (!layer.weights.allFinite() || !layer.biases.allFinite()) {
      throw std::invalid_argument("layer " + std::to_string(t) +
                                  " has non-finite parameters");
    }
  }
}

std::size_t ForwardTrace::predicted_class() const {
  Eigen::Index best = 0;
  prediction.maxCoeff(&best);
  return static_cast<std::size_t>(best);
}

void TrainConfig::Validate() const {
  if (!(learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be positive");
  if (batch_size == 0) throw std::invalid_argument("batch_size must be positive");
  if (!(init_scale > 0.0)) throw std::invalid_argument("init_scale must be positive");
  if (!(momentum >= 0.0 && momentum < 1.0)) {
    throw std::invalid_argument("momentum must lie in [0, 1)");
  }
}

Network InitNetwork(std::span<const LayerSpec> specs, std::uint64_t seed,
                    double init_scale) {
  Network network;
  Rng rng(seed);
  for (const LayerSpec& spec : specs) {
    Layer layer;
    layer.spec = spec;
    const auto rows = static_cast<Eigen::Index>(spec.input_dim);
    const auto cols = static_cast<Eigen::Index>(spec.output_dim);
    const double bound =
        init_scale *
        std::sqrt(6.0 / static_cast<double>(spec.input_dim + spec.output_dim));
    layer.weights.resize(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index j = 0; j < cols; ++j) {
        layer.weights(i, j) = rng.uniform(-bound, bound);
      }
    }
    layer.biases = Vector::Zero(cols);
    network.layers.push_back(std::move(layer));
  }
  network.Validate();
  return network;
}

std::vector<LayerSpec> MlpSpecs(std::size_t inputs, std::size_t hidden_width,
                                std::size_t hidden_layers, std::size_t classes) {
  std::vector<LayerSpec> specs;
  std::size_t width = inputs;
  for (std::size_t l = 0; l < hidden_layers; ++l) {
    specs.push_back({width, hidden_width, Activation::kRelu});
    width = hidden_width;
  }
  specs.push_back({width, classes, Activation::kLinear});
  return specs;
}

Vector Softmax(const Vector& logits) {
  const double shift = logits.maxCoeff();
  Vector e = (logits.array() - shift).exp().matrix();
  return e / e.sum();
}

ForwardTrace Forward(const Network& network, const Vector& x) {
  if (static_cast<std::size_t>(x.size()) != network.input_dim()) {
    throw std::invalid_argument("input length " + std::to_string(x.size()) +
                                " does not match network input_dim " +
                                std::to_string(network.input_dim()));
  }
  if (!x.allFinite()) throw std::invalid_argument("input contains non-finite values");

  ForwardTrace trace;
  trace.inputs.reserve(network.layers.size());
  trace.pre_activations.reserve(network.layers.size());
  Vector activation = x;
  for (const Layer& layer : network.layers) {
    Vector z = layer.weights.transpose() * activation + layer.biases;
    trace.inputs.push_back(std::move(activation));
    activation = layer.spec.activation == Activation::kRelu
                     ? Vector(z.cwiseMax(0.0))
                     : z;
    trace.pre_activations.push_back(std::move(z));
  }
  trace.prediction = Softmax(trace.pre_activations.back());
  return trace;
}

double CrossEntropyLoss(const Network& network, const Matrix& features,
                        std::span<const int> labels) {
  CheckLabels(features, labels, network.output_dim());
  if (labels.empty()) throw std::invalid_argument("empty dataset");
  return BatchLoss(ForwardBatch(network, features).probabilities, labels);
}

Gradients LossGradient(const Network& network, const Matrix& features,
                       std::span<const int> labels) {
  CheckLabels(features, labels, network.output_dim());
  if (labels.empty()) throw std::invalid_argument("empty dataset");
  return Backward(network, ForwardBatch(network, features), labels);
}

Network Fit(Network network, const Matrix& features,
            std::span<const int> labels, const TrainConfig& config,
            std::vector<double>* epoch_losses) {
  config.Validate();
  network.Validate();
  if (labels.empty()) throw std::invalid_argument("empty dataset");
  if (static_cast<std::size_t>(features.cols()) != network.input_dim()) {
    throw std::invalid_argument("feature width does not match network input_dim");
  }
  CheckLabels(features, labels, network.output_dim());

  const std::size_t depth = network.layers.size();
  std::vector<Matrix> weight_velocity(depth);
  std::vector<Vector> bias_velocity(depth);
  for (std::size_t t = 0; t < depth; ++t) {
    weight_velocity[t] = Matrix::Zero(network.layers[t].weights.rows(),
                                      network.layers[t].weights.cols());
    bias_velocity[t] = Vector::Zero(network.layers[t].biases.size());
  }

  Rng rng(config.seed);
  std::vector<std::size_t> order(labels.size());
  std::iota(order.begin(), order.end(), 0);

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      const auto batch_rows = static_cast<Eigen::Index>(end - start);
      Matrix batch(batch_rows, features.cols());
      std::vector<int> batch_labels(end - start);
      for (std::size_t r = start; r < end; ++r) {
        batch.row(static_cast<Eigen::Index>(r - start)) =
            features.row(static_cast<Eigen::Index>(order[r]));
        batch_labels[r - start] = labels[order[r]];
      }
      const BatchPass pass = ForwardBatch(network, batch);
      epoch_loss += BatchLoss(pass.probabilities, batch_labels) *
                    static_cast<double>(batch_rows);
      const Gradients grads = Backward(network, pass, batch_labels);
      for (std::size_t t = 0; t < depth; ++t) {
        weight_velocity[t] = config.momentum * weight_velocity[t] -
                             config.learning_rate * grads.weights[t];
        bias_velocity[t] = config.momentum * bias_velocity[t] -
                           config.learning_rate * grads.biases[t];
        network.layers[t].weights += weight_velocity[t];
        network.layers[t].biases += bias_velocity[t];
      }
    }
    if (epoch_losses != nullptr) {
      epoch_losses->push_back(epoch_loss / static_cast<double>(order.size()));
    }
  }
  return network;
}

double GradientCheck(const Network& network, const Matrix& features,
                     std::span<const int> labels, double step) {
  const Gradients analytic = LossGradient(network, features, labels);
  Network probe = network;
  double worst = 0.0;
  auto compare = [&](double& parameter, double analytic_value) {
    const double saved = parameter;
    parameter = saved + step;
    const double plus = CrossEntropyLoss(probe, features, labels);
    parameter = saved - step;
    const double minus = CrossEntropyLoss(probe, features, labels);
    parameter = saved;
    const double numeric = (plus - minus) / (2.0 * step);
    const double error = std::abs(analytic_value - numeric) /
                         std::max(std::abs(analytic_value) + std::abs(numeric), 1e-6);
    worst = std::max(worst, error);
  };
  for (std::size_t t = 0; t < probe.layers.size(); ++t) {
    Layer& layer = probe.layers[t];
    for (Eigen::Index i = 0; i < layer.weights.rows(); ++i) {
      for (Eigen::Index j = 0; j < layer.weights.cols(); ++j) {
        compare(layer.weights(i, j), analytic.weights[t](i, j));
      }
    }
    for (Eigen::Index j = 0; j < layer.biases.size(); ++j) {
      compare(layer.biases(j), analytic.biases[t](j));
    }
  }
  return worst;
}

}  // namespace relacq::nn
