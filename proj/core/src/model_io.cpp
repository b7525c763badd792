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

#include "relacq/model_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "relacq/errors.hpp"
#include "relacq/format.hpp"

namespace relacq {
namespace {

using Json = nlohmann::json;

template <typename Vec>
void WriteArray(std::ostream& out, const Vec& values) {
  out << '[';
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(values.size()); ++i) {
    if (i > 0) out << ", ";
    out << Format17(values[static_cast<std::size_t>(i)]);
  }
  out << ']';
}

void WriteEigen(std::ostream& out, const Eigen::VectorXd& values) {
  out << '[';
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (i > 0) out << ", ";
    out << Format17(values(i));
  }
  out << ']';
}

const Json& Field(const Json& object, const char* key) {
  const auto it = object.find(key);
  if (it == object.end()) {
    throw ModelFormatError(std::string("model file is missing '") + key + "'");
  }
  return *it;
}

Eigen::VectorXd ReadVector(const Json& object, const char* key) {
  const Json& array = Field(object, key);
  if (!array.is_array()) {
    throw ModelFormatError(std::string("'") + key + "' must be an array");
  }
  Eigen::VectorXd out(static_cast<Eigen::Index>(array.size()));
  for (std::size_t i = 0; i < array.size(); ++i) {
    if (!array[i].is_number()) {
      throw ModelFormatError(std::string("'") + key + "' holds a non-number");
    }
    out(static_cast<Eigen::Index>(i)) = array[i].get<double>();
  }
  return out;
}

std::size_t ReadDim(const Json& object, const char* key) {
  const Json& value = Field(object, key);
  if (!value.is_number_unsigned()) {
    throw ModelFormatError(std::string("'") + key + "' must be a positive integer");
  }
  return value.get<std::size_t>();
}

}  // namespace

void Model::Validate() const {
  network.Validate();
  statistics.Validate();
  const std::size_t m = network.input_dim();
  if (feature_names.size() != m || statistics.size() != m) {
    throw std::invalid_argument("model parts disagree on the feature count");
  }
  if (normalization && normalization->size() != m) {
    throw std::invalid_argument("normalization spec does not match the feature count");
  }
  if (costs && costs->size() != m) {
    throw std::invalid_argument("cost vector does not match the feature count");
  }
  if (!static_order.empty()) {
    std::vector<bool> seen(m, false);
    for (const std::size_t i : static_order) {
      if (i >= m || seen[i]) {
        throw std::invalid_argument("static order is not a permutation of the features");
      }
      seen[i] = true;
    }
    if (static_order.size() != m) {
      throw std::invalid_argument("static order is not a permutation of the features");
    }
  }
}

void WriteModel(const Model& model, std::ostream& out) {
  model.Validate();
  out << "{\n  \"format_version\": " << kModelFormatVersion << ",\n";
  out << "  \"feature_names\": [";
  for (std::size_t i = 0; i < model.feature_names.size(); ++i) {
    if (i > 0) out << ", ";
    out << Json(model.feature_names[i]).dump();
  }
  out << "],\n  \"feature_means\": ";
  WriteEigen(out, model.statistics.means);
  out << ",\n  \"feature_lower\": ";
  WriteEigen(out, model.statistics.lower);
  out << ",\n  \"feature_upper\": ";
  WriteEigen(out, model.statistics.upper);
  if (model.normalization) {
    out << ",\n  \"normalization\": {\"min\": ";
    WriteEigen(out, model.normalization->min);
    out << ", \"max\": ";
    WriteEigen(out, model.normalization->max);
    out << '}';
  }
  if (model.costs) {
    out << ",\n  \"costs\": ";
    WriteArray(out, model.costs->values());
  }
  if (!model.static_order.empty()) {
    out << ",\n  \"static_order\": [";
    for (std::size_t i = 0; i < model.static_order.size(); ++i) {
      out << (i > 0 ? ", " : "") << model.static_order[i];
    }
    out << ']';
  }
  out << ",\n  \"layers\": [";
  for (std::size_t t = 0; t < model.network.layers.size(); ++t) {
    const nn::Layer& layer = model.network.layers[t];
    out << (t > 0 ? ",\n" : "\n") << "    {\"input_dim\": " << layer.spec.input_dim
        << ", \"output_dim\": " << layer.spec.output_dim << ", \"activation\": \""
        << nn::ActivationName(layer.spec.activation) << "\",\n     \"weights\": [";
    for (Eigen::Index i = 0; i < layer.weights.rows(); ++i) {
      out << (i > 0 ? ",\n                 " : "");
      WriteEigen(out, layer.weights.row(i).transpose());
    }
    out << "],\n     \"biases\": ";
    WriteEigen(out, layer.biases);
    out << '}';
  }
  out << "\n  ]\n}\n";
}

Model ReadModel(std::istream& in) {
  Json root;
  try {
    root = Json::parse(in);
  } catch (const Json::exception& e) {
    throw ModelFormatError(std::string("corrupt model file: ") + e.what());
  }
  if (!root.is_object()) throw ModelFormatError("model file is not a JSON object");
  const Json& version = Field(root, "format_version");
  if (!version.is_number_integer() || version.get<int>() != kModelFormatVersion) {
    throw ModelVersionError("unsupported model format_version " + version.dump() +
                            " (expected " + std::to_string(kModelFormatVersion) + ")");
  }

  Model model;
  const Json& names = Field(root, "feature_names");
  if (!names.is_array()) throw ModelFormatError("'feature_names' must be an array");
  for (const Json& name : names) {
    if (!name.is_string()) throw ModelFormatError("feature names must be strings");
    model.feature_names.push_back(name.get<std::string>());
  }
  model.statistics.means = ReadVector(root, "feature_means");
  model.statistics.lower = ReadVector(root, "feature_lower");
  model.statistics.upper = ReadVector(root, "feature_upper");
  if (const auto it = root.find("normalization"); it != root.end()) {
    model.normalization = NormalizationSpec{ReadVector(*it, "min"), ReadVector(*it, "max")};
  }
  if (root.contains("costs")) {
    const Eigen::VectorXd costs = ReadVector(root, "costs");
    try {
      model.costs = CostVector(std::vector<double>(costs.begin(), costs.end()));
    } catch (const std::invalid_argument& e) {
      throw ModelFormatError(e.what());
    }
  }

  if (const auto it = root.find("static_order"); it != root.end()) {
    if (!it->is_array()) throw ModelFormatError("'static_order' must be an array");
    for (const Json& index : *it) {
      if (!index.is_number_unsigned()) {
        throw ModelFormatError("'static_order' must hold feature indices");
      }
      model.static_order.push_back(index.get<std::size_t>());
    }
  }

  const Json& layers = Field(root, "layers");
  if (!layers.is_array() || layers.empty()) {
    throw ModelFormatError("'layers' must be a non-empty array");
  }
  for (const Json& entry : layers) {
    nn::Layer layer;
    layer.spec.input_dim = ReadDim(entry, "input_dim");
    layer.spec.output_dim = ReadDim(entry, "output_dim");
    const Json& activation = Field(entry, "activation");
    try {
      layer.spec.activation = nn::ParseActivation(activation.get<std::string>());
    } catch (const std::exception&) {
      throw ModelFormatError("layer activation must be 'relu' or 'linear'");
    }
    const Json& rows = Field(entry, "weights");
    if (!rows.is_array() || rows.size() != layer.spec.input_dim) {
      throw ModelFormatError("weights must have input_dim rows");
    }
    layer.weights.resize(static_cast<Eigen::Index>(layer.spec.input_dim),
                         static_cast<Eigen::Index>(layer.spec.output_dim));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const Json& row = rows[i];
      if (!row.is_array() || row.size() != layer.spec.output_dim) {
        throw ModelFormatError("weight rows must have output_dim entries");
      }
      for (std::size_t j = 0; j < row.size(); ++j) {
        if (!row[j].is_number()) throw ModelFormatError("weights hold a non-number");
        layer.weights(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            row[j].get<double>();
      }
    }
    layer.biases = ReadVector(entry, "biases");
    model.network.layers.push_back(std::move(layer));
  }
  try {
    model.Validate();
  } catch (const std::invalid_argument& e) {
    throw ModelFormatError(std::string("inconsistent model file: ") + e.what());
  }
  return model;
}

void SaveModel(const Model& model, const std::filesystem::path& path) {
  std::ostringstream buffer;
  WriteModel(model, buffer);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write model file " + path.string());
  out << buffer.str();
  if (!out) throw Error("failed writing model file " + path.string());
}

Model LoadModel(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelFormatError("cannot open model file " + path.string());
  return ReadModel(in);
}

}  // namespace relacq
