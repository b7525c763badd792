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

#ifndef RELACQ_MODEL_IO_HPP_
#define RELACQ_MODEL_IO_HPP_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "relacq/features.hpp"
#include "relacq/nn.hpp"

namespace relacq {

inline constexpr int kModelFormatVersion = 1;

// A trained network together with everything needed to run acquisition on
// raw inputs.
struct Model {
  nn::Network network;
  std::vector<std::string> feature_names;
  FeatureStatistics statistics;
  std::optional<NormalizationSpec> normalization;
  std::optional<CostVector> costs;
  // Feature order for the static baseline, ranked on the training split.
  std::vector<std::size_t> static_order;

  std::size_t n_classes() const { return network.output_dim(); }
  // Throws std::invalid_argument when the parts disagree on feature count.
  void Validate() const;
};

// JSON text; every double is written with 17 significant digits so that
// reading and re-writing reproduces the file byte for byte.
void WriteModel(const Model& model, std::ostream& out);
// Throws ModelVersionError for a foreign format_version and ModelFormatError
// for anything else malformed.
Model ReadModel(std::istream& in);

void SaveModel(const Model& model, const std::filesystem::path& path);
Model LoadModel(const std::filesystem::path& path);

}  // namespace relacq

#endif  // RELACQ_MODEL_IO_HPP_
