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

#ifndef RELACQ_DATA_HPP_
#define RELACQ_DATA_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "relacq/features.hpp"

namespace relacq::data {

// Labeled examples with per-feature costs. One example per row of
// `features`; `labels` lie in [0, n_classes).
struct Dataset {
  std::vector<std::string> feature_names;
  Eigen::MatrixXd features;
  std::vector<int> labels;
  std::size_t n_classes = 0;
  CostVector costs;
  // Query id per row for ranking data (`qid` column); empty otherwise.
  std::vector<std::string> query_ids;

  std::size_t rows() const { return labels.size(); }
  std::size_t feature_count() const { return feature_names.size(); }

  // Throws std::invalid_argument on shape mismatches, out-of-range labels or
  // non-finite values.
  void Validate() const;
  Dataset Subset(std::span<const std::size_t> rows) const;
  // Row counts per class, length n_classes.
  std::vector<std::size_t> ClassCounts() const;
};

// Cost schedule for health-survey style features.
enum class FeatureCategory {
  kDemographics,          // 1
  kQuestionnaire,         // 5
  kPhysicalExamination,   // 10
  kLaboratory,            // 100
};

double CategoryCost(FeatureCategory category);
// Accepts demographics, questionnaire, physical, laboratory (case-insensitive).
std::optional<FeatureCategory> ParseCategory(std::string_view name);

// CSV data file: header of feature names plus a `label` column and an
// optional `qid` column. Cost file: `feature,cost` where cost is a positive
// number or a category name. Throws DataFormatError on schema problems.
Dataset ReadDataset(std::istream& data, std::istream& costs);
// Reads a cost file on its own, ordered by `feature_names`.
CostVector ReadCosts(std::istream& costs, std::span<const std::string> feature_names);
Dataset LoadDataset(const std::filesystem::path& data_path,
                    const std::filesystem::path& cost_path);

void WriteDataCsv(const Dataset& dataset, std::ostream& out);
void WriteCostCsv(const Dataset& dataset, std::ostream& out);

// Splits a CSV row of raw values; empty cells become NaN (unknown).
Eigen::VectorXd ParsePartialRow(std::string_view line, std::size_t features);

NormalizationSpec FitNormalization(const Eigen::MatrixXd& features);
// Maps every feature through `spec`, clipping to [0, 1].
Dataset ApplyNormalization(const Dataset& dataset, const NormalizationSpec& spec);
std::pair<Dataset, NormalizationSpec> Normalize(const Dataset& dataset);

// Seeded shuffle, then the first round(fraction * rows) rows go to train.
std::pair<Dataset, Dataset> Split(const Dataset& dataset, double train_fraction,
                                  std::uint64_t seed);

// Resamples minority classes with replacement up to the largest class count.
// Original rows come first, resampled ones are appended.
Dataset OversampleBalance(const Dataset& dataset, std::uint64_t seed);

enum class BoundsMode {
  kUnit,       // [0, 1], the range normalization guarantees
  kEmpirical,  // per-feature min/max of the training rows
};

FeatureStatistics ComputeFeatureStatistics(const Dataset& train,
                                           BoundsMode bounds = BoundsMode::kUnit);

enum class CostProfile {
  kUniform,  // every feature costs 1
  kTiered,   // features cycle through 1, 5, 10, 100
  kRandom,   // integer costs drawn uniformly from [1, 100]
};

std::string_view CostProfileName(CostProfile profile);
CostProfile ParseCostProfile(std::string_view name);

struct SyntheticSpec {
  std::size_t features = 20;
  std::size_t classes = 2;
  // Features the label depends on. Empty means "pick `informative_count`
  // positions with the seed".
  std::vector<std::size_t> informative;
  std::size_t informative_count = 3;
  double noise = 0.0;
  CostProfile cost_profile = CostProfile::kUniform;
  // Overrides the profile when non-empty; length must equal `features`.
  std::vector<double> costs;
  std::size_t rows = 2000;
  std::uint64_t seed = 0;

  void Validate() const;
};

// Features are iid U[0, 1]. The label thresholds s = mean of the informative
// features + noise * N(0, 1) at the empirical k/n quantiles of s, so classes
// are balanced.
struct SyntheticDataset {
  Dataset dataset;
  std::vector<std::size_t> informative;
  std::vector<double> thresholds;  // n_classes - 1, ascending

  // The generating rule evaluated without noise.
  int Classify(const Eigen::VectorXd& row) const;
};

SyntheticDataset GenerateSynthetic(const SyntheticSpec& spec);

}  // namespace relacq::data

#endif  // RELACQ_DATA_HPP_
