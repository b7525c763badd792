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

#include "relacq/data.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <stdexcept>

#include "relacq/errors.hpp"
#include "relacq/format.hpp"
#include "relacq/random.hpp"

namespace relacq::data {
namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> SplitCells(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    cells.push_back(Trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::optional<double> ParseNumber(std::string_view cell) {
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::string Where(std::string_view file, std::size_t line) {
  return std::string(file) + " line " + std::to_string(line) + ": ";
}

bool NextLine(std::istream& in, std::string& line, std::size_t& line_number) {
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!Trim(line).empty()) return true;
  }
  return false;
}

std::map<std::string, double, std::less<>> ReadCostTable(std::istream& in) {
  std::string line;
  std::size_t line_number = 0;
  if (!NextLine(in, line, line_number)) throw DataFormatError("cost file is empty");
  const auto header = SplitCells(line);
  if (header.size() != 2 || header[0] != "feature" || header[1] != "cost") {
    throw DataFormatError("cost file header must be 'feature,cost'");
  }
  std::map<std::string, double, std::less<>> costs;
  while (NextLine(in, line, line_number)) {
    const auto cells = SplitCells(line);
    if (cells.size() != 2) {
      throw DataFormatError(Where("cost file", line_number) + "expected 2 cells");
    }
    std::optional<double> cost = ParseNumber(cells[1]);
    if (!cost) {
      if (const auto category = ParseCategory(cells[1])) cost = CategoryCost(*category);
    }
    if (!cost || *cost <= 0.0) {
      throw DataFormatError(Where("cost file", line_number) + "cost '" +
                            std::string(cells[1]) + "' is not a positive number");
    }
    if (!costs.emplace(std::string(cells[0]), *cost).second) {
      throw DataFormatError(Where("cost file", line_number) + "duplicate feature '" +
                            std::string(cells[0]) + "'");
    }
  }
  return costs;
}

// Costs in feature order; every feature needs exactly one cost and the table
// may not name anything else.
CostVector JoinCosts(const std::map<std::string, double, std::less<>>& costs,
                     std::span<const std::string> feature_names) {
  std::vector<double> cost_values;
  for (const std::string& name : feature_names) {
    const auto it = costs.find(name);
    if (it == costs.end()) throw DataFormatError("no cost given for feature '" + name + "'");
    cost_values.push_back(it->second);
  }
  for (const auto& [name, cost] : costs) {
    if (std::find(feature_names.begin(), feature_names.end(), name) == feature_names.end()) {
      throw DataFormatError("cost file names unknown feature '" + name + "'");
    }
  }
  return CostVector(std::move(cost_values));
}

}  // namespace

void Dataset::Validate() const {
  const auto m = static_cast<Eigen::Index>(feature_names.size());
  if (features.cols() != m || static_cast<std::size_t>(features.rows()) != labels.size()) {
    throw std::invalid_argument("dataset shape is inconsistent");
  }
  if (costs.size() != feature_names.size()) {
    throw std::invalid_argument("dataset has a cost vector of the wrong length");
  }
  if (!query_ids.empty() && query_ids.size() != labels.size()) {
    throw std::invalid_argument("dataset has query ids of the wrong length");
  }
  for (const int label : labels) {
    if (label < 0 || static_cast<std::size_t>(label) >= n_classes) {
      throw std::invalid_argument("label " + std::to_string(label) + " out of range");
    }
  }
  if (!features.allFinite()) throw std::invalid_argument("dataset has non-finite values");
}

Dataset Dataset::Subset(std::span<const std::size_t> rows) const {
  Dataset out;
  out.feature_names = feature_names;
  out.n_classes = n_classes;
  out.costs = costs;
  out.features.resize(static_cast<Eigen::Index>(rows.size()), features.cols());
  out.labels.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out.features.row(static_cast<Eigen::Index>(r)) =
        features.row(static_cast<Eigen::Index>(rows[r]));
    out.labels.push_back(labels[rows[r]]);
    if (!query_ids.empty()) out.query_ids.push_back(query_ids[rows[r]]);
  }
  return out;
}

std::vector<std::size_t> Dataset::ClassCounts() const {
  std::vector<std::size_t> counts(n_classes, 0);
  for (const int label : labels) ++counts[static_cast<std::size_t>(label)];
  return counts;
}

double CategoryCost(FeatureCategory category) {
  switch (category) {
    case FeatureCategory::kDemographics: return 1.0;
    case FeatureCategory::kQuestionnaire: return 5.0;
    case FeatureCategory::kPhysicalExamination: return 10.0;
    case FeatureCategory::kLaboratory: return 100.0;
  }
  return 1.0;
}

std::optional<FeatureCategory> ParseCategory(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "demographics") return FeatureCategory::kDemographics;
  if (lower == "questionnaire") return FeatureCategory::kQuestionnaire;
  if (lower == "physical") return FeatureCategory::kPhysicalExamination;
  if (lower == "laboratory") return FeatureCategory::kLaboratory;
  return std::nullopt;
}

Dataset ReadDataset(std::istream& data, std::istream& costs_in) {
  const auto costs = ReadCostTable(costs_in);

  std::string line;
  std::size_t line_number = 0;
  if (!NextLine(data, line, line_number)) throw DataFormatError("data file is empty");
  const auto header = SplitCells(line);
  std::optional<std::size_t> label_column;
  std::optional<std::size_t> qid_column;
  std::vector<std::size_t> feature_columns;
  Dataset dataset;
  std::set<std::string, std::less<>> seen;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == "label") {
      if (label_column) throw DataFormatError("data file has two label columns");
      label_column = c;
    } else if (header[c] == "qid") {
      qid_column = c;
    } else {
      if (header[c].empty()) throw DataFormatError("data file has an unnamed column");
      if (!seen.emplace(header[c]).second) {
        throw DataFormatError("duplicate feature name '" + std::string(header[c]) + "'");
      }
      feature_columns.push_back(c);
      dataset.feature_names.emplace_back(header[c]);
    }
  }
  if (!label_column) throw DataFormatError("data file has no 'label' column");
  if (feature_columns.empty()) throw DataFormatError("data file has no feature columns");

  dataset.costs = JoinCosts(costs, dataset.feature_names);

  std::vector<double> values;
  int max_label = -1;
  while (NextLine(data, line, line_number)) {
    const auto cells = SplitCells(line);
    if (cells.size() != header.size()) {
      throw DataFormatError(Where("data file", line_number) + "expected " +
                            std::to_string(header.size()) + " cells, found " +
                            std::to_string(cells.size()));
    }
    for (const std::size_t c : feature_columns) {
      const auto value = ParseNumber(cells[c]);
      if (!value) {
        throw DataFormatError(Where("data file", line_number) + "non-numeric cell '" +
                              std::string(cells[c]) + "' in column " +
                              std::string(header[c]));
      }
      values.push_back(*value);
    }
    int label = 0;
    const std::string_view label_cell = cells[*label_column];
    const auto [ptr, ec] =
        std::from_chars(label_cell.data(), label_cell.data() + label_cell.size(), label);
    if (ec != std::errc() || ptr != label_cell.data() + label_cell.size() || label < 0) {
      throw DataFormatError(Where("data file", line_number) + "label '" +
                            std::string(label_cell) + "' is not a nonnegative integer");
    }
    dataset.labels.push_back(label);
    max_label = std::max(max_label, label);
    if (qid_column) dataset.query_ids.emplace_back(cells[*qid_column]);
  }
  const auto m = static_cast<Eigen::Index>(feature_columns.size());
  const auto n = static_cast<Eigen::Index>(dataset.labels.size());
  dataset.features =
      Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
          values.data(), n, m);
  dataset.n_classes = static_cast<std::size_t>(max_label + 1);
  return dataset;
}

CostVector ReadCosts(std::istream& costs, std::span<const std::string> feature_names) {
  return JoinCosts(ReadCostTable(costs), feature_names);
}

Dataset LoadDataset(const std::filesystem::path& data_path,
                    const std::filesystem::path& cost_path) {
  std::ifstream data(data_path);
  if (!data) throw DataFormatError("cannot open data file " + data_path.string());
  std::ifstream costs(cost_path);
  if (!costs) throw DataFormatError("cannot open cost file " + cost_path.string());
  return ReadDataset(data, costs);
}

void WriteDataCsv(const Dataset& dataset, std::ostream& out) {
  const bool ranking = !dataset.query_ids.empty();
  if (ranking) out << "qid,";
  for (const std::string& name : dataset.feature_names) out << name << ',';
  out << "label\n";
  for (std::size_t r = 0; r < dataset.rows(); ++r) {
    if (ranking) out << dataset.query_ids[r] << ',';
    for (Eigen::Index c = 0; c < dataset.features.cols(); ++c) {
      out << FormatShortest(dataset.features(static_cast<Eigen::Index>(r), c)) << ',';
    }
    out << dataset.labels[r] << '\n';
  }
}

void WriteCostCsv(const Dataset& dataset, std::ostream& out) {
  out << "feature,cost\n";
  for (std::size_t i = 0; i < dataset.feature_count(); ++i) {
    out << dataset.feature_names[i] << ',' << FormatShortest(dataset.costs[i]) << '\n';
  }
}

Eigen::VectorXd ParsePartialRow(std::string_view line, std::size_t features) {
  const auto cells = SplitCells(Trim(line));
  if (cells.size() != features) {
    throw DataFormatError("row has " + std::to_string(cells.size()) +
                          " cells, expected " + std::to_string(features));
  }
  Eigen::VectorXd row(static_cast<Eigen::Index>(features));
  for (std::size_t i = 0; i < features; ++i) {
    if (cells[i].empty() || cells[i] == "?" || cells[i] == "NA") {
      row(static_cast<Eigen::Index>(i)) = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    const auto value = ParseNumber(cells[i]);
    if (!value) {
      throw DataFormatError("non-numeric cell '" + std::string(cells[i]) + "'");
    }
    row(static_cast<Eigen::Index>(i)) = *value;
  }
  return row;
}

NormalizationSpec FitNormalization(const Eigen::MatrixXd& features) {
  if (features.rows() == 0) throw std::invalid_argument("cannot normalize empty data");
  return {features.colwise().minCoeff().transpose(),
          features.colwise().maxCoeff().transpose()};
}

Dataset ApplyNormalization(const Dataset& dataset, const NormalizationSpec& spec) {
  if (spec.size() != dataset.feature_count()) {
    throw std::invalid_argument("normalization spec does not match dataset width");
  }
  Dataset out = dataset;
  for (Eigen::Index r = 0; r < out.features.rows(); ++r) {
    for (Eigen::Index c = 0; c < out.features.cols(); ++c) {
      out.features(r, c) = spec.Apply(static_cast<std::size_t>(c), dataset.features(r, c));
    }
  }
  return out;
}

std::pair<Dataset, NormalizationSpec> Normalize(const Dataset& dataset) {
  NormalizationSpec spec = FitNormalization(dataset.features);
  return {ApplyNormalization(dataset, spec), std::move(spec)};
}

std::pair<Dataset, Dataset> Split(const Dataset& dataset, double train_fraction,
                                  std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw std::invalid_argument("train fraction must lie in (0, 1)");
  }
  std::vector<std::size_t> order(dataset.rows());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));
  const auto train_rows = static_cast<std::size_t>(
      std::llround(train_fraction * static_cast<double>(dataset.rows())));
  if (train_rows == 0 || train_rows == dataset.rows()) {
    throw std::invalid_argument("split would leave one side empty");
  }
  const std::span<const std::size_t> all(order);
  return {dataset.Subset(all.first(train_rows)), dataset.Subset(all.subspan(train_rows))};
}

Dataset OversampleBalance(const Dataset& dataset, std::uint64_t seed) {
  const std::vector<std::size_t> counts = dataset.ClassCounts();
  if (counts.empty()) throw std::invalid_argument("dataset has no classes");
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] == 0) {
      throw std::invalid_argument("class " + std::to_string(c) + " is absent");
    }
  }
  const std::size_t target = *std::max_element(counts.begin(), counts.end());
  std::vector<std::vector<std::size_t>> members(counts.size());
  for (std::size_t r = 0; r < dataset.rows(); ++r) {
    members[static_cast<std::size_t>(dataset.labels[r])].push_back(r);
  }
  std::vector<std::size_t> rows(dataset.rows());
  std::iota(rows.begin(), rows.end(), 0);
  Rng rng(seed);
  for (std::size_t c = 0; c < counts.size(); ++c) {
    for (std::size_t k = counts[c]; k < target; ++k) {
      rows.push_back(members[c][rng.index(members[c].size())]);
    }
  }
  return dataset.Subset(rows);
}

FeatureStatistics ComputeFeatureStatistics(const Dataset& train, BoundsMode bounds) {
  if (train.rows() == 0) throw std::invalid_argument("cannot estimate statistics of empty data");
  FeatureStatistics statistics;
  statistics.means = train.features.colwise().mean().transpose();
  const auto m = train.features.cols();
  if (bounds == BoundsMode::kUnit) {
    statistics.lower = Eigen::VectorXd::Zero(m);
    statistics.upper = Eigen::VectorXd::Ones(m);
  } else {
    statistics.lower = train.features.colwise().minCoeff().transpose();
    statistics.upper = train.features.colwise().maxCoeff().transpose();
  }
  // The mean of values in [a, b] can round a hair outside it.
  statistics.means = statistics.means.cwiseMax(statistics.lower).cwiseMin(statistics.upper);
  statistics.Validate();
  return statistics;
}

std::string_view CostProfileName(CostProfile profile) {
  switch (profile) {
    case CostProfile::kUniform: return "uniform";
    case CostProfile::kTiered: return "tiered";
    case CostProfile::kRandom: return "random";
  }
  return "uniform";
}

CostProfile ParseCostProfile(std::string_view name) {
  if (name == "uniform") return CostProfile::kUniform;
  if (name == "tiered") return CostProfile::kTiered;
  if (name == "random") return CostProfile::kRandom;
  throw std::invalid_argument("unknown cost profile '" + std::string(name) + "'");
}

void SyntheticSpec::Validate() const {
  if (features == 0) throw std::invalid_argument("synthetic data needs at least one feature");
  if (classes < 2) throw std::invalid_argument("synthetic data needs at least two classes");
  if (rows < classes) throw std::invalid_argument("synthetic data needs a row per class");
  if (!(noise >= 0.0)) throw std::invalid_argument("noise must be >= 0");
  if (informative.empty()) {
    if (informative_count == 0 || informative_count > features) {
      throw std::invalid_argument("informative count must lie in [1, features]");
    }
  } else {
    std::set<std::size_t> unique(informative.begin(), informative.end());
    if (unique.size() != informative.size()) {
      throw std::invalid_argument("informative indices repeat");
    }
    if (*unique.rbegin() >= features) {
      throw std::invalid_argument("informative index out of range");
    }
  }
  if (!costs.empty() && costs.size() != features) {
    throw std::invalid_argument("explicit cost list must have one entry per feature");
  }
}

int SyntheticDataset::Classify(const Eigen::VectorXd& row) const {
  double score = 0.0;
  for (const std::size_t i : informative) score += row(static_cast<Eigen::Index>(i));
  score /= static_cast<double>(informative.size());
  return static_cast<int>(std::upper_bound(thresholds.begin(), thresholds.end(), score) -
                          thresholds.begin());
}

SyntheticDataset GenerateSynthetic(const SyntheticSpec& spec) {
  spec.Validate();
  Rng rng(spec.seed);
  SyntheticDataset out;
  out.informative = spec.informative;
  if (out.informative.empty()) {
    std::vector<std::size_t> all(spec.features);
    std::iota(all.begin(), all.end(), 0);
    rng.shuffle(std::span<std::size_t>(all));
    out.informative.assign(all.begin(),
                           all.begin() + static_cast<std::ptrdiff_t>(spec.informative_count));
    std::sort(out.informative.begin(), out.informative.end());
  }

  const auto n = static_cast<Eigen::Index>(spec.rows);
  const auto m = static_cast<Eigen::Index>(spec.features);
  Dataset& dataset = out.dataset;
  dataset.features.resize(n, m);
  std::vector<double> scores(spec.rows);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < m; ++c) dataset.features(r, c) = rng.uniform01();
    double score = 0.0;
    for (const std::size_t i : out.informative) {
      score += dataset.features(r, static_cast<Eigen::Index>(i));
    }
    score /= static_cast<double>(out.informative.size());
    if (spec.noise > 0.0) score += spec.noise * rng.normal();
    scores[static_cast<std::size_t>(r)] = score;
  }

  std::vector<double> sorted = scores;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t k = 1; k < spec.classes; ++k) {
    // Midpoint between neighbouring order statistics keeps every sample
    // strictly on one side of the threshold.
    const std::size_t at = k * spec.rows / spec.classes;
    out.thresholds.push_back(0.5 * (sorted[at - 1] + sorted[at]));
  }
  dataset.labels.reserve(spec.rows);
  for (const double score : scores) {
    dataset.labels.push_back(static_cast<int>(
        std::upper_bound(out.thresholds.begin(), out.thresholds.end(), score) -
        out.thresholds.begin()));
  }
  dataset.n_classes = spec.classes;

  for (std::size_t i = 0; i < spec.features; ++i) {
    dataset.feature_names.push_back("f" + std::to_string(i));
  }
  std::vector<double> costs = spec.costs;
  if (costs.empty()) {
    for (std::size_t i = 0; i < spec.features; ++i) {
      switch (spec.cost_profile) {
        case CostProfile::kUniform: costs.push_back(1.0); break;
        case CostProfile::kTiered: {
          constexpr FeatureCategory kCycle[] = {
              FeatureCategory::kDemographics, FeatureCategory::kQuestionnaire,
              FeatureCategory::kPhysicalExamination, FeatureCategory::kLaboratory};
          costs.push_back(CategoryCost(kCycle[i % 4]));
          break;
        }
        case CostProfile::kRandom:
          costs.push_back(static_cast<double>(1 + rng.index(100)));
          break;
      }
    }
  }
  dataset.costs = CostVector(std::move(costs));
  dataset.Validate();
  return out;
}

}  // namespace relacq::data
