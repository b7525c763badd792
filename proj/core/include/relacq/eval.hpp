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

#ifndef RELACQ_EVAL_HPP_
#define RELACQ_EVAL_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "relacq/acquisition.hpp"
#include "relacq/data.hpp"
#include "relacq/features.hpp"
#include "relacq/nn.hpp"

namespace relacq::eval {

// Fraction of exact matches. Throws std::invalid_argument on empty or
// unequal inputs.
double Accuracy(std::span<const int> predictions, std::span<const int> labels);

enum class Gain {
  kExponential,  // 2^grade - 1
  kLinear,       // grade
};

// Scores and graded relevance (0..kMaxGrade) of the documents of one query.
struct RankedList {
  std::vector<double> scores;
  std::vector<int> grades;
};

inline constexpr int kMaxGrade = 4;

// DCG@k / IDCG@k with discount log2(position + 1), positions 1-based.
// Documents are ranked by descending score; equal scores keep input order.
// Returns nullopt for a query whose ideal DCG is 0.
std::optional<double> NdcgAtK(const RankedList& list, std::size_t k,
                              Gain gain = Gain::kExponential);

struct NdcgSummary {
  double mean = 0.0;
  std::size_t queries = 0;   // queries averaged
  std::size_t excluded = 0;  // queries with zero ideal DCG
};

NdcgSummary MeanNdcg(std::span<const RankedList> lists, std::size_t k,
                     Gain gain = Gain::kExponential);

// Σ_c c · p(c): a ranking score from a graded classifier.
double ExpectedGrade(const Eigen::VectorXd& probabilities);

struct CurvePoint {
  double cost_budget = 0.0;
  double mean_accuracy = 0.0;
  std::size_t episode_count = 0;
  double std_error = 0.0;
  std::optional<double> mean_ndcg;
};

std::size_t PredictedClass(const Eigen::VectorXd& prediction);

// For every budget b, each episode contributes the prediction after its last
// step with cumulative cost <= b; accuracy is averaged over episodes with
// the sample standard error.
std::vector<CurvePoint> CostCurve(
    std::span<const acquisition::EpisodeRecord> episodes,
    std::span<const int> labels, std::span<const double> budgets);

// Mean NDCG@k per budget, grouping episodes by query id and scoring each
// document by its expected grade.
std::vector<NdcgSummary> NdcgCurve(
    std::span<const acquisition::EpisodeRecord> episodes,
    std::span<const int> grades, std::span<const std::string> query_ids,
    std::span<const double> budgets, std::size_t k, Gain gain = Gain::kExponential);

// {0} ∪ every cumulative cost reached by any episode, ascending.
std::vector<double> EventBudgets(std::span<const acquisition::EpisodeRecord> episodes);

struct ComparisonConfig {
  std::vector<acquisition::StrategyKind> strategies;
  acquisition::StoppingRule stopping;
  std::vector<std::uint64_t> seeds = {0};
  // Curve budgets; empty means EventBudgets of each strategy.
  std::vector<double> budgets;
  std::vector<std::size_t> static_order;
  acquisition::OutputHead head = acquisition::OutputHead::kProbabilities;
  std::size_t ndcg_k = 5;
  Gain gain = Gain::kExponential;
  std::size_t threads = 1;
};

struct EpisodeResult {
  std::size_t episode_id = 0;
  acquisition::StrategyKind strategy = acquisition::StrategyKind::kDirect;
  std::uint64_t seed = 0;
  std::size_t instance = 0;
  int true_label = 0;
  acquisition::EpisodeRecord record;
};

struct StrategyReport {
  acquisition::StrategyKind strategy = acquisition::StrategyKind::kDirect;
  std::vector<CurvePoint> curve;
  // Smallest cost at which accuracy reaches 80% / 90% of the full-feature
  // accuracy, searched over EventBudgets.
  std::optional<double> cost_to_80pct;
  std::optional<double> cost_to_90pct;
  double final_accuracy = 0.0;
  double mean_total_cost = 0.0;
};

struct ComparisonReport {
  double full_feature_accuracy = 0.0;
  std::vector<StrategyReport> strategies;
  std::vector<EpisodeResult> episodes;
};

// Smallest budget on `curve` whose accuracy reaches `fraction` of `target`.
std::optional<double> CostToReach(std::span<const CurvePoint> curve, double target,
                                  double fraction);

// Episodes for every (strategy, seed, test row), in that nesting order.
// `test` must already be normalized. Per-episode RNG seeds derive from the
// run seed and the row index, so results do not depend on `threads`.
ComparisonReport CompareStrategies(const nn::Network& network,
                                   const FeatureStatistics& statistics,
                                   const data::Dataset& test,
                                   const ComparisonConfig& config);

// strategy,budget,mean_accuracy,episode_count,std_error[,mean_ndcg]
void WriteCurveCsv(const ComparisonReport& report, std::ostream& out);
// strategy,cost_to_80pct,cost_to_90pct,final_accuracy
void WriteSummaryCsv(const ComparisonReport& report, std::ostream& out);
// One row per step (step 0 is the imputation-only state).
void WriteEpisodesCsv(const ComparisonReport& report, const data::Dataset& test,
                      std::ostream& out);

}  // namespace relacq::eval

#endif  // RELACQ_EVAL_HPP_
