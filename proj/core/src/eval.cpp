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

#include "relacq/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "relacq/format.hpp"
#include "relacq/relevance.hpp"

namespace relacq::eval {
namespace {

using acquisition::EpisodeRecord;

double GainOf(int grade, Gain gain) {
  return gain == Gain::kExponential ? std::exp2(static_cast<double>(grade)) - 1.0
                                    : static_cast<double>(grade);
}

double Dcg(std::span<const int> ranked_grades, std::size_t k, Gain gain) {
  double dcg = 0.0;
  const std::size_t cutoff = std::min(k, ranked_grades.size());
  for (std::size_t p = 0; p < cutoff; ++p) {
    dcg += GainOf(ranked_grades[p], gain) / std::log2(static_cast<double>(p) + 2.0);
  }
  return dcg;
}

// SplitMix64 finaliser; decorrelates (run seed, row) pairs.
std::uint64_t MixSeed(std::uint64_t seed, std::uint64_t row) {
  std::uint64_t z = seed * 0x9E3779B97F4A7C15ULL + row + 0x632BE59BD9B4E019ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::string OptionalCost(const std::optional<double>& value) {
  return value ? FormatShortest(*value) : std::string("NA");
}

}  // namespace

double Accuracy(std::span<const int> predictions, std::span<const int> labels) {
  if (predictions.empty()) throw std::invalid_argument("accuracy of an empty set");
  if (predictions.size() != labels.size()) {
    throw std::invalid_argument("predictions and labels differ in length");
  }
  std::size_t correct = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) correct += predictions[i] == labels[i];
  return static_cast<double>(correct) / static_cast<double>(labels.size());
}

std::optional<double> NdcgAtK(const RankedList& list, std::size_t k, Gain gain) {
  if (k == 0) throw std::invalid_argument("NDCG cutoff must be >= 1");
  if (list.scores.size() != list.grades.size()) {
    throw std::invalid_argument("scores and grades differ in length");
  }
  for (const int grade : list.grades) {
    if (grade < 0 || grade > kMaxGrade) {
      throw std::invalid_argument("grade " + std::to_string(grade) + " outside 0.." +
                                  std::to_string(kMaxGrade));
    }
  }
  std::vector<std::size_t> order(list.scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return list.scores[a] > list.scores[b];
  });
  std::vector<int> ranked;
  ranked.reserve(order.size());
  for (const std::size_t i : order) ranked.push_back(list.grades[i]);

  std::vector<int> ideal = list.grades;
  std::sort(ideal.begin(), ideal.end(), std::greater<>());
  const double idcg = Dcg(ideal, k, gain);
  if (idcg == 0.0) return std::nullopt;
  return Dcg(ranked, k, gain) / idcg;
}

NdcgSummary MeanNdcg(std::span<const RankedList> lists, std::size_t k, Gain gain) {
  NdcgSummary summary;
  double total = 0.0;
  for (const RankedList& list : lists) {
    if (const auto ndcg = NdcgAtK(list, k, gain)) {
      total += *ndcg;
      ++summary.queries;
    } else {
      ++summary.excluded;
    }
  }
  if (summary.queries > 0) summary.mean = total / static_cast<double>(summary.queries);
  return summary;
}

double ExpectedGrade(const Eigen::VectorXd& probabilities) {
  double score = 0.0;
  for (Eigen::Index c = 0; c < probabilities.size(); ++c) {
    score += static_cast<double>(c) * probabilities(c);
  }
  return score;
}

std::size_t PredictedClass(const Eigen::VectorXd& prediction) {
  Eigen::Index best = 0;
  prediction.maxCoeff(&best);
  return static_cast<std::size_t>(best);
}

std::vector<CurvePoint> CostCurve(std::span<const EpisodeRecord> episodes,
                                  std::span<const int> labels,
                                  std::span<const double> budgets) {
  if (episodes.empty()) throw std::invalid_argument("cost curve of no episodes");
  if (episodes.size() != labels.size()) {
    throw std::invalid_argument("episodes and labels differ in length");
  }
  const double n = static_cast<double>(episodes.size());
  std::vector<CurvePoint> curve;
  curve.reserve(budgets.size());
  for (const double budget : budgets) {
    std::size_t correct = 0;
    for (std::size_t e = 0; e < episodes.size(); ++e) {
      const std::size_t predicted = PredictedClass(episodes[e].PredictionAtBudget(budget));
      correct += static_cast<int>(predicted) == labels[e];
    }
    CurvePoint point;
    point.cost_budget = budget;
    point.episode_count = episodes.size();
    point.mean_accuracy = static_cast<double>(correct) / n;
    if (episodes.size() > 1) {
      // Sample variance of a 0/1 variable with mean p is n p (1 - p) / (n - 1).
      const double p = point.mean_accuracy;
      point.std_error = std::sqrt(p * (1.0 - p) / (n - 1.0));
    }
    curve.push_back(point);
  }
  return curve;
}

std::vector<NdcgSummary> NdcgCurve(std::span<const EpisodeRecord> episodes,
                                   std::span<const int> grades,
                                   std::span<const std::string> query_ids,
                                   std::span<const double> budgets, std::size_t k,
                                   Gain gain) {
  if (episodes.size() != grades.size() || episodes.size() != query_ids.size()) {
    throw std::invalid_argument("episodes, grades and query ids differ in length");
  }
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t e = 0; e < episodes.size(); ++e) groups[query_ids[e]].push_back(e);
  std::vector<NdcgSummary> curve;
  for (const double budget : budgets) {
    std::vector<RankedList> lists;
    lists.reserve(groups.size());
    for (const auto& [qid, members] : groups) {
      RankedList list;
      for (const std::size_t e : members) {
        list.scores.push_back(ExpectedGrade(episodes[e].PredictionAtBudget(budget)));
        list.grades.push_back(grades[e]);
      }
      lists.push_back(std::move(list));
    }
    curve.push_back(MeanNdcg(lists, k, gain));
  }
  return curve;
}

std::vector<double> EventBudgets(std::span<const EpisodeRecord> episodes) {
  std::vector<double> budgets = {0.0};
  for (const EpisodeRecord& record : episodes) {
    for (const auto& step : record.steps) budgets.push_back(step.cumulative_cost);
  }
  std::sort(budgets.begin(), budgets.end());
  budgets.erase(std::unique(budgets.begin(), budgets.end()), budgets.end());
  return budgets;
}

std::optional<double> CostToReach(std::span<const CurvePoint> curve, double target,
                                  double fraction) {
  for (const CurvePoint& point : curve) {
    if (point.mean_accuracy >= fraction * target) return point.cost_budget;
  }
  return std::nullopt;
}

ComparisonReport CompareStrategies(const nn::Network& network,
                                   const FeatureStatistics& statistics,
                                   const data::Dataset& test,
                                   const ComparisonConfig& config) {
  test.Validate();
  if (test.rows() == 0) throw std::invalid_argument("empty test set");
  if (config.strategies.empty()) throw std::invalid_argument("no strategies to compare");
  if (config.seeds.empty()) throw std::invalid_argument("no seeds given");
  if (test.feature_count() != network.input_dim()) {
    throw std::invalid_argument("test set width does not match the network");
  }
  config.stopping.Validate();
  const relevance::RuleAssignment rules =
      relevance::DefaultRuleAssignment(network, statistics);

  ComparisonReport report;
  {
    std::vector<int> full_predictions;
    for (Eigen::Index r = 0; r < test.features.rows(); ++r) {
      const nn::ForwardTrace trace = nn::Forward(network, test.features.row(r).transpose());
      full_predictions.push_back(static_cast<int>(trace.predicted_class()));
    }
    report.full_feature_accuracy = Accuracy(full_predictions, test.labels);
  }

  const std::size_t rows = test.rows();
  for (const auto strategy : config.strategies) {
    for (const std::uint64_t seed : config.seeds) {
      for (std::size_t r = 0; r < rows; ++r) {
        EpisodeResult result;
        result.episode_id = report.episodes.size();
        result.strategy = strategy;
        result.seed = seed;
        result.instance = r;
        result.true_label = test.labels[r];
        report.episodes.push_back(std::move(result));
      }
    }
  }

  const acquisition::StrategyResources resources{
      .network = network,
      .rules = rules,
      .static_order = config.static_order,
      .head = config.head};
  auto run_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t e = begin; e < end; ++e) {
      EpisodeResult& result = report.episodes[e];
      auto strategy = acquisition::MakeStrategy(result.strategy, resources,
                                                MixSeed(result.seed, result.instance));
      acquisition::RowOracle oracle(
          test.features.row(static_cast<Eigen::Index>(result.instance)).transpose());
      result.record = acquisition::RunEpisode(network, statistics, test.costs, oracle,
                                              *strategy, config.stopping);
    }
  };
  const std::size_t total = report.episodes.size();
  const std::size_t threads = std::max<std::size_t>(1, std::min(config.threads, total));
  if (threads == 1) {
    run_range(0, total);
  } else {
    std::vector<std::jthread> workers;
    const std::size_t chunk = (total + threads - 1) / threads;
    for (std::size_t t = 0; t < threads; ++t) {
      const std::size_t begin = t * chunk;
      const std::size_t end = std::min(total, begin + chunk);
      if (begin < end) workers.emplace_back(run_range, begin, end);
    }
  }

  for (const auto strategy : config.strategies) {
    std::vector<EpisodeRecord> records;
    std::vector<int> labels;
    std::vector<std::string> query_ids;
    double total_cost = 0.0;
    for (const EpisodeResult& result : report.episodes) {
      if (result.strategy != strategy) continue;
      records.push_back(result.record);
      labels.push_back(result.true_label);
      if (!test.query_ids.empty()) query_ids.push_back(test.query_ids[result.instance]);
      total_cost += result.record.total_cost();
    }
    StrategyReport entry;
    entry.strategy = strategy;
    const std::vector<double> events = EventBudgets(records);
    const std::vector<CurvePoint> event_curve = CostCurve(records, labels, events);
    entry.cost_to_80pct = CostToReach(event_curve, report.full_feature_accuracy, 0.8);
    entry.cost_to_90pct = CostToReach(event_curve, report.full_feature_accuracy, 0.9);
    const std::vector<double>& budgets = config.budgets.empty() ? events : config.budgets;
    entry.curve = config.budgets.empty() ? event_curve : CostCurve(records, labels, budgets);
    if (!query_ids.empty()) {
      const auto ndcg =
          NdcgCurve(records, labels, query_ids, budgets, config.ndcg_k, config.gain);
      for (std::size_t b = 0; b < ndcg.size(); ++b) entry.curve[b].mean_ndcg = ndcg[b].mean;
    }
    std::vector<int> final_predictions;
    for (const EpisodeRecord& record : records) {
      final_predictions.push_back(static_cast<int>(PredictedClass(record.final_prediction())));
    }
    entry.final_accuracy = Accuracy(final_predictions, labels);
    entry.mean_total_cost = total_cost / static_cast<double>(records.size());
    report.strategies.push_back(std::move(entry));
  }
  return report;
}

void WriteCurveCsv(const ComparisonReport& report, std::ostream& out) {
  const bool ranking = !report.strategies.empty() && !report.strategies.front().curve.empty() &&
                       report.strategies.front().curve.front().mean_ndcg.has_value();
  out << "strategy,budget,mean_accuracy,episode_count,std_error"
      << (ranking ? ",mean_ndcg\n" : "\n");
  for (const StrategyReport& entry : report.strategies) {
    for (const CurvePoint& point : entry.curve) {
      out << acquisition::StrategyName(entry.strategy) << ','
          << FormatShortest(point.cost_budget) << ',' << FormatShortest(point.mean_accuracy)
          << ',' << point.episode_count << ',' << FormatShortest(point.std_error);
      if (ranking) out << ',' << FormatShortest(point.mean_ndcg.value_or(0.0));
      out << '\n';
    }
  }
}

void WriteSummaryCsv(const ComparisonReport& report, std::ostream& out) {
  out << "strategy,cost_to_80pct,cost_to_90pct,final_accuracy\n";
  for (const StrategyReport& entry : report.strategies) {
    out << acquisition::StrategyName(entry.strategy) << ','
        << OptionalCost(entry.cost_to_80pct) << ',' << OptionalCost(entry.cost_to_90pct)
        << ',' << FormatShortest(entry.final_accuracy) << '\n';
  }
}

void WriteEpisodesCsv(const ComparisonReport& report, const data::Dataset& test,
                      std::ostream& out) {
  out << "episode_id,step,strategy,feature_index,feature_name,feature_cost,"
         "cumulative_cost,relevance_score,predicted_class,confidence,true_label,correct\n";
  for (const EpisodeResult& result : report.episodes) {
    const EpisodeRecord& record = result.record;
    const std::string_view strategy = acquisition::StrategyName(result.strategy);
    for (std::size_t t = 0; t < record.predictions.size(); ++t) {
      const Eigen::VectorXd& prediction = record.predictions[t];
      const std::size_t predicted = PredictedClass(prediction);
      out << result.episode_id << ',' << t << ',' << strategy << ',';
      if (t == 0) {
        out << ",,,0,,";
      } else {
        const auto& step = record.steps[t - 1];
        out << step.feature << ',' << test.feature_names[step.feature] << ','
            << FormatShortest(step.cost) << ',' << FormatShortest(step.cumulative_cost)
            << ',' << FormatShortest(step.score) << ',';
      }
      out << predicted << ',' << FormatShortest(prediction.maxCoeff()) << ','
          << result.true_label << ','
          << (static_cast<int>(predicted) == result.true_label ? 1 : 0) << '\n';
    }
  }
}

}  // namespace relacq::eval
