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

#ifndef RELACQ_ACQUISITION_HPP_
#define RELACQ_ACQUISITION_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "relacq/features.hpp"
#include "relacq/nn.hpp"
#include "relacq/random.hpp"
#include "relacq/relevance.hpp"

namespace relacq::acquisition {

// x_filled = k ⊙ x_partial + (1 - k) ⊙ E[x]. `known` must be 0/1; entries of
// `partial` at unknown positions are ignored (they may be NaN).
Eigen::VectorXd Impute(const Eigen::VectorXd& partial,
                       const Eigen::VectorXd& known,
                       const FeatureStatistics& statistics);

// r̂_i = (1 - k_i) · |r_i| / c_i. Known features score exactly 0.
Eigen::VectorXd AdjustedRelevance(const Eigen::VectorXd& relevance,
                                  const Eigen::VectorXd& known,
                                  const CostVector& costs);

struct AcquisitionEvent {
  std::size_t step = 0;  // t before the acquisition
  std::size_t feature = 0;
  double cost = 0.0;
  double cumulative_cost = 0.0;
  double score = 0.0;
};

// What is known about one instance at step t.
class AcquisitionState {
 public:
  AcquisitionState(FeatureStatistics statistics, CostVector costs);

  std::size_t feature_count() const { return costs_.size(); }
  const Eigen::VectorXd& partial() const { return partial_; }  // NaN = unknown
  const Eigen::VectorXd& known() const { return known_; }      // k
  const Eigen::VectorXd& filled() const { return filled_; }
  bool is_known(std::size_t feature) const;
  std::size_t step() const { return history_.size(); }
  double cumulative_cost() const { return cumulative_cost_; }
  const std::vector<AcquisitionEvent>& history() const { return history_; }
  const FeatureStatistics& statistics() const { return statistics_; }
  const CostVector& costs() const { return costs_; }

  bool exhausted() const { return step() == feature_count(); }
  std::vector<std::size_t> unknown_features() const;

  // Σ c_i k_i, summed in index order, as it would be after also acquiring
  // `feature`.
  double CostIfAcquired(std::size_t feature) const;

  // Records the revealed value. Throws std::invalid_argument when the feature
  // is already known, out of range or the value is non-finite.
  void Acquire(std::size_t feature, double value, double score);

 private:
  double CostOf(const Eigen::VectorXd& known) const;

  FeatureStatistics statistics_;
  CostVector costs_;
  Eigen::VectorXd partial_;
  Eigen::VectorXd known_;
  Eigen::VectorXd filled_;
  double cumulative_cost_ = 0.0;
  std::vector<AcquisitionEvent> history_;
};

// Forward and backward passes spent by the selectors.
struct PropagationCounters {
  std::size_t forward = 0;
  std::size_t backward = 0;
};

// Which output vector direct propagation starts from.
enum class OutputHead { kProbabilities, kLogits };

struct Selection {
  std::size_t feature = 0;
  double score = 0.0;
  // Adjusted relevance of every feature (for multiprop: of the winning
  // class). Empty for baselines that do not compute relevance.
  Eigen::VectorXd adjusted;
  std::optional<std::size_t> source_class;  // multiprop only
};

// Position of the largest entry among unknown features; ties go to the lowest
// index. Throws NoUnknownFeatures when none is unknown.
std::size_t ArgmaxUnknown(const Eigen::VectorXd& scores,
                          const Eigen::VectorXd& known);

// One forward pass, one backward pass of the predicted class distribution.
Selection SelectDirect(const AcquisitionState& state, const nn::Network& network,
                       const relevance::RuleAssignment& rules,
                       PropagationCounters* counters = nullptr,
                       OutputHead head = OutputHead::kProbabilities);
// As SelectDirect, reusing a forward pass of state.filled().
Selection SelectDirectFromTrace(const AcquisitionState& state,
                                const nn::Network& network,
                                const relevance::RuleAssignment& rules,
                                const nn::ForwardTrace& trace,
                                PropagationCounters* counters = nullptr,
                                OutputHead head = OutputHead::kProbabilities);

// One forward pass and one backward pass per class, each starting from that
// class's one-hot vector. Picks the largest adjusted relevance over every
// (class, feature) pair; ties go to the lowest feature, then lowest class.
Selection SelectMultiProp(const AcquisitionState& state,
                          const nn::Network& network,
                          const relevance::RuleAssignment& rules,
                          PropagationCounters* counters = nullptr);
Selection SelectMultiPropFromTrace(const AcquisitionState& state,
                                   const nn::Network& network,
                                   const relevance::RuleAssignment& rules,
                                   const nn::ForwardTrace& trace,
                                   PropagationCounters* counters = nullptr);

// Baselines.
std::size_t SelectRandom(const AcquisitionState& state, Rng& rng);
std::size_t SelectCheapestFirst(const AcquisitionState& state);
// First unknown index in `order`. Throws std::invalid_argument if `order`
// names none of the unknown features.
std::size_t SelectStaticOrder(const AcquisitionState& state,
                              std::span<const std::size_t> order);

// Features sorted by descending mean |direct relevance| over the rows of
// `features` (each row fully observed); ties by index.
std::vector<std::size_t> RelevanceStaticOrder(
    const nn::Network& network, const relevance::RuleAssignment& rules,
    const Eigen::MatrixXd& features);

enum class StrategyKind { kDirect, kMultiProp, kRandom, kCheapest, kStatic };

std::string_view StrategyName(StrategyKind kind);
// Accepts direct, multiprop, random, cheapest, static.
StrategyKind ParseStrategy(std::string_view name);

// A per-episode feature chooser. Strategies may carry state (an RNG), so a
// fresh instance is made for every episode.
class Strategy {
 public:
  virtual ~Strategy() = default;
  virtual StrategyKind kind() const = 0;
  // `trace` is the forward pass of state.filled() already paid for by the
  // caller.
  virtual Selection Select(const AcquisitionState& state,
                           const nn::ForwardTrace& trace,
                           PropagationCounters& counters) = 0;
};

// Everything a strategy may need; references must outlive the strategy.
struct StrategyResources {
  const nn::Network& network;
  const relevance::RuleAssignment& rules;
  std::span<const std::size_t> static_order = {};
  OutputHead head = OutputHead::kProbabilities;
};

std::unique_ptr<Strategy> MakeStrategy(StrategyKind kind,
                                       const StrategyResources& resources,
                                       std::uint64_t seed);

struct Budget {
  double max_cost = 0.0;
};
struct Confidence {
  double threshold = 1.0;  // stop once max class probability >= threshold
};
struct FeatureCount {
  std::size_t max_features = 0;
};
struct Exhausted {};

using StoppingCondition = std::variant<Budget, Confidence, FeatureCount, Exhausted>;

// An episode stops as soon as any condition holds. Running out of unknown
// features always stops an episode.
struct StoppingRule {
  std::vector<StoppingCondition> conditions;

  // Throws std::invalid_argument for a negative budget or a confidence
  // threshold outside (0, 1].
  void Validate() const;
};

// Reveals true feature values for a price.
class Oracle {
 public:
  virtual ~Oracle() = default;
  virtual double Reveal(std::size_t feature) = 0;
};

// Oracle backed by a fully observed (normalized) row.
class RowOracle : public Oracle {
 public:
  explicit RowOracle(Eigen::VectorXd row);
  double Reveal(std::size_t feature) override;
  std::size_t reveals() const { return reveals_; }

 private:
  Eigen::VectorXd row_;
  std::vector<bool> revealed_;
  std::size_t reveals_ = 0;
};

struct EpisodeRecord {
  StrategyKind strategy = StrategyKind::kDirect;
  std::vector<AcquisitionEvent> steps;
  // predictions[t] is the prediction after t acquisitions; the first entry
  // comes from pure imputation and the last is the final prediction.
  std::vector<Eigen::VectorXd> predictions;
  PropagationCounters counters;
  std::size_t selections = 0;
  bool aborted = false;
  std::string error;

  const Eigen::VectorXd& final_prediction() const { return predictions.back(); }
  double total_cost() const;
  // Prediction after the last step whose cumulative cost is <= budget.
  const Eigen::VectorXd& PredictionAtBudget(double budget) const;
};

// Called after every forward pass with the state it was computed from.
using StepObserver =
    std::function<void(const AcquisitionState&, const nn::ForwardTrace&)>;

// Repeats {predict on x_filled; check stopping; select; reveal; update}
// until a stopping condition holds. A selected feature whose cost would
// push the cumulative cost over a Budget ends the episode without being
// bought. Oracle failures end the episode with `aborted` set.
EpisodeRecord RunEpisode(const nn::Network& network,
                         const FeatureStatistics& statistics,
                         const CostVector& costs, Oracle& oracle,
                         Strategy& strategy, const StoppingRule& stopping,
                         const StepObserver& observer = {});

}  // namespace relacq::acquisition

#endif  // RELACQ_ACQUISITION_HPP_
