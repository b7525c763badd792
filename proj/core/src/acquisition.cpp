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

#include "relacq/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "relacq/errors.hpp"

namespace relacq::acquisition {
namespace {

void CheckBinary(const Eigen::VectorXd& known) {
  for (Eigen::Index i = 0; i < known.size(); ++i) {
    if (known(i) != 0.0 && known(i) != 1.0) {
      throw std::invalid_argument("indicator vector entry " + std::to_string(i) +
                                  " is not 0 or 1");
    }
  }
}

void RequireUnknown(const AcquisitionState& state) {
  if (state.exhausted()) throw NoUnknownFeatures();
}

class DirectStrategy : public Strategy {
 public:
  DirectStrategy(const StrategyResources& resources) : resources_(resources) {}
  StrategyKind kind() const override { return StrategyKind::kDirect; }
  Selection Select(const AcquisitionState& state, const nn::ForwardTrace& trace,
                   PropagationCounters& counters) override {
    return SelectDirectFromTrace(state, resources_.network, resources_.rules,
                                 trace, &counters, resources_.head);
  }

 private:
  StrategyResources resources_;
};

class MultiPropStrategy : public Strategy {
 public:
  MultiPropStrategy(const StrategyResources& resources) : resources_(resources) {}
  StrategyKind kind() const override { return StrategyKind::kMultiProp; }
  Selection Select(const AcquisitionState& state, const nn::ForwardTrace& trace,
                   PropagationCounters& counters) override {
    return SelectMultiPropFromTrace(state, resources_.network, resources_.rules,
                                    trace, &counters);
  }

 private:
  StrategyResources resources_;
};

class RandomStrategy : public Strategy {
 public:
  explicit RandomStrategy(std::uint64_t seed) : rng_(seed) {}
  StrategyKind kind() const override { return StrategyKind::kRandom; }
  Selection Select(const AcquisitionState& state, const nn::ForwardTrace&,
                   PropagationCounters&) override {
    Selection selection;
    selection.feature = SelectRandom(state, rng_);
    return selection;
  }

 private:
  Rng rng_;
};

class CheapestStrategy : public Strategy {
 public:
  StrategyKind kind() const override { return StrategyKind::kCheapest; }
  Selection Select(const AcquisitionState& state, const nn::ForwardTrace&,
                   PropagationCounters&) override {
    Selection selection;
    selection.feature = SelectCheapestFirst(state);
    return selection;
  }
};

class StaticStrategy : public Strategy {
 public:
  explicit StaticStrategy(std::vector<std::size_t> order) : order_(std::move(order)) {}
  StrategyKind kind() const override { return StrategyKind::kStatic; }
  Selection Select(const AcquisitionState& state, const nn::ForwardTrace&,
                   PropagationCounters&) override {
    Selection selection;
    selection.feature = SelectStaticOrder(state, order_);
    return selection;
  }

 private:
  std::vector<std::size_t> order_;
};

struct StopCheck {
  const AcquisitionState& state;
  const nn::ForwardTrace& trace;

  bool operator()(const Budget& budget) const {
    // Stop when no unknown feature is affordable any more.
    for (const std::size_t i : state.unknown_features()) {
      if (state.CostIfAcquired(i) <= budget.max_cost) return false;
    }
    return true;
  }
  bool operator()(const Confidence& confidence) const {
    return trace.confidence() >= confidence.threshold;
  }
  bool operator()(const FeatureCount& count) const {
    return state.step() >= count.max_features;
  }
  bool operator()(const Exhausted&) const { return state.exhausted(); }
};

bool ShouldStop(const StoppingRule& stopping, const AcquisitionState& state,
                const nn::ForwardTrace& trace) {
  if (state.exhausted()) return true;
  const StopCheck check{state, trace};
  return std::any_of(stopping.conditions.begin(), stopping.conditions.end(),
                     [&](const StoppingCondition& c) { return std::visit(check, c); });
}

bool OverBudget(const StoppingRule& stopping, const AcquisitionState& state,
                std::size_t feature) {
  const double prospective = state.CostIfAcquired(feature);
  return std::any_of(stopping.conditions.begin(), stopping.conditions.end(),
                     [&](const StoppingCondition& c) {
                       const auto* budget = std::get_if<Budget>(&c);
                       return budget != nullptr && prospective > budget->max_cost;
                     });
}

}  // namespace

Eigen::VectorXd Impute(const Eigen::VectorXd& partial,
                       const Eigen::VectorXd& known,
                       const FeatureStatistics& statistics) {
  if (partial.size() != known.size() ||
      static_cast<std::size_t>(known.size()) != statistics.size()) {
    throw std::invalid_argument("impute: vector lengths disagree");
  }
  CheckBinary(known);
  Eigen::VectorXd filled(partial.size());
  for (Eigen::Index i = 0; i < partial.size(); ++i) {
    filled(i) = known(i) == 1.0 ? partial(i) : statistics.means(i);
  }
  return filled;
}

Eigen::VectorXd AdjustedRelevance(const Eigen::VectorXd& relevance,
                                  const Eigen::VectorXd& known,
                                  const CostVector& costs) {
  if (relevance.size() != known.size() ||
      static_cast<std::size_t>(known.size()) != costs.size()) {
    throw std::invalid_argument("adjusted relevance: vector lengths disagree");
  }
  CheckBinary(known);
  Eigen::VectorXd adjusted(relevance.size());
  for (Eigen::Index i = 0; i < relevance.size(); ++i) {
    const double cost = costs[static_cast<std::size_t>(i)];
    if (!(cost > 0.0)) throw std::invalid_argument("feature costs must be positive");
    adjusted(i) = known(i) == 1.0 ? 0.0 : std::abs(relevance(i)) / cost;
  }
  return adjusted;
}

AcquisitionState::AcquisitionState(FeatureStatistics statistics, CostVector costs)
    : statistics_(std::move(statistics)), costs_(std::move(costs)) {
  statistics_.Validate();
  if (statistics_.size() != costs_.size()) {
    throw std::invalid_argument("statistics and costs describe different feature counts");
  }
  const auto m = static_cast<Eigen::Index>(costs_.size());
  partial_ = Eigen::VectorXd::Constant(m, std::numeric_limits<double>::quiet_NaN());
  known_ = Eigen::VectorXd::Zero(m);
  filled_ = Impute(partial_, known_, statistics_);
}

bool AcquisitionState::is_known(std::size_t feature) const {
  return known_(static_cast<Eigen::Index>(feature)) == 1.0;
}

std::vector<std::size_t> AcquisitionState::unknown_features() const {
  std::vector<std::size_t> unknown;
  for (std::size_t i = 0; i < feature_count(); ++i) {
    if (!is_known(i)) unknown.push_back(i);
  }
  return unknown;
}

double AcquisitionState::CostOf(const Eigen::VectorXd& known) const {
  double total = 0.0;
  for (std::size_t i = 0; i < costs_.size(); ++i) {
    total += costs_[i] * known(static_cast<Eigen::Index>(i));
  }
  return total;
}

double AcquisitionState::CostIfAcquired(std::size_t feature) const {
  if (feature >= feature_count()) throw std::invalid_argument("feature index out of range");
  Eigen::VectorXd known = known_;
  known(static_cast<Eigen::Index>(feature)) = 1.0;
  return CostOf(known);
}

void AcquisitionState::Acquire(std::size_t feature, double value, double score) {
  if (feature >= feature_count()) throw std::invalid_argument("feature index out of range");
  if (is_known(feature)) {
    throw std::invalid_argument("feature " + std::to_string(feature) +
                                " was already acquired");
  }
  if (!std::isfinite(value)) throw std::invalid_argument("revealed value is not finite");
  const auto i = static_cast<Eigen::Index>(feature);
  partial_(i) = value;
  known_(i) = 1.0;
  filled_ = Impute(partial_, known_, statistics_);
  const std::size_t t = step();
  cumulative_cost_ = CostOf(known_);
  history_.push_back({.step = t,
                      .feature = feature,
                      .cost = costs_[feature],
                      .cumulative_cost = cumulative_cost_,
                      .score = score});
}

std::size_t ArgmaxUnknown(const Eigen::VectorXd& scores,
                          const Eigen::VectorXd& known) {
  std::optional<std::size_t> best;
  for (Eigen::Index i = 0; i < scores.size(); ++i) {
    if (known(i) == 1.0) continue;
    if (!best || scores(i) > scores(static_cast<Eigen::Index>(*best))) {
      best = static_cast<std::size_t>(i);
    }
  }
  if (!best) throw NoUnknownFeatures();
  return *best;
}

Selection SelectDirect(const AcquisitionState& state, const nn::Network& network,
                       const relevance::RuleAssignment& rules,
                       PropagationCounters* counters, OutputHead head) {
  RequireUnknown(state);
  const nn::ForwardTrace trace = nn::Forward(network, state.filled());
  if (counters != nullptr) ++counters->forward;
  return SelectDirectFromTrace(state, network, rules, trace, counters, head);
}

Selection SelectDirectFromTrace(const AcquisitionState& state,
                                const nn::Network& network,
                                const relevance::RuleAssignment& rules,
                                const nn::ForwardTrace& trace,
                                PropagationCounters* counters, OutputHead head) {
  RequireUnknown(state);
  const relevance::RelevanceVector output =
      head == OutputHead::kProbabilities
          ? relevance::OutputRelevanceDirect(trace.prediction)
          : relevance::OutputRelevanceLogits(trace);
  const relevance::BackwardResult backward =
      relevance::RelevanceBackward(network, trace, rules, output);
  if (counters != nullptr) ++counters->backward;
  Selection selection;
  selection.adjusted =
      AdjustedRelevance(backward.input_relevance, state.known(), state.costs());
  selection.feature = ArgmaxUnknown(selection.adjusted, state.known());
  selection.score = selection.adjusted(static_cast<Eigen::Index>(selection.feature));
  return selection;
}

Selection SelectMultiProp(const AcquisitionState& state,
                          const nn::Network& network,
                          const relevance::RuleAssignment& rules,
                          PropagationCounters* counters) {
  RequireUnknown(state);
  const nn::ForwardTrace trace = nn::Forward(network, state.filled());
  if (counters != nullptr) ++counters->forward;
  return SelectMultiPropFromTrace(state, network, rules, trace, counters);
}

Selection SelectMultiPropFromTrace(const AcquisitionState& state,
                                   const nn::Network& network,
                                   const relevance::RuleAssignment& rules,
                                   const nn::ForwardTrace& trace,
                                   PropagationCounters* counters) {
  RequireUnknown(state);
  const std::size_t n_classes = network.output_dim();
  std::optional<Selection> best;
  for (std::size_t c = 0; c < n_classes; ++c) {
    const relevance::BackwardResult backward = relevance::RelevanceBackward(
        network, trace, rules, relevance::OutputRelevanceOneHot(c, n_classes));
    if (counters != nullptr) ++counters->backward;
    Selection candidate;
    candidate.adjusted =
        AdjustedRelevance(backward.input_relevance, state.known(), state.costs());
    candidate.feature = ArgmaxUnknown(candidate.adjusted, state.known());
    candidate.score = candidate.adjusted(static_cast<Eigen::Index>(candidate.feature));
    candidate.source_class = c;
    // Classes are visited in increasing order, so on an exact score tie only
    // a lower feature index may replace the incumbent.
    if (!best || candidate.score > best->score ||
        (candidate.score == best->score && candidate.feature < best->feature)) {
      best = std::move(candidate);
    }
  }
  return *std::move(best);
}

std::size_t SelectRandom(const AcquisitionState& state, Rng& rng) {
  const std::vector<std::size_t> unknown = state.unknown_features();
  if (unknown.empty()) throw NoUnknownFeatures();
  return unknown[rng.index(unknown.size())];
}

std::size_t SelectCheapestFirst(const AcquisitionState& state) {
  std::optional<std::size_t> best;
  for (const std::size_t i : state.unknown_features()) {
    if (!best || state.costs()[i] < state.costs()[*best]) best = i;
  }
  if (!best) throw NoUnknownFeatures();
  return *best;
}

std::size_t SelectStaticOrder(const AcquisitionState& state,
                              std::span<const std::size_t> order) {
  RequireUnknown(state);
  for (const std::size_t i : order) {
    if (i < state.feature_count() && !state.is_known(i)) return i;
  }
  throw std::invalid_argument("static order names none of the unknown features");
}

std::vector<std::size_t> RelevanceStaticOrder(
    const nn::Network& network, const relevance::RuleAssignment& rules,
    const Eigen::MatrixXd& features) {
  if (features.rows() == 0) throw std::invalid_argument("empty feature matrix");
  Eigen::VectorXd mean_abs = Eigen::VectorXd::Zero(features.cols());
  for (Eigen::Index r = 0; r < features.rows(); ++r) {
    const nn::ForwardTrace trace = nn::Forward(network, features.row(r).transpose());
    const relevance::BackwardResult backward = relevance::RelevanceBackward(
        network, trace, rules, relevance::OutputRelevanceDirect(trace.prediction));
    mean_abs += backward.input_relevance.cwiseAbs();
  }
  mean_abs /= static_cast<double>(features.rows());
  std::vector<std::size_t> order(static_cast<std::size_t>(features.cols()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return mean_abs(static_cast<Eigen::Index>(a)) > mean_abs(static_cast<Eigen::Index>(b));
  });
  return order;
}

std::string_view StrategyName(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::kDirect: return "direct";
    case StrategyKind::kMultiProp: return "multiprop";
    case StrategyKind::kRandom: return "random";
    case StrategyKind::kCheapest: return "cheapest";
    case StrategyKind::kStatic: return "static";
  }
  return "unknown";
}

StrategyKind ParseStrategy(std::string_view name) {
  for (const StrategyKind kind :
       {StrategyKind::kDirect, StrategyKind::kMultiProp, StrategyKind::kRandom,
        StrategyKind::kCheapest, StrategyKind::kStatic}) {
    if (StrategyName(kind) == name) return kind;
  }
  throw std::invalid_argument("unknown strategy '" + std::string(name) + "'");
}

std::unique_ptr<Strategy> MakeStrategy(StrategyKind kind,
                                       const StrategyResources& resources,
                                       std::uint64_t seed) {
  switch (kind) {
    case StrategyKind::kDirect: return std::make_unique<DirectStrategy>(resources);
    case StrategyKind::kMultiProp: return std::make_unique<MultiPropStrategy>(resources);
    case StrategyKind::kRandom: return std::make_unique<RandomStrategy>(seed);
    case StrategyKind::kCheapest: return std::make_unique<CheapestStrategy>();
    case StrategyKind::kStatic:
      if (resources.static_order.empty()) {
        throw std::invalid_argument("static strategy needs a feature order");
      }
      return std::make_unique<StaticStrategy>(std::vector<std::size_t>(
          resources.static_order.begin(), resources.static_order.end()));
  }
  throw std::invalid_argument("unknown strategy kind");
}

void StoppingRule::Validate() const {
  for (const StoppingCondition& condition : conditions) {
    if (const auto* budget = std::get_if<Budget>(&condition)) {
      if (!(budget->max_cost >= 0.0)) throw std::invalid_argument("budget must be >= 0");
    } else if (const auto* confidence = std::get_if<Confidence>(&condition)) {
      if (!(confidence->threshold > 0.0 && confidence->threshold <= 1.0)) {
        throw std::invalid_argument("confidence threshold must lie in (0, 1]");
      }
    }
  }
}

RowOracle::RowOracle(Eigen::VectorXd row)
    : row_(std::move(row)), revealed_(static_cast<std::size_t>(row_.size()), false) {}

double RowOracle::Reveal(std::size_t feature) {
  if (feature >= revealed_.size()) throw OracleError("feature index out of range");
  if (revealed_[feature]) {
    throw OracleError("feature " + std::to_string(feature) + " revealed twice");
  }
  revealed_[feature] = true;
  ++reveals_;
  return row_(static_cast<Eigen::Index>(feature));
}

double EpisodeRecord::total_cost() const {
  return steps.empty() ? 0.0 : steps.back().cumulative_cost;
}

const Eigen::VectorXd& EpisodeRecord::PredictionAtBudget(double budget) const {
  if (budget < 0.0) throw std::invalid_argument("budget must be >= 0");
  std::size_t t = 0;
  while (t < steps.size() && steps[t].cumulative_cost <= budget) ++t;
  return predictions.at(t);
}

EpisodeRecord RunEpisode(const nn::Network& network,
                         const FeatureStatistics& statistics,
                         const CostVector& costs, Oracle& oracle,
                         Strategy& strategy, const StoppingRule& stopping,
                         const StepObserver& observer) {
  stopping.Validate();
  if (network.input_dim() != costs.size()) {
    throw std::invalid_argument("network input width does not match cost vector");
  }
  AcquisitionState state(statistics, costs);
  EpisodeRecord record;
  record.strategy = strategy.kind();
  while (true) {
    const nn::ForwardTrace trace = nn::Forward(network, state.filled());
    ++record.counters.forward;
    record.predictions.push_back(trace.prediction);
    if (observer) observer(state, trace);
    if (ShouldStop(stopping, state, trace)) break;

    const Selection selection = strategy.Select(state, trace, record.counters);
    ++record.selections;
    if (OverBudget(stopping, state, selection.feature)) break;

    double value = 0.0;
    try {
      value = oracle.Reveal(selection.feature);
    } catch (const std::exception& e) {
      record.aborted = true;
      record.error = e.what();
      break;
    }
    const auto i = static_cast<Eigen::Index>(selection.feature);
    if (!std::isfinite(value) || value < statistics.lower(i) ||
        value > statistics.upper(i)) {
      record.aborted = true;
      record.error = "oracle revealed an out-of-bounds value for feature " +
                     std::to_string(selection.feature);
      break;
    }
    state.Acquire(selection.feature, value, selection.score);
  }
  record.steps = state.history();
  return record;
}

}  // namespace relacq::acquisition
