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

#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "relacq/errors.hpp"
#include "relacq/random.hpp"
#include "test_util.hpp"

namespace relacq::acquisition {
namespace {

using ::relacq::testing::RandomNetwork;
using ::relacq::testing::RandomUnitVector;
using ::relacq::testing::ToVec;
using ::relacq::testing::UnitStatistics;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Eigen::VectorXd V(std::initializer_list<double> values) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (const double x : values) v(i++) = x;
  return v;
}

TEST(Impute, KeepsKnownFillsUnknown) {
  const FeatureStatistics stats = UnitStatistics(V({0.5, 0.2, 0.9}));
  EXPECT_EQ(Impute(V({0.1, kNaN, 0.3}), V({1, 0, 1}), stats), V({0.1, 0.2, 0.3}));
  EXPECT_EQ(Impute(V({kNaN, kNaN, kNaN}), V({0, 0, 0}), stats), stats.means);
  EXPECT_EQ(Impute(V({0.4, 0.6, 0.8}), V({1, 1, 1}), stats), V({0.4, 0.6, 0.8}));
  EXPECT_THROW(Impute(V({0.1, 0.2, 0.3}), V({1, 0.5, 1}), stats), std::invalid_argument);
}

TEST(AdjustedRelevance, HandDerived) {
  const CostVector costs({1.0, 2.0, 1.0});
  const Eigen::VectorXd adjusted = AdjustedRelevance(V({0.5, -0.8, 0.2}), V({1, 0, 0}), costs);
  EXPECT_DOUBLE_EQ(adjusted(0), 0.0);
  EXPECT_DOUBLE_EQ(adjusted(1), 0.4);
  EXPECT_DOUBLE_EQ(adjusted(2), 0.2);
  EXPECT_EQ(ArgmaxUnknown(adjusted, V({1, 0, 0})), 1u);
}

TEST(AdjustedRelevance, KnownIsExactlyZeroAndScalesInverselyWithCost) {
  Rng rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 1 + rng.index(10);
    Eigen::VectorXd r(static_cast<Eigen::Index>(m));
    Eigen::VectorXd k(static_cast<Eigen::Index>(m));
    std::vector<double> c(m);
    for (std::size_t i = 0; i < m; ++i) {
      r(static_cast<Eigen::Index>(i)) = rng.uniform(-5.0, 5.0);
      k(static_cast<Eigen::Index>(i)) = static_cast<double>(rng.index(2));
      c[i] = rng.uniform(0.1, 100.0);
    }
    const Eigen::VectorXd adjusted = AdjustedRelevance(r, k, CostVector(c));
    std::vector<double> doubled(c);
    for (double& v : doubled) v *= 2.0;
    const Eigen::VectorXd halved = AdjustedRelevance(r, k, CostVector(doubled));
    for (Eigen::Index i = 0; i < adjusted.size(); ++i) {
      EXPECT_GE(adjusted(i), 0.0);
      if (k(i) == 1.0) EXPECT_EQ(adjusted(i), 0.0);
      EXPECT_NEAR(halved(i), adjusted(i) / 2.0, 1e-15);
    }
  }
}

TEST(ArgmaxUnknown, TiesAndErrors) {
  EXPECT_EQ(ArgmaxUnknown(V({0.3, 0.3, 0.3}), V({0, 0, 0})), 0u);
  EXPECT_EQ(ArgmaxUnknown(V({0.3, 0.3, 0.3}), V({1, 0, 0})), 1u);
  EXPECT_EQ(ArgmaxUnknown(V({0.9, 0.0, 0.0}), V({1, 0, 0})), 1u);
  EXPECT_THROW(ArgmaxUnknown(V({0.1, 0.2}), V({1, 1})), NoUnknownFeatures);
}

TEST(AcquisitionState, AcquireTracksEverything) {
  AcquisitionState state(UnitStatistics(V({0.5, 0.5, 0.5})), CostVector({1.0, 2.0, 4.0}));
  EXPECT_EQ(state.step(), 0u);
  EXPECT_EQ(state.unknown_features(), (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_DOUBLE_EQ(state.CostIfAcquired(2), 4.0);
  state.Acquire(2, 0.25, 0.1);
  EXPECT_TRUE(state.is_known(2));
  EXPECT_EQ(state.filled(), V({0.5, 0.5, 0.25}));
  EXPECT_DOUBLE_EQ(state.cumulative_cost(), 4.0);
  EXPECT_DOUBLE_EQ(state.CostIfAcquired(0), 5.0);
  EXPECT_THROW(state.Acquire(2, 0.1, 0.0), std::invalid_argument);
  EXPECT_THROW(state.Acquire(5, 0.1, 0.0), std::invalid_argument);
  EXPECT_THROW(state.Acquire(0, kNaN, 0.0), std::invalid_argument);
  state.Acquire(0, 0.75, 0.0);
  state.Acquire(1, 0.0, 0.0);
  EXPECT_TRUE(state.exhausted());
  ASSERT_EQ(state.history().size(), 3u);
  EXPECT_EQ(state.history()[1].step, 1u);
  EXPECT_DOUBLE_EQ(state.history()[1].cumulative_cost, 5.0);
}

struct Case {
  nn::Network network;
  FeatureStatistics stats;
  relevance::RuleAssignment rules;
  CostVector costs;
  Eigen::VectorXd row;
};

Case RandomCase(Rng& rng, std::size_t m, std::size_t classes, bool integer_costs) {
  Case c{RandomNetwork(rng, m, classes, 3, 10), UnitStatistics(RandomUnitVector(rng, m)), {},
         {}, RandomUnitVector(rng, m)};
  c.rules = relevance::DefaultRuleAssignment(c.network, c.stats);
  std::vector<double> costs(m);
  for (double& cost : costs) {
    cost = integer_costs ? static_cast<double>(1 + rng.index(3)) : rng.uniform(0.5, 20.0);
  }
  c.costs = CostVector(costs);
  return c;
}

// Random known mask with at least one unknown feature, revealed from `row`.
AcquisitionState RandomState(Rng& rng, const Case& c) {
  AcquisitionState state(c.stats, c.costs);
  const std::size_t m = c.costs.size();
  const std::size_t reveal = rng.index(m);
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(std::span<std::size_t>(order));
  for (std::size_t t = 0; t < reveal; ++t) {
    state.Acquire(order[t], c.row(static_cast<Eigen::Index>(order[t])), 0.0);
  }
  return state;
}

// Scores must agree; the picked feature may differ only on rounding-level
// near-ties, which the callers bound by count.
void ExpectSameChoice(double score, const testing::ReferenceChoice& ref) {
  EXPECT_NEAR(score, ref.score, 1e-9 * std::max(1.0, ref.score));
}

TEST(SelectDirect, MatchesBruteForce) {
  Rng rng(17);
  std::size_t exact_matches = 0;
  const int trials = 300;
  for (int trial = 0; trial < trials; ++trial) {
    const std::size_t m = 1 + rng.index(8);
    const Case c = RandomCase(rng, m, 1 + rng.index(4), trial % 3 == 0);
    const AcquisitionState state = RandomState(rng, c);
    PropagationCounters counters;
    const Selection got = SelectDirect(state, c.network, c.rules, &counters);
    EXPECT_EQ(counters.forward, 1u);
    EXPECT_EQ(counters.backward, 1u);
    EXPECT_FALSE(state.is_known(got.feature));

    const auto net = testing::ToReference(c.network);
    std::vector<int> known(m);
    for (std::size_t i = 0; i < m; ++i) known[i] = state.is_known(i) ? 1 : 0;
    const auto ref = testing::ReferenceSelectDirect(
        net, ToVec(state.filled()), known, ToVec(c.stats.means), ToVec(c.stats.lower),
        ToVec(c.stats.upper), c.costs.values());
    ExpectSameChoice(got.score, ref);
    exact_matches += got.feature == ref.feature;
  }
  EXPECT_GE(exact_matches, static_cast<std::size_t>(trials) - 3);
}

TEST(SelectMultiProp, MatchesBruteForce) {
  Rng rng(23);
  std::size_t exact_matches = 0;
  const int trials = 300;
  for (int trial = 0; trial < trials; ++trial) {
    const std::size_t m = 1 + rng.index(8);
    const std::size_t classes = 1 + rng.index(4);
    const Case c = RandomCase(rng, m, classes, trial % 3 == 0);
    const AcquisitionState state = RandomState(rng, c);
    PropagationCounters counters;
    const Selection got = SelectMultiProp(state, c.network, c.rules, &counters);
    EXPECT_EQ(counters.forward, 1u);
    EXPECT_EQ(counters.backward, classes);
    ASSERT_TRUE(got.source_class.has_value());
    EXPECT_LT(*got.source_class, classes);

    const auto net = testing::ToReference(c.network);
    std::vector<int> known(m);
    for (std::size_t i = 0; i < m; ++i) known[i] = state.is_known(i) ? 1 : 0;
    const auto ref = testing::ReferenceSelectMultiProp(
        net, ToVec(state.filled()), known, ToVec(c.stats.means), ToVec(c.stats.lower),
        ToVec(c.stats.upper), c.costs.values());
    ExpectSameChoice(got.score, ref);
    exact_matches += got.feature == ref.feature;
  }
  EXPECT_GE(exact_matches, static_cast<std::size_t>(trials) - 3);
}

// A zero-weight network gives every feature identical relevance, so only the
// tie-breaking and the cost division decide.
Case ZeroCase(std::size_t m, std::size_t classes, std::vector<double> costs) {
  nn::Network net = nn::InitNetwork(nn::MlpSpecs(m, 4, 1, classes), 0);
  for (nn::Layer& layer : net.layers) layer.weights.setZero();
  const FeatureStatistics stats = UnitStatistics(Eigen::VectorXd::Constant(
      static_cast<Eigen::Index>(m), 0.5));
  Case c{net, stats, relevance::DefaultRuleAssignment(net, stats), CostVector(std::move(costs)),
         Eigen::VectorXd::Constant(static_cast<Eigen::Index>(m), 0.5)};
  return c;
}

TEST(Selectors, ForcedTiesGoToLowestIndex) {
  const Case c = ZeroCase(4, 3, {1, 1, 1, 1});
  AcquisitionState state(c.stats, c.costs);
  EXPECT_EQ(SelectDirect(state, c.network, c.rules).feature, 0u);
  const Selection multi = SelectMultiProp(state, c.network, c.rules);
  EXPECT_EQ(multi.feature, 0u);
  EXPECT_EQ(multi.source_class, 0u);
  state.Acquire(0, 0.5, 0.0);
  EXPECT_EQ(SelectDirect(state, c.network, c.rules).feature, 1u);
  EXPECT_EQ(SelectMultiProp(state, c.network, c.rules).feature, 1u);
}

TEST(Selectors, CostDividesEqualRelevance) {
  const Case c = ZeroCase(3, 2, {4, 1, 2});
  const AcquisitionState state(c.stats, c.costs);
  EXPECT_EQ(SelectDirect(state, c.network, c.rules).feature, 1u);
  EXPECT_EQ(SelectMultiProp(state, c.network, c.rules).feature, 1u);
}

TEST(Selectors, SingleUnknownIsForced) {
  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const Case c = RandomCase(rng, 5, 3, false);
    AcquisitionState state(c.stats, c.costs);
    const std::size_t left = rng.index(5);
    for (std::size_t i = 0; i < 5; ++i) {
      if (i != left) state.Acquire(i, c.row(static_cast<Eigen::Index>(i)), 0.0);
    }
    EXPECT_EQ(SelectDirect(state, c.network, c.rules).feature, left);
    EXPECT_EQ(SelectMultiProp(state, c.network, c.rules).feature, left);
  }
}

TEST(Selectors, NoUnknownFeaturesThrows) {
  const Case c = ZeroCase(2, 2, {1, 1});
  AcquisitionState state(c.stats, c.costs);
  state.Acquire(0, 0.5, 0.0);
  state.Acquire(1, 0.5, 0.0);
  EXPECT_THROW(SelectDirect(state, c.network, c.rules), NoUnknownFeatures);
  EXPECT_THROW(SelectMultiProp(state, c.network, c.rules), NoUnknownFeatures);
  EXPECT_THROW(SelectCheapestFirst(state), NoUnknownFeatures);
}

TEST(Selectors, MultiPropIgnoresClassOrder) {
  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    Case c = RandomCase(rng, 6, 3, false);
    const AcquisitionState state = RandomState(rng, c);
    const Selection base = SelectMultiProp(state, c.network, c.rules);
    // Reverse the output neurons.
    nn::Network flipped = c.network;
    nn::Layer& last = flipped.layers.back();
    last.weights = last.weights.rowwise().reverse().eval();
    last.biases = last.biases.reverse().eval();
    const Selection other = SelectMultiProp(state, flipped, c.rules);
    EXPECT_EQ(other.feature, base.feature);
    EXPECT_EQ(other.score, base.score);
    // Classes tie whenever a dead layer spreads relevance uniformly, so the
    // winning class itself is compared through its relevance profile.
    EXPECT_TRUE(other.adjusted.isApprox(base.adjusted, 1e-12));
  }
}

TEST(Baselines, CheapestStaticRandom) {
  const Case c = ZeroCase(3, 2, {5, 1, 10});
  AcquisitionState state(c.stats, c.costs);
  EXPECT_EQ(SelectCheapestFirst(state), 1u);
  const std::vector<std::size_t> order = {2, 0, 1};
  AcquisitionState partial(c.stats, c.costs);
  partial.Acquire(1, 0.5, 0.0);
  EXPECT_EQ(SelectStaticOrder(partial, order), 2u);
  partial.Acquire(2, 0.5, 0.0);
  EXPECT_EQ(SelectStaticOrder(partial, order), 0u);
  const std::vector<std::size_t> bad = {1};
  EXPECT_THROW(SelectStaticOrder(state, std::span<const std::size_t>(bad).subspan(1)),
               std::invalid_argument);

  Rng a(42), b(42);
  for (int i = 0; i < 20; ++i) {
    const std::size_t pick = SelectRandom(partial, a);
    EXPECT_EQ(pick, SelectRandom(partial, b));
    EXPECT_FALSE(partial.is_known(pick));
  }
}

TEST(Baselines, RandomCoversUnknownFeatures) {
  const Case c = ZeroCase(4, 2, {1, 1, 1, 1});
  AcquisitionState state(c.stats, c.costs);
  state.Acquire(2, 0.5, 0.0);
  Rng rng(0);
  std::vector<int> seen(4, 0);
  for (int i = 0; i < 300; ++i) ++seen[SelectRandom(state, rng)];
  EXPECT_EQ(seen[2], 0);
  EXPECT_GT(seen[0], 50);
  EXPECT_GT(seen[1], 50);
  EXPECT_GT(seen[3], 50);
}

TEST(Strategy, NamesRoundTrip) {
  for (const auto kind : {StrategyKind::kDirect, StrategyKind::kMultiProp, StrategyKind::kRandom,
                          StrategyKind::kCheapest, StrategyKind::kStatic}) {
    EXPECT_EQ(ParseStrategy(StrategyName(kind)), kind);
  }
  EXPECT_THROW(ParseStrategy("greedy"), std::invalid_argument);
}

TEST(StoppingRule, Validation) {
  EXPECT_NO_THROW((StoppingRule{{Budget{0.0}}}.Validate()));
  EXPECT_THROW((StoppingRule{{Budget{-1.0}}}.Validate()), std::invalid_argument);
  EXPECT_THROW((StoppingRule{{Confidence{0.0}}}.Validate()), std::invalid_argument);
  EXPECT_THROW((StoppingRule{{Confidence{1.5}}}.Validate()), std::invalid_argument);
}

TEST(RowOracle, ForbidsRepeats) {
  RowOracle oracle(V({0.1, 0.2}));
  EXPECT_DOUBLE_EQ(oracle.Reveal(1), 0.2);
  EXPECT_THROW(oracle.Reveal(1), OracleError);
  EXPECT_THROW(oracle.Reveal(7), OracleError);
  EXPECT_EQ(oracle.reveals(), 1u);
}

EpisodeRecord RunWith(const Case& c, StrategyKind kind, const StoppingRule& stopping,
                  std::uint64_t seed = 0) {
  RowOracle oracle(c.row);
  const std::vector<std::size_t> order = [&] {
    std::vector<std::size_t> o(c.costs.size());
    std::iota(o.begin(), o.end(), 0);
    return o;
  }();
  const StrategyResources resources{c.network, c.rules, order};
  const auto strategy = MakeStrategy(kind, resources, seed);
  return RunEpisode(c.network, c.stats, c.costs, oracle, *strategy, stopping);
}

TEST(RunEpisode, ZeroBudgetAcquiresNothing) {
  Rng rng(2);
  const Case c = RandomCase(rng, 5, 3, false);
  const EpisodeRecord record = RunWith(c, StrategyKind::kDirect, {{Budget{0.0}}});
  EXPECT_TRUE(record.steps.empty());
  ASSERT_EQ(record.predictions.size(), 1u);
  EXPECT_EQ(record.final_prediction(), nn::Forward(c.network, c.stats.means).prediction);
  EXPECT_EQ(record.counters.forward, 1u);
  EXPECT_EQ(record.counters.backward, 0u);
}

TEST(RunEpisode, UnitCostBudgetBuysExactlyThatMany) {
  Rng rng(3);
  Case c = RandomCase(rng, 6, 2, false);
  c.costs = CostVector::Uniform(6);
  for (const auto kind : {StrategyKind::kDirect, StrategyKind::kMultiProp, StrategyKind::kRandom}) {
    const EpisodeRecord record = RunWith(c, kind, {{Budget{2.0}}});
    EXPECT_EQ(record.steps.size(), 2u);
    EXPECT_DOUBLE_EQ(record.total_cost(), 2.0);
  }
}

TEST(RunEpisode, FeatureCountOfAllEqualsFullForward) {
  Rng rng(4);
  const Case c = RandomCase(rng, 5, 3, false);
  for (const auto kind : {StrategyKind::kDirect, StrategyKind::kMultiProp, StrategyKind::kRandom,
                          StrategyKind::kCheapest, StrategyKind::kStatic}) {
    const EpisodeRecord record = RunWith(c, kind, {{FeatureCount{5}}});
    EXPECT_EQ(record.steps.size(), 5u);
    EXPECT_EQ(record.final_prediction(), nn::Forward(c.network, c.row).prediction);
    EXPECT_DOUBLE_EQ(record.total_cost(), c.costs.total());
  }
}

TEST(RunEpisode, CountersMatchStepCounts) {
  Rng rng(5);
  const Case c = RandomCase(rng, 6, 4, false);
  const EpisodeRecord direct = RunWith(c, StrategyKind::kDirect, {{FeatureCount{3}}});
  EXPECT_EQ(direct.counters.forward, 4u);
  EXPECT_EQ(direct.counters.backward, 3u);
  const EpisodeRecord multi = RunWith(c, StrategyKind::kMultiProp, {{FeatureCount{3}}});
  EXPECT_EQ(multi.counters.forward, 4u);
  EXPECT_EQ(multi.counters.backward, 12u);
}

TEST(RunEpisode, ConfidenceStopsEarly) {
  Rng rng(6);
  const Case c = RandomCase(rng, 5, 3, false);
  const double initial = nn::Forward(c.network, c.stats.means).confidence();
  const EpisodeRecord record = RunWith(c, StrategyKind::kDirect, {{Confidence{initial}}});
  EXPECT_TRUE(record.steps.empty());
}

TEST(RunEpisode, UnaffordableSelectionIsNotBought) {
  const Case c = ZeroCase(3, 2, {1, 1, 1});
  Case expensive = c;
  expensive.costs = CostVector({3.0, 1.0, 1.0});
  // Static order picks feature 0 first; it costs more than the budget.
  const EpisodeRecord record = RunWith(expensive, StrategyKind::kStatic, {{Budget{2.0}}});
  EXPECT_TRUE(record.steps.empty());
  EXPECT_EQ(record.selections, 1u);
}

class FailingOracle : public Oracle {
 public:
  double Reveal(std::size_t) override { throw OracleError("sensor offline"); }
};

TEST(RunEpisode, OracleFailureAbortsWithPartialRecord) {
  const Case c = ZeroCase(3, 2, {1, 1, 1});
  FailingOracle oracle;
  const StrategyResources resources{c.network, c.rules};
  const auto strategy = MakeStrategy(StrategyKind::kDirect, resources, 0);
  const EpisodeRecord record =
      RunEpisode(c.network, c.stats, c.costs, oracle, *strategy, {{Exhausted{}}});
  EXPECT_TRUE(record.aborted);
  EXPECT_NE(record.error.find("sensor offline"), std::string::npos);
  EXPECT_EQ(record.predictions.size(), 1u);
}

TEST(RunEpisode, InvariantsUnderFuzz) {
  Rng rng(77);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t m = 1 + rng.index(8);
    const Case c = RandomCase(rng, m, 1 + rng.index(4), trial % 2 == 0);
    const auto kind = static_cast<StrategyKind>(rng.index(5));
    StoppingRule stopping;
    if (rng.index(2) == 0) stopping.conditions.push_back(Budget{rng.uniform(0.0, 30.0)});
    if (rng.index(3) == 0) stopping.conditions.push_back(FeatureCount{rng.index(m + 1)});
    const EpisodeRecord record = RunWith(c, kind, stopping, rng.next());

    EXPECT_FALSE(record.aborted);
    EXPECT_EQ(record.predictions.size(), record.steps.size() + 1);
    EXPECT_EQ(record.counters.forward, record.steps.size() + 1);
    std::vector<bool> bought(m, false);
    double previous = 0.0;
    for (std::size_t t = 0; t < record.steps.size(); ++t) {
      const AcquisitionEvent& event = record.steps[t];
      EXPECT_EQ(event.step, t);
      EXPECT_FALSE(bought[event.feature]);
      bought[event.feature] = true;
      EXPECT_GT(event.cumulative_cost, previous);
      previous = event.cumulative_cost;
    }
    for (const auto& condition : stopping.conditions) {
      if (const auto* budget = std::get_if<Budget>(&condition)) {
        EXPECT_LE(record.total_cost(), budget->max_cost);
      }
      if (const auto* count = std::get_if<FeatureCount>(&condition)) {
        EXPECT_LE(record.steps.size(), count->max_features);
      }
    }
    if (stopping.conditions.empty()) EXPECT_EQ(record.steps.size(), m);
    for (const auto& p : record.predictions) EXPECT_NEAR(p.sum(), 1.0, 1e-9);
  }
}

TEST(RunEpisode, IsDeterministicPerSeed) {
  Rng rng(12);
  const Case c = RandomCase(rng, 7, 3, false);
  for (const auto kind : {StrategyKind::kDirect, StrategyKind::kRandom}) {
    const EpisodeRecord a = RunWith(c, kind, {{FeatureCount{4}}}, 5);
    const EpisodeRecord b = RunWith(c, kind, {{FeatureCount{4}}}, 5);
    ASSERT_EQ(a.steps.size(), b.steps.size());
    for (std::size_t t = 0; t < a.steps.size(); ++t) {
      EXPECT_EQ(a.steps[t].feature, b.steps[t].feature);
      EXPECT_EQ(a.steps[t].score, b.steps[t].score);
    }
  }
}

TEST(EpisodeRecord, PredictionAtBudget) {
  Rng rng(13);
  Case c = RandomCase(rng, 4, 2, false);
  c.costs = CostVector({1.0, 2.0, 3.0, 4.0});
  const EpisodeRecord record = RunWith(c, StrategyKind::kCheapest, {{Exhausted{}}});
  ASSERT_EQ(record.steps.size(), 4u);
  EXPECT_EQ(record.PredictionAtBudget(0.0), record.predictions[0]);
  EXPECT_EQ(record.PredictionAtBudget(2.9), record.predictions[1]);
  EXPECT_EQ(record.PredictionAtBudget(3.0), record.predictions[2]);
  EXPECT_EQ(record.PredictionAtBudget(100.0), record.predictions[4]);
}

TEST(RelevanceStaticOrder, IsAPermutation) {
  Rng rng(14);
  const Case c = RandomCase(rng, 6, 3, false);
  Eigen::MatrixXd rows(10, 6);
  for (Eigen::Index r = 0; r < 10; ++r) rows.row(r) = RandomUnitVector(rng, 6).transpose();
  std::vector<std::size_t> order = RelevanceStaticOrder(c.network, c.rules, rows);
  std::sort(order.begin(), order.end());
  EXPECT_EQ(order, (std::vector<std::size_t>{0, 1, 2, 3, 4, 5}));
}

}  // namespace
}  // namespace relacq::acquisition
