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

#include "relacq/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>

#include "relacq/acquisition.hpp"
#include "relacq/data.hpp"
#include "relacq/errors.hpp"
#include "relacq/eval.hpp"
#include "relacq/format.hpp"
#include "relacq/model_io.hpp"
#include "relacq/nn.hpp"
#include "relacq/random.hpp"
#include "relacq/relevance.hpp"

namespace relacq::cli {
namespace {

namespace fs = std::filesystem;
using acquisition::StrategyKind;

// Flag combinations that parse but make no sense; exits with kExitUsageError.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::ofstream OpenForWrite(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

// Stopping flags shared by evaluate and interactive.
struct StoppingFlags {
  double budget = 0.0;
  double confidence = 1.0;
  std::size_t max_features = 0;
  CLI::Option* budget_option = nullptr;
  CLI::Option* confidence_option = nullptr;
  CLI::Option* max_features_option = nullptr;

  void Register(CLI::App& app) {
    budget_option = app.add_option("--budget", budget, "Stop before exceeding this total cost");
    confidence_option =
        app.add_option("--confidence", confidence, "Stop once max class probability reaches this");
    max_features_option =
        app.add_option("--max-features", max_features, "Stop after this many acquisitions");
  }

  acquisition::StoppingRule Build() const {
    acquisition::StoppingRule rule;
    if (budget_option->count() > 0) rule.conditions.emplace_back(acquisition::Budget{budget});
    if (confidence_option->count() > 0) {
      rule.conditions.emplace_back(acquisition::Confidence{confidence});
    }
    if (max_features_option->count() > 0) {
      rule.conditions.emplace_back(acquisition::FeatureCount{max_features});
    }
    rule.conditions.emplace_back(acquisition::Exhausted{});
    try {
      rule.Validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    return rule;
  }
};

// ---------------------------------------------------------------- synth

struct SynthFlags {
  data::SyntheticSpec spec;
  std::string cost_profile = "uniform";
  std::string data_out;
  std::string costs_out;
};

void RegisterSynth(CLI::App& app, SynthFlags& f) {
  app.add_option("--features", f.spec.features, "Number of features")->capture_default_str();
  app.add_option("--classes", f.spec.classes, "Number of classes")->capture_default_str();
  app.add_option("--informative", f.spec.informative_count,
                 "Number of informative features, placed by the seed")
      ->capture_default_str();
  app.add_option("--informative-indices", f.spec.informative,
                 "Explicit informative feature indices")
      ->delimiter(',');
  app.add_option("--noise", f.spec.noise, "Label noise standard deviation")->capture_default_str();
  app.add_option("--rows", f.spec.rows, "Number of rows")->capture_default_str();
  app.add_option("--seed", f.spec.seed, "Random seed")->capture_default_str();
  app.add_option("--cost-profile", f.cost_profile, "uniform, tiered or random")
      ->capture_default_str();
  app.add_option("--costs", f.spec.costs, "Explicit per-feature costs")->delimiter(',');
  app.add_option("--data-out", f.data_out, "Data CSV to write")->required();
  app.add_option("--costs-out", f.costs_out, "Cost CSV to write")->required();
}

int RunSynth(SynthFlags& f, std::ostream& out) {
  try {
    f.spec.cost_profile = data::ParseCostProfile(f.cost_profile);
    f.spec.Validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const data::SyntheticDataset synthetic = data::GenerateSynthetic(f.spec);
  {
    std::ofstream data_file = OpenForWrite(f.data_out);
    data::WriteDataCsv(synthetic.dataset, data_file);
    std::ofstream cost_file = OpenForWrite(f.costs_out);
    data::WriteCostCsv(synthetic.dataset, cost_file);
  }
  out << "rows," << synthetic.dataset.rows() << '\n'
      << "features," << synthetic.dataset.feature_count() << '\n'
      << "classes," << synthetic.dataset.n_classes << '\n'
      << "informative";
  for (const std::size_t i : synthetic.informative) out << ',' << synthetic.dataset.feature_names[i];
  out << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- train

struct TrainFlags {
  std::string data;
  std::string costs;
  std::string model_out;
  std::string test_data_out;
  std::string test_costs_out;
  std::size_t hidden = 32;
  std::size_t layers = 1;
  nn::TrainConfig config;
  double train_fraction = 0.7;
  std::uint64_t seed = 0;
  std::string bounds = "unit";
  std::string statistics = "original";
  bool no_oversample = false;
};

void RegisterTrain(CLI::App& app, TrainFlags& f) {
  app.add_option("--data", f.data, "Data CSV")->required();
  app.add_option("--costs", f.costs, "Cost CSV")->required();
  app.add_option("--model-out", f.model_out, "Model file to write")->required();
  app.add_option("--test-data-out", f.test_data_out, "Write the raw held-out split here");
  app.add_option("--test-costs-out", f.test_costs_out, "Cost CSV for the held-out split");
  app.add_option("--hidden", f.hidden, "Hidden layer width")->capture_default_str();
  app.add_option("--layers", f.layers, "Number of hidden layers")->capture_default_str();
  app.add_option("--epochs", f.config.epochs, "Training epochs")->capture_default_str();
  app.add_option("--learning-rate", f.config.learning_rate, "SGD step size")
      ->capture_default_str();
  app.add_option("--batch-size", f.config.batch_size, "Minibatch size")->capture_default_str();
  app.add_option("--momentum", f.config.momentum, "SGD momentum")->capture_default_str();
  app.add_option("--init-scale", f.config.init_scale, "Weight init scale")->capture_default_str();
  app.add_option("--train-fraction", f.train_fraction, "Share of rows used for training")
      ->capture_default_str();
  app.add_option("--seed", f.seed, "Random seed")->capture_default_str();
  app.add_option("--bounds", f.bounds, "Relevance input bounds: unit or empirical")
      ->capture_default_str();
  app.add_option("--statistics", f.statistics,
                 "Rows for imputation means: original or balanced")
      ->capture_default_str();
  app.add_flag("--no-oversample", f.no_oversample, "Train on the unbalanced split");
}

std::string ShapeString(const nn::Network& network) {
  std::string shape = std::to_string(network.input_dim());
  for (const nn::Layer& layer : network.layers) {
    shape += '-' + std::to_string(layer.spec.output_dim);
  }
  return shape;
}

double NetworkAccuracy(const nn::Network& network, const data::Dataset& dataset) {
  std::vector<int> predicted;
  predicted.reserve(dataset.rows());
  for (Eigen::Index r = 0; r < dataset.features.rows(); ++r) {
    predicted.push_back(static_cast<int>(
        nn::Forward(network, dataset.features.row(r).transpose()).predicted_class()));
  }
  return eval::Accuracy(predicted, dataset.labels);
}

int RunTrain(const TrainFlags& f, std::ostream& out) {
  data::BoundsMode bounds = data::BoundsMode::kUnit;
  if (f.bounds == "empirical") {
    bounds = data::BoundsMode::kEmpirical;
  } else if (f.bounds != "unit") {
    throw UsageError("--bounds must be unit or empirical");
  }
  if (f.statistics != "original" && f.statistics != "balanced") {
    throw UsageError("--statistics must be original or balanced");
  }
  if (f.test_data_out.empty() != f.test_costs_out.empty()) {
    throw UsageError("--test-data-out and --test-costs-out go together");
  }
  if (f.hidden == 0) throw UsageError("--hidden must be positive");
  try {
    f.config.Validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  const data::Dataset raw = data::LoadDataset(f.data, f.costs);
  raw.Validate();
  Rng seeds(f.seed);
  const std::uint64_t split_seed = seeds.next();
  const std::uint64_t oversample_seed = seeds.next();
  const std::uint64_t init_seed = seeds.next();
  nn::TrainConfig config = f.config;
  config.seed = seeds.next();

  const auto [raw_train, raw_test] = data::Split(raw, f.train_fraction, split_seed);
  const NormalizationSpec normalization = data::FitNormalization(raw_train.features);
  const data::Dataset train = data::ApplyNormalization(raw_train, normalization);
  const data::Dataset test = data::ApplyNormalization(raw_test, normalization);
  const data::Dataset fit_rows =
      f.no_oversample ? train : data::OversampleBalance(train, oversample_seed);

  const std::size_t classes = std::max<std::size_t>(raw.n_classes, 2);
  nn::Network network = nn::InitNetwork(
      nn::MlpSpecs(raw.feature_count(), f.hidden, f.layers, classes), init_seed, config.init_scale);
  network = nn::Fit(network, fit_rows.features, fit_rows.labels, config);

  Model model;
  model.network = std::move(network);
  model.feature_names = raw.feature_names;
  model.statistics = data::ComputeFeatureStatistics(
      f.statistics == "balanced" ? fit_rows : train, bounds);
  model.normalization = normalization;
  model.costs = raw.costs;
  model.static_order = acquisition::RelevanceStaticOrder(
      model.network, relevance::DefaultRuleAssignment(model.network, model.statistics),
      train.features);
  {
    std::ofstream model_file = OpenForWrite(f.model_out);
    WriteModel(model, model_file);
  }

  if (!f.test_data_out.empty()) {
    std::ofstream data_file = OpenForWrite(f.test_data_out);
    data::WriteDataCsv(raw_test, data_file);
    std::ofstream cost_file = OpenForWrite(f.test_costs_out);
    data::WriteCostCsv(raw_test, cost_file);
  }

  out << "shape," << ShapeString(model.network) << '\n'
      << "parameters," << model.network.parameter_count() << '\n'
      << "train_rows," << train.rows() << '\n'
      << "test_rows," << test.rows() << '\n'
      << "train_accuracy," << FormatShortest(NetworkAccuracy(model.network, train)) << '\n'
      << "test_accuracy," << FormatShortest(NetworkAccuracy(model.network, test)) << '\n';
  return kExitOk;
}

// ------------------------------------------------------- shared helpers

// Maps raw dataset values into the model's input space and checks the two
// agree on the feature set.
data::Dataset PrepareForModel(const Model& model, const data::Dataset& raw) {
  if (raw.feature_names != model.feature_names) {
    std::string message = "dataset features do not match the model:";
    const std::size_t n = std::max(raw.feature_names.size(), model.feature_names.size());
    for (std::size_t i = 0; i < n; ++i) {
      const std::string have = i < raw.feature_names.size() ? raw.feature_names[i] : "<none>";
      const std::string want = i < model.feature_names.size() ? model.feature_names[i] : "<none>";
      if (have != want) {
        message += " column " + std::to_string(i) + " is '" + have + "', model expects '" +
                   want + "'";
        break;
      }
    }
    throw std::runtime_error(message);
  }
  for (const int label : raw.labels) {
    if (label < 0 || static_cast<std::size_t>(label) >= model.n_classes()) {
      throw std::runtime_error("dataset label " + std::to_string(label) +
                               " is outside the model's classes");
    }
  }
  data::Dataset prepared = raw;
  prepared.n_classes = model.n_classes();
  if (model.normalization) return data::ApplyNormalization(prepared, *model.normalization);
  const auto& s = model.statistics;
  for (Eigen::Index r = 0; r < prepared.features.rows(); ++r) {
    const Eigen::VectorXd row = prepared.features.row(r).transpose();
    if ((row.array() < s.lower.array()).any() || (row.array() > s.upper.array()).any()) {
      throw std::runtime_error("row " + std::to_string(r) +
                               " lies outside the model's input bounds");
    }
  }
  return prepared;
}

acquisition::OutputHead ParseHead(const std::string& name) {
  if (name == "probabilities") return acquisition::OutputHead::kProbabilities;
  if (name == "logits") return acquisition::OutputHead::kLogits;
  throw UsageError("--head must be probabilities or logits");
}

StrategyKind ParseStrategyFlag(const std::string& name) {
  try {
    return acquisition::ParseStrategy(name);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

void RequireStaticOrder(const Model& model, StrategyKind kind) {
  if (kind == StrategyKind::kStatic && model.static_order.empty()) {
    throw std::runtime_error("the static strategy needs a model with a stored static_order");
  }
}

// ------------------------------------------------------------- evaluate

struct EvaluateFlags {
  std::string model;
  std::string data;
  std::string costs;
  std::string out_dir;
  std::vector<std::string> strategies = {"direct", "multiprop", "random", "cheapest"};
  StoppingFlags stopping;
  std::uint64_t seed = 0;
  std::size_t repeats = 1;
  std::vector<double> curve_budgets;
  std::string head = "probabilities";
  std::size_t ndcg_k = 5;
  std::string gain = "exponential";
  std::size_t threads = 1;
  bool episodes = false;
};

void RegisterEvaluate(CLI::App& app, EvaluateFlags& f) {
  app.add_option("--model", f.model, "Model file")->required();
  app.add_option("--data", f.data, "Data CSV in raw units")->required();
  app.add_option("--costs", f.costs, "Cost CSV")->required();
  app.add_option("--out-dir", f.out_dir, "Directory for curve.csv and summary.csv")->required();
  app.add_option("--strategies", f.strategies,
                 "Comma list of direct, multiprop, random, cheapest, static")
      ->delimiter(',')
      ->capture_default_str();
  f.stopping.Register(app);
  app.add_option("--seed", f.seed, "Random seed")->capture_default_str();
  app.add_option("--repeats", f.repeats, "Runs per strategy with consecutive seeds")
      ->capture_default_str();
  app.add_option("--curve-budgets", f.curve_budgets,
                 "Budgets to report; default is every reached cumulative cost")
      ->delimiter(',');
  app.add_option("--head", f.head, "Direct output relevance: probabilities or logits")
      ->capture_default_str();
  app.add_option("--ndcg-k", f.ndcg_k, "NDCG cutoff for data with a qid column")
      ->capture_default_str();
  app.add_option("--gain", f.gain, "NDCG gain: exponential or linear")->capture_default_str();
  app.add_option("--threads", f.threads, "Worker threads")->capture_default_str();
  app.add_flag("--episodes", f.episodes, "Also write episodes.csv");
}

int RunEvaluate(const EvaluateFlags& f, std::ostream& out) {
  eval::ComparisonConfig config;
  for (const std::string& name : f.strategies) {
    config.strategies.push_back(ParseStrategyFlag(name));
  }
  if (config.strategies.empty()) throw UsageError("--strategies is empty");
  config.stopping = f.stopping.Build();
  if (f.repeats == 0) throw UsageError("--repeats must be positive");
  if (f.threads == 0) throw UsageError("--threads must be positive");
  if (f.ndcg_k == 0) throw UsageError("--ndcg-k must be positive");
  config.seeds.clear();
  for (std::size_t r = 0; r < f.repeats; ++r) config.seeds.push_back(f.seed + r);
  config.budgets = f.curve_budgets;
  std::sort(config.budgets.begin(), config.budgets.end());
  config.head = ParseHead(f.head);
  config.ndcg_k = f.ndcg_k;
  if (f.gain == "linear") {
    config.gain = eval::Gain::kLinear;
  } else if (f.gain != "exponential") {
    throw UsageError("--gain must be exponential or linear");
  }
  config.threads = f.threads;

  const Model model = LoadModel(f.model);
  for (const StrategyKind kind : config.strategies) RequireStaticOrder(model, kind);
  config.static_order = model.static_order;
  const data::Dataset test = PrepareForModel(model, data::LoadDataset(f.data, f.costs));
  if (test.rows() == 0) throw std::runtime_error("dataset has no rows");

  const eval::ComparisonReport report =
      eval::CompareStrategies(model.network, model.statistics, test, config);
  const fs::path dir(f.out_dir);
  {
    std::ofstream curve = OpenForWrite(dir / "curve.csv");
    eval::WriteCurveCsv(report, curve);
    std::ofstream summary = OpenForWrite(dir / "summary.csv");
    eval::WriteSummaryCsv(report, summary);
    if (f.episodes) {
      std::ofstream episodes = OpenForWrite(dir / "episodes.csv");
      eval::WriteEpisodesCsv(report, test, episodes);
    }
  }
  out << "full_feature_accuracy," << FormatShortest(report.full_feature_accuracy) << '\n';
  eval::WriteSummaryCsv(report, out);
  return kExitOk;
}

// -------------------------------------------------------------- explain

struct ExplainFlags {
  std::string model;
  std::string row;
  std::string head = "probabilities";
};

void RegisterExplain(CLI::App& app, ExplainFlags& f) {
  app.add_option("--model", f.model, "Model file")->required();
  app.add_option("--row", f.row, "Comma-separated raw values; empty, ? or NA = unknown")
      ->required();
  app.add_option("--head", f.head, "Direct output relevance: probabilities or logits")
      ->capture_default_str();
}

// Raw partial row to the model's input space; unknown entries stay NaN.
Eigen::VectorXd NormalizePartial(const Model& model, const Eigen::VectorXd& raw) {
  Eigen::VectorXd x = raw;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (std::isnan(x(i))) continue;
    if (model.normalization) {
      x(i) = model.normalization->Apply(static_cast<std::size_t>(i), x(i));
    } else {
      x(i) = std::clamp(x(i), model.statistics.lower(i), model.statistics.upper(i));
    }
  }
  return x;
}

void WriteVectorLine(std::ostream& out, std::string_view label, const Eigen::VectorXd& v) {
  out << label;
  for (const double x : v) out << ',' << FormatShortest(x);
  out << '\n';
}

int RunExplain(const ExplainFlags& f, std::ostream& out) {
  const acquisition::OutputHead head = ParseHead(f.head);
  const Model model = LoadModel(f.model);
  const std::size_t m = model.feature_names.size();
  Eigen::VectorXd raw;
  try {
    raw = data::ParsePartialRow(f.row, m);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("malformed --row: ") + e.what());
  }
  const Eigen::VectorXd partial = NormalizePartial(model, raw);
  Eigen::VectorXd known(static_cast<Eigen::Index>(m));
  // std::vector<bool> has no contiguous storage to span over.
  const auto acquired = std::make_unique<bool[]>(m);
  for (std::size_t i = 0; i < m; ++i) {
    acquired[i] = !std::isnan(partial(static_cast<Eigen::Index>(i)));
    known(static_cast<Eigen::Index>(i)) = acquired[i] ? 1.0 : 0.0;
  }
  const std::span<const bool> status(acquired.get(), m);

  const Eigen::VectorXd filled = acquisition::Impute(partial, known, model.statistics);
  const nn::ForwardTrace trace = nn::Forward(model.network, filled);
  const relevance::RuleAssignment rules =
      relevance::DefaultRuleAssignment(model.network, model.statistics);

  WriteVectorLine(out, "prediction", trace.prediction);
  out << "predicted_class," << trace.predicted_class() << "\n\n";

  const Eigen::VectorXd direct_out = head == acquisition::OutputHead::kLogits
                                         ? relevance::OutputRelevanceLogits(trace)
                                         : relevance::OutputRelevanceDirect(trace.prediction);
  out << "[direct]\n";
  relevance::WriteExplanation(
      out, model.feature_names,
      relevance::RelevanceBackward(model.network, trace, rules, direct_out).input_relevance,
      direct_out, status);
  for (std::size_t c = 0; c < model.n_classes(); ++c) {
    const Eigen::VectorXd onehot = relevance::OutputRelevanceOneHot(c, model.n_classes());
    out << "\n[class " << c << "]\n";
    relevance::WriteExplanation(
        out, model.feature_names,
        relevance::RelevanceBackward(model.network, trace, rules, onehot).input_relevance,
        onehot, status);
  }
  return kExitOk;
}

// ---------------------------------------------------------- interactive

struct InteractiveFlags {
  std::string model;
  std::string costs;
  std::string strategy = "direct";
  std::string head = "probabilities";
  StoppingFlags stopping;
  std::uint64_t seed = 0;
};

void RegisterInteractive(CLI::App& app, InteractiveFlags& f) {
  app.add_option("--model", f.model, "Model file")->required();
  app.add_option("--costs", f.costs, "Cost CSV overriding the model's costs");
  app.add_option("--strategy", f.strategy, "direct, multiprop, random, cheapest or static")
      ->capture_default_str();
  app.add_option("--head", f.head, "Direct output relevance: probabilities or logits")
      ->capture_default_str();
  f.stopping.Register(app);
  app.add_option("--seed", f.seed, "Random seed")->capture_default_str();
}

// Asks the person at the terminal for each requested value, in raw units.
class PromptOracle : public acquisition::Oracle {
 public:
  PromptOracle(const Model& model, const CostVector& costs, std::istream& in, std::ostream& out)
      : model_(model), costs_(costs), in_(in), out_(out) {}

  double Reveal(std::size_t feature) override {
    out_ << "next: " << model_.feature_names[feature] << " (cost "
         << FormatShortest(costs_[feature]) << ")\n";
    std::string line;
    while (true) {
      out_ << "value> " << std::flush;
      if (!std::getline(in_, line)) {
        out_ << '\n';
        throw OracleError("input ended");
      }
      const auto begin = line.find_first_not_of(" \t\r");
      const auto end = line.find_last_not_of(" \t\r");
      const std::string_view cell =
          begin == std::string::npos ? std::string_view()
                                     : std::string_view(line).substr(begin, end - begin + 1);
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
      if (!cell.empty() && ec == std::errc() && ptr == cell.data() + cell.size() &&
          std::isfinite(value)) {
        const auto i = static_cast<Eigen::Index>(feature);
        if (model_.normalization) return model_.normalization->Apply(feature, value);
        return std::clamp(value, model_.statistics.lower(i), model_.statistics.upper(i));
      }
      out_ << "not a number, try again\n";
    }
  }

 private:
  const Model& model_;
  const CostVector& costs_;
  std::istream& in_;
  std::ostream& out_;
};

int RunInteractive(const InteractiveFlags& f, std::istream& in, std::ostream& out) {
  const StrategyKind kind = ParseStrategyFlag(f.strategy);
  const acquisition::OutputHead head = ParseHead(f.head);
  const acquisition::StoppingRule stopping = f.stopping.Build();
  const Model model = LoadModel(f.model);
  RequireStaticOrder(model, kind);

  CostVector costs;
  if (!f.costs.empty()) {
    std::ifstream cost_file(f.costs);
    if (!cost_file) throw std::runtime_error("cannot read " + f.costs);
    costs = data::ReadCosts(cost_file, model.feature_names);
  } else if (model.costs) {
    costs = *model.costs;
  } else {
    throw std::runtime_error("the model stores no costs; pass --costs");
  }

  const relevance::RuleAssignment rules =
      relevance::DefaultRuleAssignment(model.network, model.statistics);
  const acquisition::StrategyResources resources{model.network, rules, model.static_order, head};
  const auto strategy = acquisition::MakeStrategy(kind, resources, f.seed);
  PromptOracle oracle(model, costs, in, out);
  const auto report = [&](const acquisition::AcquisitionState& state,
                          const nn::ForwardTrace& trace) {
    out << "step " << state.step() << ": class " << trace.predicted_class() << " (confidence "
        << FormatShortest(trace.confidence()) << "), cost so far "
        << FormatShortest(state.cumulative_cost()) << '\n';
  };
  const acquisition::EpisodeRecord record = acquisition::RunEpisode(
      model.network, model.statistics, costs, oracle, *strategy, stopping, report);

  if (record.aborted) out << "session ended early: " << record.error << '\n';
  const Eigen::VectorXd& final_prediction = record.final_prediction();
  out << "final prediction: class " << eval::PredictedClass(final_prediction)
      << " (confidence " << FormatShortest(final_prediction.maxCoeff()) << ")\n"
      << "acquired:";
  for (const auto& step : record.steps) out << ' ' << model.feature_names[step.feature];
  out << "\ntotal cost: " << FormatShortest(record.total_cost()) << '\n';
  return kExitOk;
}

}  // namespace

int Run(std::span<const std::string> args, std::istream& in, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Cost-sensitive feature acquisition guided by relevance propagation", "relacq"};
  app.require_subcommand(1);

  SynthFlags synth_flags;
  TrainFlags train_flags;
  EvaluateFlags evaluate_flags;
  ExplainFlags explain_flags;
  InteractiveFlags interactive_flags;
  CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic dataset and cost file");
  CLI::App* train = app.add_subcommand("train", "Normalize, split, balance and train a model");
  CLI::App* evaluate = app.add_subcommand("evaluate", "Compare strategies on held-out data");
  CLI::App* explain = app.add_subcommand("explain", "Print per-feature relevance for one row");
  CLI::App* interactive =
      app.add_subcommand("interactive", "Acquire features by asking at the terminal");
  RegisterSynth(*synth, synth_flags);
  RegisterTrain(*train, train_flags);
  RegisterEvaluate(*evaluate, evaluate_flags);
  RegisterExplain(*explain, explain_flags);
  RegisterInteractive(*interactive, interactive_flags);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsageError;
  }

  try {
    if (synth->parsed()) return RunSynth(synth_flags, out);
    if (train->parsed()) return RunTrain(train_flags, out);
    if (evaluate->parsed()) return RunEvaluate(evaluate_flags, out);
    if (explain->parsed()) return RunExplain(explain_flags, out);
    if (interactive->parsed()) return RunInteractive(interactive_flags, in, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntimeError;
  }
  return kExitUsageError;
}

}  // namespace relacq::cli
