/*
 * Copyright 2026 The FairUDT Authors.
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

#include "fairudt/eval.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>

#include "fairudt/errors.h"
#include "fairudt/fingerprint.h"
#include "fairudt/random.h"
#include "fairudt/relabel.h"
#include "fmt/format.h"
#include "json.hpp"

namespace fairudt {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Stream ids under the sweep seed.
constexpr std::uint64_t kSplitStream = 0;
constexpr std::uint64_t kTrainPlanStream = 1 << 20;
constexpr std::uint64_t kTestPlanStream = 2 << 20;
constexpr std::uint64_t kInitStream = 0x5eed;
constexpr std::uint64_t kKFoldStream = 0xf01d;

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// -log P(y | z) for the logistic link.
double LogLoss(double z, bool positive) {
  const double softplus = std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
  return positive ? softplus - z : softplus;
}

double ParseDouble(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  double value = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError(fmt::format("bad number '{}' in sigma grid", text));
  }
  return value;
}

template <typename F>
double OrNaN(F&& metric) {
  try {
    return metric();
  } catch (const MetricUndefinedError&) {
    return kNaN;
  }
}

MetricSummary Summarize(const std::vector<double>& values) {
  MetricSummary s;
  double sum = 0;
  for (double v : values) {
    if (std::isnan(v)) continue;
    sum += v;
    ++s.count;
  }
  if (s.count == 0) return {kNaN, kNaN, 0};
  s.mean = sum / static_cast<double>(s.count);
  if (s.count > 1) {
    double ss = 0;
    for (double v : values) {
      if (!std::isnan(v)) ss += (v - s.mean) * (v - s.mean);
    }
    s.stddev = std::sqrt(ss / static_cast<double>(s.count - 1));
  }
  return s;
}

std::vector<bool> Labels(const DataTable& table) {
  std::vector<bool> out(table.num_rows());
  for (std::size_t r = 0; r < out.size(); ++r) out[r] = table.is_positive(r);
  return out;
}

std::vector<bool> Groups(const DataTable& table) {
  std::vector<bool> out(table.num_rows());
  for (std::size_t r = 0; r < out.size(); ++r) out[r] = table.is_favored(r);
  return out;
}

FoldMetrics MeasureFold(const std::vector<bool>& labels,
                    const std::vector<bool>& predictions,
                    const std::vector<bool>& favored) {
  const GroupConfusion c = Tally(labels, predictions, favored);
  const Confusion all = c.overall();
  FoldMetrics m;
  m.dp = OrNaN([&] { return DemographicParity(c); });
  m.aod = OrNaN([&] { return AverageOddsDifference(c); });
  m.ba = OrNaN([&] { return BalancedAccuracy(all); });
  m.acc = OrNaN([&] { return Accuracy(all); });
  return m;
}

std::string Num(double v) {
  if (std::isnan(v)) return "";
  return fmt::format("{}", v);
}

nlohmann::json LinearJson(const LinearConfig& c) {
  return {{"model", "logistic-regression/gradient-descent"},
          {"epochs", c.epochs},
          {"learning_rate", c.learning_rate},
          {"l2", c.l2},
          {"seed", c.seed},
          {"use_sensitive", c.use_sensitive}};
}

}  // namespace

void LinearModel::CheckSchema(const DataTable& table) const {
  if (table.SchemaFingerprint() != schema_fingerprint_) {
    throw ConfigError("table schema differs from the model's training schema");
  }
}

double LinearModel::Score(const DataTable& table, std::size_t row) const {
  double z = bias_;
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    z += weights_[offsets_[i] + table.at(row, columns_[i])];
  }
  return Sigmoid(z);
}

std::vector<double> LinearModel::ScoreAll(const DataTable& table) const {
  CheckSchema(table);
  std::vector<double> out(table.num_rows());
  for (std::size_t r = 0; r < out.size(); ++r) out[r] = Score(table, r);
  return out;
}

std::vector<bool> LinearModel::PredictAll(const DataTable& table) const {
  const std::vector<double> scores = ScoreAll(table);
  std::vector<bool> out(scores.size());
  for (std::size_t r = 0; r < out.size(); ++r) out[r] = scores[r] >= 0.5;
  return out;
}

LinearModel TrainLinear(const DataTable& table, const LinearConfig& config,
                        std::vector<double>* loss_history) {
  if (config.epochs < 0) throw ConfigError("epochs must be non-negative");
  if (!(config.learning_rate > 0 && config.learning_rate <= 1)) {
    throw ConfigError("learning rate must lie in (0, 1]");
  }
  if (!(config.l2 >= 0)) throw ConfigError("l2 must be non-negative");
  const std::size_t n = table.num_rows();
  if (n < 2) throw DataError("cannot train a classifier on fewer than 2 rows");
  std::size_t positives = 0;
  for (std::size_t r = 0; r < n; ++r) positives += table.is_positive(r) ? 1 : 0;
  if (positives == 0 || positives == n) {
    throw DataError("cannot train a classifier on single-class data");
  }

  LinearModel model;
  model.config_ = config;
  model.schema_fingerprint_ = table.SchemaFingerprint();
  std::size_t width = 0;
  for (std::size_t c = 0; c < table.num_columns(); ++c) {
    if (c == table.label_column()) continue;
    if (c == table.sensitive_column() && !config.use_sensitive) continue;
    if (table.attribute(c).kind != AttributeKind::kCategorical) {
      throw ConfigError(fmt::format(
          "column '{}' is numeric; discretize it before training",
          table.attribute(c).name));
    }
    model.columns_.push_back(c);
    model.offsets_.push_back(width);
    width += table.attribute(c).outcomes.size();
  }
  const std::size_t m = model.columns_.size();

  // Row-major active feature indices.
  std::vector<std::uint32_t> active(n * m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto column = table.column(model.columns_[i]);
    for (std::size_t r = 0; r < n; ++r) {
      active[r * m + i] =
          static_cast<std::uint32_t>(model.offsets_[i] + column[r]);
    }
  }
  std::vector<bool> y(n);
  for (std::size_t r = 0; r < n; ++r) y[r] = table.is_positive(r);

  auto engine = MakeEngine(config.seed, kInitStream);
  model.weights_.resize(width);
  for (double& w : model.weights_) w = (UniformUnit(engine) - 0.5) * 1e-3;

  // Each row has m active unit features plus the bias, so the loss gradient
  // is ((m + 1) / 4 + l2)-Lipschitz; a step of at most the inverse never
  // increases the objective.
  const double step =
      config.learning_rate / ((static_cast<double>(m) + 1) / 4 + config.l2);
  const double inv_n = 1.0 / static_cast<double>(n);
  std::vector<double> grad(width);

  auto objective_and_gradient = [&](bool want_gradient) {
    std::fill(grad.begin(), grad.end(), 0.0);
    double grad_bias = 0;
    double loss = 0;
    for (std::size_t r = 0; r < n; ++r) {
      const std::uint32_t* idx = &active[r * m];
      double z = model.bias_;
      for (std::size_t i = 0; i < m; ++i) z += model.weights_[idx[i]];
      loss += LogLoss(z, y[r]);
      if (want_gradient) {
        const double residual = Sigmoid(z) - (y[r] ? 1.0 : 0.0);
        grad_bias += residual;
        for (std::size_t i = 0; i < m; ++i) grad[idx[i]] += residual;
      }
    }
    double penalty = 0;
    for (double w : model.weights_) penalty += w * w;
    return std::pair{loss * inv_n + 0.5 * config.l2 * penalty,
                     grad_bias * inv_n};
  };

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const auto [loss, grad_bias] = objective_and_gradient(true);
    if (loss_history != nullptr) loss_history->push_back(loss);
    for (std::size_t j = 0; j < width; ++j) {
      model.weights_[j] -= step * (grad[j] * inv_n + config.l2 * model.weights_[j]);
    }
    model.bias_ -= step * grad_bias;
  }
  if (loss_history != nullptr) {
    loss_history->push_back(objective_and_gradient(false).first);
  }
  return model;
}

SplitIndices Split(std::size_t num_rows, double test_fraction,
                   std::uint64_t seed) {
  if (!(test_fraction > 0 && test_fraction < 1)) {
    throw ConfigError("test fraction must lie strictly between 0 and 1");
  }
  if (num_rows < 2) throw ConfigError("cannot split fewer than 2 rows");
  const auto wanted = static_cast<std::size_t>(
      std::llround(static_cast<double>(num_rows) * test_fraction));
  const std::size_t test_size = std::clamp<std::size_t>(wanted, 1, num_rows - 1);
  auto engine = MakeEngine(seed, kSplitStream);
  const std::vector<std::size_t> order = Permutation(num_rows, engine);
  SplitIndices out;
  out.test.assign(order.begin(), order.begin() + test_size);
  out.train.assign(order.begin() + test_size, order.end());
  std::sort(out.test.begin(), out.test.end());
  std::sort(out.train.begin(), out.train.end());
  return out;
}

std::vector<std::vector<std::size_t>> KFold(std::size_t num_rows, int k,
                                            std::uint64_t seed) {
  if (k < 2) throw ConfigError("k-fold needs k >= 2");
  if (static_cast<std::size_t>(k) > num_rows) {
    throw ConfigError(
        fmt::format("k-fold with k = {} exceeds the {} rows", k, num_rows));
  }
  auto engine = MakeEngine(seed, kKFoldStream);
  const std::vector<std::size_t> order = Permutation(num_rows, engine);
  std::vector<std::vector<std::size_t>> folds(k);
  for (std::size_t i = 0; i < num_rows; ++i) folds[i % k].push_back(order[i]);
  for (auto& fold : folds) std::sort(fold.begin(), fold.end());
  return folds;
}

std::vector<double> ParseSigmaGrid(const std::string& text) {
  std::vector<double> grid;
  const std::size_t colon = text.find(':');
  if (colon != std::string::npos) {
    const std::size_t second = text.find(':', colon + 1);
    if (second == std::string::npos ||
        text.find(':', second + 1) != std::string::npos) {
      throw ConfigError(fmt::format(
          "sigma grid '{}' must be start:stop:step or a comma list", text));
    }
    const double start = ParseDouble(std::string_view(text).substr(0, colon));
    const double stop = ParseDouble(
        std::string_view(text).substr(colon + 1, second - colon - 1));
    const double step = ParseDouble(std::string_view(text).substr(second + 1));
    if (!(step > 0) || !(stop >= start)) {
      throw ConfigError(fmt::format(
          "sigma grid '{}' needs step > 0 and stop >= start", text));
    }
    const auto count =
        static_cast<long long>(std::floor((stop - start) / step + 1e-9)) + 1;
    if (count > 100000) throw ConfigError("sigma grid is too large");
    for (long long i = 0; i < count; ++i) {
      // Round to 12 decimals so 0.1 steps print as 0.3, not 0.30000000000000004.
      const double v = std::round((start + static_cast<double>(i) * step) * 1e12) / 1e12;
      grid.push_back(v);
    }
  } else {
    std::size_t begin = 0;
    while (true) {
      const std::size_t comma = text.find(',', begin);
      grid.push_back(ParseDouble(std::string_view(text).substr(
          begin, comma == std::string::npos ? std::string::npos : comma - begin)));
      if (comma == std::string::npos) break;
      begin = comma + 1;
    }
  }
  for (double v : grid) {
    if (!(v >= 0 && v <= 2)) {
      throw ConfigError(fmt::format("sigma {} lies outside [0, 2]", v));
    }
  }
  return grid;
}

std::string_view SweepVariantName(SweepVariant variant) {
  switch (variant) {
    case SweepVariant::kBaseline:
      return "baseline";
    case SweepVariant::kRaw:
      return "raw";
    case SweepVariant::kRelabeled:
      return "relabeled";
  }
  return "?";
}

const SweepRow* SweepResult::Find(SweepVariant variant, double sigma) const {
  for (const auto& row : rows) {
    if (row.variant == variant &&
        (variant == SweepVariant::kBaseline || row.sigma == sigma)) {
      return &row;
    }
  }
  return nullptr;
}

SweepResult Sweep(const DataTable& table, const SweepConfig& config) {
  if (config.folds < 1) throw ConfigError("sweep needs at least one fold");
  if (config.sigma_grid.empty()) throw ConfigError("empty sigma grid");
  for (double sigma : config.sigma_grid) {
    if (!(sigma >= 0 && sigma <= 2)) {
      throw ConfigError(fmt::format("sigma {} lies outside [0, 2]", sigma));
    }
  }
  const DataTable data = DiscretizeAll(table, config.binning, config.bins);

  SweepResult result;
  result.config = config;
  result.data_fingerprint = Fingerprinter()
                                .Add(table.SchemaFingerprint())
                                .Add(table.OutcomeFingerprint())
                                .value();

  for (int fold = 0; fold < config.folds; ++fold) {
    const auto f = static_cast<std::uint64_t>(fold);
    const SplitIndices split = Split(
        data.num_rows(), config.test_fraction, MixSeed(config.seed, kSplitStream + f));
    const DataTable train = data.Subset(split.train);
    const DataTable test = data.Subset(split.test);
    const std::vector<bool> test_labels = Labels(test);
    const std::vector<bool> test_groups = Groups(test);

    const LinearModel baseline_model = TrainLinear(train, config.linear);
    const std::vector<bool> baseline_predictions =
        baseline_model.PredictAll(test);
    FoldMetrics baseline =
        MeasureFold(test_labels, baseline_predictions, test_groups);
    baseline.fold = fold;
    baseline.variant = SweepVariant::kBaseline;
    baseline.sigma = kNaN;
    result.folds.push_back(baseline);

    const FairTree tree = Build(train, config.criterion, config.tree);
    for (double sigma : config.sigma_grid) {
      const RelabelPlan plan =
          Plan(tree, train, sigma, MixSeed(config.seed, kTrainPlanStream + f));
      const RelabeledTable relabeled = Apply(plan, train);
      // An unchanged training set gives the baseline model bit for bit.
      const std::vector<bool> predictions =
          relabeled.changed_rows == 0
              ? baseline_predictions
              : TrainLinear(relabeled.table, config.linear).PredictAll(test);

      FoldMetrics raw = MeasureFold(test_labels, predictions, test_groups);
      raw.fold = fold;
      raw.variant = SweepVariant::kRaw;
      raw.sigma = sigma;
      raw.relabeled_leaves = plan.actions.size();
      raw.relabeled_rows = relabeled.changed_rows;
      result.folds.push_back(raw);

      const RelabelPlan test_plan =
          Plan(tree, test, sigma, MixSeed(config.seed, kTestPlanStream + f));
      const RelabeledTable test_relabeled = Apply(test_plan, test);
      FoldMetrics rel =
          MeasureFold(Labels(test_relabeled.table), predictions, test_groups);
      rel.fold = fold;
      rel.variant = SweepVariant::kRelabeled;
      rel.sigma = sigma;
      rel.relabeled_leaves = plan.actions.size();
      rel.relabeled_rows = relabeled.changed_rows;
      result.folds.push_back(rel);
    }
  }

  auto aggregate = [&](SweepVariant variant, double sigma) {
    std::vector<double> dp, aod, ba, acc;
    double changed = 0;
    for (const auto& m : result.folds) {
      if (m.variant != variant) continue;
      if (variant != SweepVariant::kBaseline && m.sigma != sigma) continue;
      dp.push_back(m.dp);
      aod.push_back(m.aod);
      ba.push_back(m.ba);
      acc.push_back(m.acc);
      changed += static_cast<double>(m.relabeled_rows);
    }
    SweepRow row;
    row.variant = variant;
    row.sigma = variant == SweepVariant::kBaseline ? kNaN : sigma;
    row.dp = Summarize(dp);
    row.aod = Summarize(aod);
    row.ba = Summarize(ba);
    row.acc = Summarize(acc);
    row.relabeled_rows = changed / static_cast<double>(config.folds);
    return row;
  };
  result.rows.push_back(aggregate(SweepVariant::kBaseline, 0));
  for (SweepVariant variant : {SweepVariant::kRaw, SweepVariant::kRelabeled}) {
    for (double sigma : config.sigma_grid) {
      result.rows.push_back(aggregate(variant, sigma));
    }
  }
  return result;
}

std::string SweepToCsv(const SweepResult& result) {
  std::string out =
      "variant,sigma,folds,dp_mean,dp_std,dp_n,aod_mean,aod_std,aod_n,"
      "ba_mean,ba_std,ba_n,acc_mean,acc_std,acc_n,relabeled_rows_mean\n";
  for (const auto& r : result.rows) {
    out += fmt::format("{},{},{}", SweepVariantName(r.variant), Num(r.sigma),
                       result.config.folds);
    for (const MetricSummary* s : {&r.dp, &r.aod, &r.ba, &r.acc}) {
      out += fmt::format(",{},{},{}", Num(s->mean), Num(s->stddev), s->count);
    }
    out += fmt::format(",{}\n", r.relabeled_rows);
  }
  return out;
}

std::string SweepFoldsToCsv(const SweepResult& result) {
  std::string out =
      "fold,variant,sigma,dp,aod,ba,acc,relabeled_leaves,relabeled_rows\n";
  for (const auto& m : result.folds) {
    out += fmt::format("{},{},{},{},{},{},{},{},{}\n", m.fold,
                       SweepVariantName(m.variant), Num(m.sigma), Num(m.dp),
                       Num(m.aod), Num(m.ba), Num(m.acc), m.relabeled_leaves,
                       m.relabeled_rows);
  }
  return out;
}

std::string SweepManifest(const SweepResult& result) {
  const SweepConfig& c = result.config;
  nlohmann::json doc{
      {"format", "fairudt-sweep-manifest"},
      {"version", 1},
      {"criterion", CriterionName(c.criterion)},
      {"sigma_grid", c.sigma_grid},
      {"folds", c.folds},
      {"fold_scheme", "repeated-shuffle-split"},
      {"test_fraction", c.test_fraction},
      {"seed", c.seed},
      {"generator", kGeneratorName},
      {"tree", {{"min_rows", c.tree.min_rows},
                {"attribute_policy", kAttributePolicy}}},
      {"classifier", LinearJson(c.linear)},
      {"discretization",
       {{"strategy", BinningStrategyName(c.binning)}, {"bins", c.bins}}},
      {"data_fingerprint", FingerprintToHex(result.data_fingerprint)},
      {"sign_convention", kSignConvention}};
  return doc.dump(1);
}

}  // namespace fairudt
