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

#ifndef FAIRUDT_EVAL_H_
#define FAIRUDT_EVAL_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fairudt/data.h"
#include "fairudt/metrics.h"
#include "fairudt/tree.h"

namespace fairudt {

struct LinearConfig {
  int epochs = 300;
  // Fraction of the step that guarantees monotone descent; (0, 1].
  double learning_rate = 1.0;
  double l2 = 1e-4;
  std::uint64_t seed = 0;
  // Include the sensitive attribute among the features.
  bool use_sensitive = true;
};

// Logistic regression over a one-hot encoding of the categorical columns.
class LinearModel {
 public:
  LinearModel() = default;

  // P(y+ | row).
  double Score(const DataTable& table, std::size_t row) const;
  bool Predict(const DataTable& table, std::size_t row) const {
    return Score(table, row) >= 0.5;
  }
  std::vector<double> ScoreAll(const DataTable& table) const;
  std::vector<bool> PredictAll(const DataTable& table) const;

  const std::vector<double>& weights() const { return weights_; }
  double bias() const { return bias_; }
  const LinearConfig& config() const { return config_; }

 private:
  friend LinearModel TrainLinear(const DataTable&, const LinearConfig&,
                                 std::vector<double>*);
  void CheckSchema(const DataTable& table) const;

  LinearConfig config_;
  std::uint64_t schema_fingerprint_ = 0;
  std::vector<std::size_t> columns_;
  std::vector<std::size_t> offsets_;  // first weight of each column
  std::vector<double> weights_;
  double bias_ = 0;
};

// Full-batch gradient descent on mean log-loss plus l2/2 |w|^2. All feature
// columns must be categorical (ConfigError otherwise). Throws DataError when
// the table has fewer than 2 rows or one class only. `loss_history`, when
// given, receives the objective before each epoch and after the last.
LinearModel TrainLinear(const DataTable& table, const LinearConfig& config,
                        std::vector<double>* loss_history = nullptr);

struct SplitIndices {
  std::vector<std::size_t> train;  // ascending
  std::vector<std::size_t> test;   // ascending
};

// Seeded shuffle split; the test part holds round(n * test_fraction) rows,
// at least one, leaving at least one for training.
SplitIndices Split(std::size_t num_rows, double test_fraction,
                   std::uint64_t seed);

// k disjoint folds covering 0..n-1, sizes differing by at most one, each
// ascending. ConfigError unless 2 <= k <= n.
std::vector<std::vector<std::size_t>> KFold(std::size_t num_rows, int k,
                                            std::uint64_t seed);

struct SweepConfig {
  Criterion criterion = Criterion::kKlRatio;
  std::vector<double> sigma_grid;
  // Number of repeated train/test splits.
  int folds = 10;
  double test_fraction = 0.25;
  std::uint64_t seed = 0;
  TreeConfig tree;
  LinearConfig linear;
  BinningStrategy binning = BinningStrategy::kEqualFrequency;
  int bins = 4;
};

// Parses "start:stop:step" (inclusive, tolerant of float drift) or a comma
// list. Every value must lie in [0, 2]; ConfigError otherwise.
std::vector<double> ParseSigmaGrid(const std::string& text);

enum class SweepVariant { kBaseline, kRaw, kRelabeled };
std::string_view SweepVariantName(SweepVariant variant);

// One evaluation of one fold. Undefined metrics are NaN.
struct FoldMetrics {
  int fold = 0;
  SweepVariant variant = SweepVariant::kBaseline;
  double sigma = 0;  // NaN for the baseline
  double dp = 0;
  double aod = 0;
  double ba = 0;
  double acc = 0;
  std::size_t relabeled_leaves = 0;
  std::size_t relabeled_rows = 0;
};

struct MetricSummary {
  double mean = 0;
  double stddev = 0;  // sample standard deviation, 0 for a single value
  std::size_t count = 0;  // defined values
};

struct SweepRow {
  SweepVariant variant = SweepVariant::kBaseline;
  double sigma = 0;
  MetricSummary dp;
  MetricSummary aod;
  MetricSummary ba;
  MetricSummary acc;
  double relabeled_rows = 0;  // mean over folds
};

struct SweepResult {
  SweepConfig config;
  std::uint64_t data_fingerprint = 0;
  std::vector<FoldMetrics> folds;
  // Baseline first, then (sigma, raw) and (sigma, relabeled) in grid order.
  std::vector<SweepRow> rows;

  const SweepRow& baseline() const { return rows.front(); }
  const SweepRow* Find(SweepVariant variant, double sigma) const;
};

// For each fold: split, fit the tree on the training part, then for every
// sigma relabel the training part, fit the classifier and score the test
// part against its raw labels and against labels relabeled through the same
// tree. Numeric features are discretized over the whole table first.
SweepResult Sweep(const DataTable& table, const SweepConfig& config);

std::string SweepToCsv(const SweepResult& result);
std::string SweepFoldsToCsv(const SweepResult& result);
std::string SweepManifest(const SweepResult& result);

}  // namespace fairudt

#endif  // FAIRUDT_EVAL_H_
