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
#include <cmath>
#include <set>

#include "fairudt/errors.h"
#include "fairudt/random.h"
#include "fairudt/relabel.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace fairudt {
namespace {

using testing::MakeTable;

std::vector<bool> Labels(const DataTable& t) {
  std::vector<bool> out(t.num_rows());
  for (std::size_t r = 0; r < out.size(); ++r) out[r] = t.is_positive(r);
  return out;
}

TEST(LinearTest, SeparableToy) {
  oracle::Dataset d;
  d.arity = {2};
  d.rows = {{true, true, {0}}, {false, true, {0}}, {true, false, {1}},
            {false, false, {1}}};
  const DataTable t = MakeTable(d);
  const LinearModel m = TrainLinear(t, {});
  EXPECT_EQ(m.PredictAll(t), Labels(t));
}

TEST(LinearTest, UninformativeFeaturesGiveMajority) {
  oracle::Dataset d;
  d.arity = {2};
  // Each feature value sees the same 3:1 class mix.
  for (int i = 0; i < 16; ++i) {
    d.rows.push_back({(i / 4) % 2 == 0, (i / 2) % 4 != 3, {i % 2}});
  }
  LinearConfig config;
  config.use_sensitive = false;
  const DataTable t = MakeTable(d);
  for (bool p : TrainLinear(t, config).PredictAll(t)) EXPECT_TRUE(p);
}

TEST(LinearTest, DeterministicAndDescending) {
  const DataTable t = DiscretizeAll(testing::LoadGerman(),
                                    BinningStrategy::kEqualFrequency, 4);
  LinearConfig config;
  config.epochs = 120;
  config.seed = 17;
  std::vector<double> history;
  const LinearModel a = TrainLinear(t, config, &history);
  const LinearModel b = TrainLinear(t, config);
  EXPECT_EQ(a.weights(), b.weights());
  EXPECT_EQ(a.bias(), b.bias());
  ASSERT_EQ(history.size(), 121u);
  for (std::size_t i = 1; i < history.size(); ++i) {
    EXPECT_LE(history[i], history[i - 1] + 1e-12) << "epoch " << i;
  }
  EXPECT_LT(history.back(), history.front());
  config.seed = 18;
  EXPECT_NE(TrainLinear(t, config).weights(), a.weights());
}

TEST(LinearTest, RejectsBadInput) {
  oracle::Dataset one_class;
  one_class.arity = {2};
  one_class.rows = {{true, true, {0}}, {false, true, {1}}};
  EXPECT_THROW(TrainLinear(MakeTable(one_class), {}), DataError);
  one_class.rows.resize(1);
  EXPECT_THROW(TrainLinear(MakeTable(one_class), {}), DataError);
  EXPECT_THROW(TrainLinear(testing::LoadGerman(), {}), ConfigError);
  LinearConfig bad;
  bad.learning_rate = 1.5;
  oracle::Dataset ok = one_class;
  ok.rows = {{true, true, {0}}, {false, false, {1}}};
  EXPECT_THROW(TrainLinear(MakeTable(ok), bad), ConfigError);
}

TEST(SplitTest, SizesAndDeterminism) {
  const SplitIndices s = Split(1000, 0.25, 3);
  EXPECT_EQ(s.test.size(), 250u);
  EXPECT_EQ(s.train.size(), 750u);
  std::vector<std::size_t> all = s.train;
  all.insert(all.end(), s.test.begin(), s.test.end());
  std::sort(all.begin(), all.end());
  for (std::size_t i = 0; i < all.size(); ++i) ASSERT_EQ(all[i], i);
  EXPECT_EQ(Split(1000, 0.25, 3).test, s.test);
  EXPECT_NE(Split(1000, 0.25, 4).test, s.test);
  EXPECT_THROW(Split(10, 0.0, 1), ConfigError);
  EXPECT_THROW(Split(10, 1.0, 1), ConfigError);
}

TEST(SplitTest, KFoldPartitions) {
  const auto folds = KFold(8, 4, 1);
  ASSERT_EQ(folds.size(), 4u);
  std::set<std::size_t> seen;
  for (const auto& f : folds) {
    EXPECT_EQ(f.size(), 2u);
    for (std::size_t i : f) EXPECT_TRUE(seen.insert(i).second);
  }
  EXPECT_EQ(seen.size(), 8u);
  EXPECT_EQ(KFold(8, 4, 1), folds);
  for (const auto& f : KFold(10, 3, 2)) EXPECT_TRUE(f.size() == 3 || f.size() == 4);
  EXPECT_THROW(KFold(3, 4, 1), ConfigError);
  EXPECT_THROW(KFold(3, 1, 1), ConfigError);
}

TEST(SweepTest, GridParsing) {
  const auto grid = ParseSigmaGrid("0:2:0.1");
  ASSERT_EQ(grid.size(), 21u);
  EXPECT_EQ(grid[3], 0.3);
  EXPECT_EQ(grid.back(), 2.0);
  EXPECT_EQ(ParseSigmaGrid("0.5, 1,1.5"), (std::vector<double>{0.5, 1, 1.5}));
  EXPECT_EQ(ParseSigmaGrid("1"), std::vector<double>{1});
  for (const char* bad : {"", "a:b:c", "0:2", "0:2:0", "2:0:0.1", "0,3", "x",
                          "0:2:0.1:4", "1,"}) {
    EXPECT_THROW(ParseSigmaGrid(bad), ConfigError) << bad;
  }
}

TEST(SweepTest, BaselineMatchesDirectEvaluation) {
  const DataTable raw = testing::LoadGerman();
  SweepConfig config;
  config.sigma_grid = {0.0, 1.0, 2.0};
  config.folds = 2;
  config.seed = 9;
  config.linear.epochs = 60;
  const SweepResult result = Sweep(raw, config);
  ASSERT_EQ(result.rows.size(), 7u);
  EXPECT_EQ(result.folds.size(), 2u * 7);

  // Recompute the first fold's baseline by hand.
  const DataTable data =
      DiscretizeAll(raw, BinningStrategy::kEqualFrequency, 4);
  const SplitIndices split =
      Split(data.num_rows(), 0.25, MixSeed(config.seed, 0));
  const DataTable test = data.Subset(split.test);
  const auto preds =
      TrainLinear(data.Subset(split.train), config.linear).PredictAll(test);
  std::vector<bool> groups(test.num_rows());
  for (std::size_t r = 0; r < groups.size(); ++r) groups[r] = test.is_favored(r);
  const FairnessReport direct = Evaluate(Labels(test), preds, groups);
  const FoldMetrics& base = result.folds[0];
  EXPECT_EQ(base.variant, SweepVariant::kBaseline);
  EXPECT_EQ(base.dp, direct.dp);
  EXPECT_EQ(base.aod, direct.aod);
  EXPECT_EQ(base.ba, direct.ba);
  EXPECT_EQ(base.acc, direct.acc);

  for (const auto& row : result.rows) {
    EXPECT_GE(row.dp.stddev, 0);
    EXPECT_EQ(row.dp.count, 2u);
  }
  // Scope shrinks as sigma grows.
  for (int fold = 0; fold < 2; ++fold) {
    std::vector<std::size_t> leaves;
    for (const auto& m : result.folds) {
      if (m.fold == fold && m.variant == SweepVariant::kRaw) {
        leaves.push_back(m.relabeled_leaves);
      }
    }
    EXPECT_TRUE(std::is_sorted(leaves.rbegin(), leaves.rend()));
  }
  const std::string csv = SweepToCsv(result);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 8);
  EXPECT_NE(SweepManifest(result).find("\"seed\": 9"), std::string::npos);
  EXPECT_EQ(SweepToCsv(Sweep(raw, config)), csv);
}

TEST(SweepTest, RejectsBadConfig) {
  const DataTable raw = testing::LoadGerman();
  SweepConfig config;
  EXPECT_THROW(Sweep(raw, config), ConfigError);
  config.sigma_grid = {2.5};
  EXPECT_THROW(Sweep(raw, config), ConfigError);
  config.sigma_grid = {1};
  config.folds = 0;
  EXPECT_THROW(Sweep(raw, config), ConfigError);
}

}  // namespace
}  // namespace fairudt
