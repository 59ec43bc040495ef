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

#include <cmath>
#include <random>

#include "fairudt/divergence.h"
#include "fairudt/tree.h"
#include "gtest/gtest.h"
#include "suites.h"
#include "test_util.h"

namespace fairudt {
namespace {

void Expect(const suites::Outcome& o) {
  EXPECT_TRUE(o.ok()) << o.failures << " failures; first: " << o.first_failure
                      << "; max error " << o.max_error;
}

TEST(PropertyTest, IdenticalGroupsGiveZeroGain) {
  Expect(suites::IdenticalGroupsProperty(1500, 1));
}

TEST(PropertyTest, IndependentAttributeGivesZeroGain) {
  Expect(suites::IndependenceProperty(1500, 2));
}

TEST(PropertyTest, MissingGroupReducesToEntropyGain) {
  Expect(suites::EntropyReductionProperty(1200, 3));
}

TEST(PropertyTest, MissingGroupReducesToGiniGain) {
  Expect(suites::GiniReductionProperty(1200, 4));
}

TEST(PropertyTest, GibbsInequality) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 3000; ++i) {
    const GroupCounts c = testing::RandomCounts(rng, 12);
    const auto [f, d] = ClassDists(c, true);
    const double kl = Kl(f, d);
    EXPECT_GE(kl, 0.0);
    if (c.favored_pos * (c.deprived() + 2) + c.deprived() + 2 ==
        c.deprived_pos * (c.favored() + 2) + c.favored() + 2) {
      EXPECT_NEAR(kl, 0.0, 1e-12);
    } else {
      EXPECT_GT(kl, 0.0);
    }
  }
}

TEST(PropertyTest, EvaluationInvariants) {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 400; ++i) {
    const auto data = testing::RandomDataset(rng, 30, {3, 2, 4});
    const DataTable table = testing::MakeTable(data);
    std::vector<std::size_t> rows(table.num_rows());
    for (std::size_t r = 0; r < rows.size(); ++r) rows[r] = r;
    const std::vector<std::size_t> attrs{0, 1, 2};
    for (Criterion c : {Criterion::kKlRatio, Criterion::kEuclidRatio}) {
      const auto evals = EvaluateSplits(table, rows, attrs, c);
      double mean = 0;
      for (const auto& e : evals) mean += e.raw_gain;
      mean /= 3;
      for (const auto& e : evals) {
        EXPECT_GE(e.normalizer, 0.0);
        if (e.eligible) {
          EXPECT_GE(e.raw_gain, mean - 1e-12);
        }
        GroupCounts sum;
        for (const auto& child : e.children) sum += child;
        EXPECT_EQ(sum, CountGroups(table));
      }
    }
  }
}

TEST(OracleTest, RandomDatasetsAndBuilds) {
  Expect(suites::OracleEquivalenceRandom(1500, 10, 7));
}

TEST(OracleTest, SmallExhaustiveSpace) {
  Expect(suites::OracleEquivalence({5, {2, 2}}));
  Expect(suites::OracleEquivalence({3, {2, 3, 2}}));
}

}  // namespace
}  // namespace fairudt
