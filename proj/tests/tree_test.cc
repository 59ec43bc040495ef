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

#include "fairudt/tree.h"

#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "fairudt/errors.h"
#include "gtest/gtest.h"
#include "json.hpp"
#include "test_util.h"

namespace fairudt {
namespace {

using testing::MakeTable;

DataTable GermanBinned() {
  return DiscretizeAll(testing::LoadGerman(), BinningStrategy::kEqualFrequency,
                       4);
}

// a0 separates the groups' labels perfectly, a1 is noise.
oracle::Dataset Separating() {
  oracle::Dataset d;
  d.arity = {2, 2};
  d.rows = {{true, true, {0, 0}},  {true, true, {0, 1}},
            {false, false, {0, 0}}, {false, false, {0, 1}},
            {true, false, {1, 0}}, {true, false, {1, 1}},
            {false, true, {1, 1}}, {false, true, {1, 0}}};
  return d;
}

TEST(LeafDiscTest, ReferenceLeaves) {
  EXPECT_EQ(LeafDisc({6, 0, 0, 1}), 2.0);
  EXPECT_NEAR(LeafDisc({11, 9, 0, 2}), 1.1, 1e-9);
  EXPECT_EQ(LeafDisc({3, 1, 3, 1}), 0.0);
  EXPECT_EQ(LeafDisc({0, 0, 4, 1}), 0.0);
  EXPECT_EQ(LeafDisc({0, 3, 2, 0}), -2.0);
}

TEST(LeafDiscTest, BoundsAndSign) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 2000; ++i) {
    const GroupCounts c = testing::RandomCounts(rng, 9);
    const double disc = LeafDisc(c);
    EXPECT_GE(disc, -2.0);
    EXPECT_LE(disc, 2.0);
    EXPECT_NEAR(disc, oracle::Disc(c.favored_pos, c.favored_neg, c.deprived_pos,
                                   c.deprived_neg),
                1e-12);
    const GroupCounts swapped{c.deprived_pos, c.deprived_neg, c.favored_pos,
                              c.favored_neg};
    EXPECT_NEAR(LeafDisc(swapped), -disc, 1e-12);
    const bool extreme = c.favored() > 0 && c.deprived() > 0 &&
                         c.favored_neg == 0 && c.deprived_pos == 0;
    EXPECT_EQ(disc == 2.0, extreme);
  }
}

TEST(TreeTest, MajorityTiesArePositive) {
  EXPECT_EQ(MajorityClass({1, 1, 1, 1}), ClassLabel::kPositive);
  EXPECT_EQ(MajorityClass({0, 1, 0, 0}), ClassLabel::kNegative);
  EXPECT_EQ(MajorityClass({}), ClassLabel::kPositive);
}

TEST(TreeTest, CriterionNames) {
  EXPECT_EQ(ParseCriterion("kl"), Criterion::kKlRatio);
  EXPECT_EQ(ParseCriterion("euclid"), Criterion::kEuclidRatio);
  EXPECT_EQ(CriterionName(Criterion::kEuclidRatio), "euclid");
  EXPECT_THROW(ParseCriterion("gini"), ConfigError);
}

TEST(TreeTest, RejectsBadInput) {
  oracle::Dataset empty;
  empty.arity = {2};
  EXPECT_THROW(Build(MakeTable(empty), Criterion::kKlRatio), DataError);
  EXPECT_THROW(Build(testing::LoadGerman(), Criterion::kKlRatio), ConfigError);
  TreeConfig bad;
  bad.min_rows = 0;
  EXPECT_THROW(Build(MakeTable(Separating()), Criterion::kKlRatio, bad),
               ConfigError);
}

TEST(TreeTest, SplitsOnTheDiscriminatingAttribute) {
  for (Criterion c : {Criterion::kKlRatio, Criterion::kEuclidRatio}) {
    const FairTree tree = Build(MakeTable(Separating()), c);
    ASSERT_FALSE(tree.root().is_leaf());
    EXPECT_EQ(tree.root().attribute, 0u);
    for (const auto& [outcome, child] : tree.root().children) {
      EXPECT_EQ(std::abs(tree.node(child).disc), 2.0);
    }
  }
}

TEST(TreeTest, PureNodesAreLeaves) {
  oracle::Dataset d;
  d.arity = {2};
  d.rows = {{true, true, {0}}, {false, true, {1}}, {true, true, {1}}};
  const FairTree tree = Build(MakeTable(d), Criterion::kKlRatio);
  EXPECT_TRUE(tree.root().is_leaf());
}

void CheckStructure(const FairTree& tree, const DataTable& table) {
  const auto& nodes = tree.nodes();
  std::size_t next = 0;
  std::vector<std::set<std::size_t>> used(nodes.size());
  // Preorder walk must visit ids in order.
  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    const std::size_t id = stack.back();
    stack.pop_back();
    ASSERT_EQ(id, next++);
    const TreeNode& n = nodes[id];
    EXPECT_EQ(n.disc, LeafDisc(n.counts));
    EXPECT_EQ(n.majority, MajorityClass(n.counts));
    if (n.is_leaf()) continue;
    EXPECT_FALSE(used[id].count(n.attribute)) << "attribute reused on a path";
    GroupCounts sum;
    for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) {
      const TreeNode& child = nodes[it->second];
      EXPECT_EQ(child.depth, n.depth + 1);
      sum += child.counts;
      used[it->second] = used[id];
      used[it->second].insert(n.attribute);
      stack.push_back(it->second);
    }
    EXPECT_EQ(sum, n.counts);
    for (std::size_t i = 1; i < n.children.size(); ++i) {
      EXPECT_LT(n.children[i - 1].first, n.children[i].first);
    }
  }
  EXPECT_EQ(next, nodes.size());

  // Routing the training rows reproduces the leaf counts.
  std::vector<GroupCounts> routed(nodes.size());
  const auto leaf_of = AssignAll(tree, table);
  for (std::size_t r = 0; r < table.num_rows(); ++r) {
    ASSERT_TRUE(nodes[leaf_of[r]].is_leaf());
    routed[leaf_of[r]].Add(table.is_favored(r), table.is_positive(r));
  }
  for (std::size_t id : tree.leaf_ids()) EXPECT_EQ(routed[id], nodes[id].counts);
}

TEST(TreeTest, GermanTreeIsConsistent) {
  const DataTable table = GermanBinned();
  for (Criterion c : {Criterion::kKlRatio, Criterion::kEuclidRatio}) {
    const FairTree tree = Build(table, c);
    CheckStructure(tree, table);
    const InterpretabilityStats s = Stats(tree);
    EXPECT_EQ(s.node_count, tree.nodes().size());
    EXPECT_EQ(s.sparsity, tree.leaf_ids().size());
    EXPECT_LT(s.sparsity, s.node_count);
    EXPECT_GT(s.depth, 1);
  }
}

TEST(TreeTest, MinRowsStopsGrowth) {
  const DataTable table = GermanBinned();
  TreeConfig config;
  config.min_rows = 200;
  const FairTree small = Build(table, Criterion::kKlRatio, config);
  for (const auto& n : small.nodes()) {
    if (!n.is_leaf()) {
      EXPECT_GE(n.counts.total(), 200);
    }
  }
  EXPECT_LT(small.nodes().size(), Build(table, Criterion::kKlRatio).nodes().size());
}

TEST(TreeTest, UnseenOutcomeFollowsFallback) {
  oracle::Dataset d = Separating();
  d.arity = {3, 2};  // outcome 2 of a0 never occurs
  const FairTree tree = Build(MakeTable(d), Criterion::kKlRatio);
  ASSERT_EQ(tree.root().attribute, 0u);
  const auto fallback = static_cast<int>(tree.root().fallback_outcome);
  oracle::Dataset probe = d;
  probe.rows = {{true, true, {2, 0}}, {true, true, {fallback, 0}}};
  const DataTable table = MakeTable(probe);
  EXPECT_EQ(Assign(tree, table, 0), Assign(tree, table, 1));
}

TEST(TreeTest, AssignChecksSchema) {
  const FairTree tree = Build(MakeTable(Separating()), Criterion::kKlRatio);
  oracle::Dataset other = Separating();
  other.arity = {2, 3};
  EXPECT_THROW(AssignAll(tree, MakeTable(other)), ConfigError);
}

TEST(TreeTest, DocumentRoundTrip) {
  const DataTable table = GermanBinned();
  const FairTree tree = Build(table, Criterion::kKlRatio);
  const std::string doc = Serialize(tree);
  const FairTree back = Deserialize(doc);
  EXPECT_EQ(back, tree);
  EXPECT_EQ(Serialize(back), doc);
  EXPECT_EQ(back.schema_fingerprint(), table.SchemaFingerprint());
}

TEST(TreeTest, DocumentIntegrityChecks) {
  const FairTree tree = Build(MakeTable(Separating()), Criterion::kEuclidRatio);
  const nlohmann::json good = nlohmann::json::parse(Serialize(tree));

  nlohmann::json bad = good;
  bad["criterion"] = "chi2";
  try {
    Deserialize(bad.dump());
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("chi2"), std::string::npos);
  }

  bad = good;
  bad["root"]["split"]["children"][0]["node"]["disc"] = 0.5;
  EXPECT_THROW(Deserialize(bad.dump()), ParseError);

  bad = good;
  bad["root"]["counts"]["favored_pos"] = 7;
  EXPECT_THROW(Deserialize(bad.dump()), ParseError);

  bad = good;
  bad["schema_fingerprint"] = "0000000000000001";
  EXPECT_THROW(Deserialize(bad.dump()), ParseError);

  bad = good;
  bad["version"] = 99;
  EXPECT_THROW(Deserialize(bad.dump()), ParseError);

  EXPECT_THROW(Deserialize("{not json"), ParseError);
}

TEST(SubgroupTest, OrderingAndFilters) {
  const FairTree tree = Build(GermanBinned(), Criterion::kKlRatio);
  const auto all = ExtractSubgroups(tree, 0, 0);
  ASSERT_FALSE(all.empty());
  for (std::size_t i = 0; i < all.size(); ++i) {
    EXPECT_GT(all[i].disc, 0);
    EXPECT_TRUE(tree.node(all[i].leaf_id).is_leaf());
    EXPECT_EQ(all[i].path.size(),
              static_cast<std::size_t>(tree.node(all[i].leaf_id).depth));
    if (i == 0) continue;
    const auto& a = all[i - 1];
    const auto& b = all[i];
    EXPECT_TRUE(a.disc > b.disc ||
                (a.disc == b.disc && a.counts.total() > b.counts.total()) ||
                (a.disc == b.disc && a.counts.total() == b.counts.total() &&
                 a.leaf_id < b.leaf_id));
  }
  const auto top = ExtractSubgroups(tree, 0, 5);
  ASSERT_EQ(top.size(), 5u);
  EXPECT_EQ(top[4].leaf_id, all[4].leaf_id);
  for (const auto& s : ExtractSubgroups(tree, 2.0, 0)) EXPECT_EQ(s.disc, 2.0);
  EXPECT_NE(all[0].PathText().find('='), std::string::npos);
}

TEST(SubgroupTest, PathText) {
  SubgroupDescriptor s;
  s.path = {{"occupation", "Craft-repair"}, {"race", "White"}};
  EXPECT_EQ(s.PathText(), "occupation=Craft-repair AND race=White");
}

}  // namespace
}  // namespace fairudt
