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

#ifndef FAIRUDT_TREE_H_
#define FAIRUDT_TREE_H_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fairudt/data.h"
#include "fairudt/divergence.h"
#include "fairudt/group_counts.h"

namespace fairudt {

enum class Criterion { kKlRatio, kEuclidRatio };

std::string_view CriterionName(Criterion criterion);  // "kl" / "euclid"
// Throws ConfigError naming the tag.
Criterion ParseCriterion(std::string_view name);
Measure MeasureOf(Criterion criterion);

struct TreeConfig {
  // Nodes with fewer rows become leaves.
  std::int64_t min_rows = 1;
  friend bool operator==(const TreeConfig&, const TreeConfig&) = default;
};

// Only policy implemented: a categorical attribute is consumed once used on a
// path.
inline constexpr std::string_view kAttributePolicy = "consume";

struct SplitEvaluation {
  std::size_t attribute = 0;  // column index
  double raw_gain = 0;
  double normalizer = 0;
  double ratio = kIneligibleRatio;
  bool eligible = false;
  // Raw gain came from the entropy / Gini fallback (one group empty).
  bool fallback = false;
  // Observed outcomes (ascending code) and their counts.
  std::vector<Code> outcomes;
  std::vector<GroupCounts> children;
};

// One evaluation per candidate attribute, in the order given. A candidate is
// eligible when its raw gain is at least the mean raw gain of all candidates
// and its normalizer is not below kNormalizerEpsilon.
std::vector<SplitEvaluation> EvaluateSplits(
    const DataTable& table, std::span<const std::size_t> rows,
    std::span<const std::size_t> attributes, Criterion criterion);

// Index of the eligible evaluation with maximal ratio, which must exceed 1e-12.
// Ratios within 1e-12 of each other tie; the earlier one wins.
std::optional<std::size_t> ChooseSplit(
    std::span<const SplitEvaluation> evaluations);

enum class ClassLabel { kPositive, kNegative };

struct TreeNode {
  std::size_t id = 0;  // preorder index
  int depth = 0;
  GroupCounts counts;
  // Leaves: disc from counts. Internal nodes carry it too, for reports.
  double disc = 0;
  ClassLabel majority = ClassLabel::kPositive;

  // Internal nodes only.
  static constexpr std::size_t kNoAttribute =
      std::numeric_limits<std::size_t>::max();
  std::size_t attribute = kNoAttribute;
  std::vector<std::pair<Code, std::size_t>> children;  // outcome -> node id
  Code fallback_outcome = 0;

  bool is_leaf() const { return attribute == kNoAttribute; }

  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

// A fitted fairness-aware uplift tree. Immutable.
class FairTree {
 public:
  FairTree(std::vector<TreeNode> nodes, Criterion criterion, TreeConfig config,
           SchemaDocument schema);

  const TreeNode& root() const { return nodes_.front(); }
  const TreeNode& node(std::size_t id) const { return nodes_.at(id); }
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  std::vector<std::size_t> leaf_ids() const;

  Criterion criterion() const { return criterion_; }
  const TreeConfig& config() const { return config_; }
  const SchemaDocument& schema() const { return schema_; }
  std::uint64_t schema_fingerprint() const { return fingerprint_; }

  friend bool operator==(const FairTree&, const FairTree&);

 private:
  std::vector<TreeNode> nodes_;
  Criterion criterion_;
  TreeConfig config_;
  SchemaDocument schema_;
  std::uint64_t fingerprint_ = 0;
};

// Grows the tree to full depth. Throws DataError on an empty table.
FairTree Build(const DataTable& table, Criterion criterion,
               const TreeConfig& config = {});

// (P^F(y+) - P^D(y+)) + (P^D(y-) - P^F(y-)) on raw frequencies; 0 when
// either group is empty.
double LeafDisc(const GroupCounts& counts);

// Positive when positives >= negatives.
ClassLabel MajorityClass(const GroupCounts& counts);

// Leaf reached by a row of `table`, whose schema must be the tree's. Unseen
// outcomes follow the node's fallback outcome.
std::size_t Assign(const FairTree& tree, const DataTable& table,
                   std::size_t row);
// Assign for every row; checks the schema fingerprint once.
std::vector<std::size_t> AssignAll(const FairTree& tree,
                                   const DataTable& table);

struct InterpretabilityStats {
  std::size_t node_count = 0;
  std::size_t sparsity = 0;  // leaves
  int depth = 0;

  friend bool operator==(const InterpretabilityStats&,
                         const InterpretabilityStats&) = default;
};

InterpretabilityStats Stats(const FairTree& tree);

struct PathCondition {
  std::string attribute;
  std::string outcome;
};

struct SubgroupDescriptor {
  std::size_t leaf_id = 0;
  std::vector<PathCondition> path;
  GroupCounts counts;
  double disc = 0;

  // "occupation=Craft-repair AND race=White"
  std::string PathText() const;
};

// Leaves with disc >= min_disc and disc > 0, by disc descending, then leaf
// size descending, then id. top_k = 0 keeps all.
std::vector<SubgroupDescriptor> ExtractSubgroups(const FairTree& tree,
                                                 double min_disc,
                                                 std::size_t top_k);

// Versioned JSON with sorted keys.
std::string Serialize(const FairTree& tree);
// Throws ParseError on malformed documents, unknown criterion tags, schema
// fingerprint mismatches and leaf disc values that disagree with their
// counts by more than 1e-9.
FairTree Deserialize(std::string_view document);

}  // namespace fairudt

#endif  // FAIRUDT_TREE_H_
