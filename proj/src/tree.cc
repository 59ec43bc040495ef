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

#include <algorithm>
#include <numeric>

#include "fairudt/errors.h"
#include "fmt/format.h"

namespace fairudt {
namespace {

constexpr double kTieTolerance = 1e-12;

class Builder {
 public:
  Builder(const DataTable& table, Criterion criterion, const TreeConfig& config)
      : table_(table), criterion_(criterion), config_(config) {}

  std::vector<TreeNode> Run() {
    std::vector<std::size_t> rows(table_.num_rows());
    std::iota(rows.begin(), rows.end(), 0);
    Grow(rows, table_.feature_columns(), 0);
    return std::move(nodes_);
  }

 private:
  std::size_t Grow(const std::vector<std::size_t>& rows,
                   const std::vector<std::size_t>& available, int depth) {
    const std::size_t id = nodes_.size();
    nodes_.emplace_back();
    {
      TreeNode& node = nodes_.back();
      node.id = id;
      node.depth = depth;
      node.counts = CountGroups(table_, rows);
      node.disc = LeafDisc(node.counts);
      node.majority = MajorityClass(node.counts);
    }
    const GroupCounts counts = nodes_[id].counts;
    const bool pure = counts.positives() == 0 || counts.negatives() == 0;
    if (pure || available.empty() ||
        static_cast<std::int64_t>(rows.size()) < config_.min_rows) {
      return id;
    }
    const auto evaluations =
        EvaluateSplits(table_, rows, available, criterion_);
    const auto choice = ChooseSplit(evaluations);
    if (!choice) return id;

    const SplitEvaluation& split = evaluations[*choice];
    const std::size_t column = split.attribute;
    std::vector<std::vector<std::size_t>> partitions(
        table_.attribute(column).outcomes.size());
    for (std::size_t r : rows) partitions[table_.at(r, column)].push_back(r);

    std::vector<std::size_t> remaining;
    for (std::size_t c : available) {
      if (c != column) remaining.push_back(c);
    }

    Code fallback = split.outcomes.front();
    for (Code outcome : split.outcomes) {
      if (partitions[outcome].size() > partitions[fallback].size()) {
        fallback = outcome;
      }
    }
    std::vector<std::pair<Code, std::size_t>> children;
    for (Code outcome : split.outcomes) {
      children.emplace_back(outcome,
                            Grow(partitions[outcome], remaining, depth + 1));
    }
    TreeNode& node = nodes_[id];
    node.attribute = column;
    node.fallback_outcome = fallback;
    node.children = std::move(children);
    return id;
  }

  const DataTable& table_;
  Criterion criterion_;
  TreeConfig config_;
  std::vector<TreeNode> nodes_;
};

}  // namespace

std::string_view CriterionName(Criterion criterion) {
  return criterion == Criterion::kKlRatio ? "kl" : "euclid";
}

Criterion ParseCriterion(std::string_view name) {
  if (name == "kl") return Criterion::kKlRatio;
  if (name == "euclid") return Criterion::kEuclidRatio;
  throw ConfigError(
      fmt::format("unknown criterion '{}' (expected kl or euclid)", name));
}

Measure MeasureOf(Criterion criterion) {
  return criterion == Criterion::kKlRatio ? Measure::kKl : Measure::kEuclid;
}

std::vector<SplitEvaluation> EvaluateSplits(
    const DataTable& table, std::span<const std::size_t> rows,
    std::span<const std::size_t> attributes, Criterion criterion) {
  const Measure measure = MeasureOf(criterion);
  const bool laplace = DefaultLaplace(measure);
  const GroupCounts parent = CountGroups(table, rows);
  const bool fallback = parent.total() > 0 &&
                        (parent.favored() == 0 || parent.deprived() == 0);

  std::vector<SplitEvaluation> out;
  out.reserve(attributes.size());
  for (std::size_t column : attributes) {
    SplitEvaluation eval;
    eval.attribute = column;
    eval.fallback = fallback;
    std::vector<GroupCounts> tally(table.attribute(column).outcomes.size());
    const auto codes = table.column(column);
    for (std::size_t r : rows) {
      tally[codes[r]].Add(table.is_favored(r), table.is_positive(r));
    }
    eval.outcomes.reserve(tally.size());
    eval.children.reserve(tally.size());
    for (std::size_t code = 0; code < tally.size(); ++code) {
      if (tally[code].total() == 0) continue;
      eval.outcomes.push_back(static_cast<Code>(code));
      eval.children.push_back(tally[code]);
    }
    if (parent.total() > 0) {
      eval.raw_gain = fallback
                          ? FallbackGain(parent, eval.children, measure)
                          : DivergenceGain(parent, eval.children, measure,
                                           laplace);
      const OutcomeDists dists = EstimateOutcomeDists(eval.children, laplace);
      eval.normalizer = measure == Measure::kKl ? KlNormalizer(parent, dists)
                                                : ENormalizer(parent, dists);
    }
    eval.ratio = GainRatio(eval.raw_gain, eval.normalizer);
    out.push_back(std::move(eval));
  }
  if (out.empty()) return out;
  double mean = 0;
  for (const auto& eval : out) mean += eval.raw_gain;
  mean /= static_cast<double>(out.size());
  for (auto& eval : out) {
    eval.eligible = parent.total() > 0 &&
                    eval.raw_gain >= mean - kTieTolerance &&
                    eval.normalizer >= kNormalizerEpsilon;
  }
  return out;
}

std::optional<std::size_t> ChooseSplit(
    std::span<const SplitEvaluation> evaluations) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < evaluations.size(); ++i) {
    const auto& eval = evaluations[i];
    if (!eval.eligible || !(eval.ratio > kTieTolerance)) continue;
    if (!best || eval.ratio > evaluations[*best].ratio + kTieTolerance) {
      best = i;
    }
  }
  return best;
}

double LeafDisc(const GroupCounts& counts) {
  if (counts.favored() == 0 || counts.deprived() == 0) return 0;
  const double nf = static_cast<double>(counts.favored());
  const double nd = static_cast<double>(counts.deprived());
  const double favored_pos = static_cast<double>(counts.favored_pos) / nf;
  const double favored_neg = static_cast<double>(counts.favored_neg) / nf;
  const double deprived_pos = static_cast<double>(counts.deprived_pos) / nd;
  const double deprived_neg = static_cast<double>(counts.deprived_neg) / nd;
  return (favored_pos - deprived_pos) + (deprived_neg - favored_neg);
}

ClassLabel MajorityClass(const GroupCounts& counts) {
  return counts.positives() >= counts.negatives() ? ClassLabel::kPositive
                                                  : ClassLabel::kNegative;
}

FairTree::FairTree(std::vector<TreeNode> nodes, Criterion criterion,
                   TreeConfig config, SchemaDocument schema)
    : nodes_(std::move(nodes)),
      criterion_(criterion),
      config_(config),
      schema_(std::move(schema)),
      fingerprint_(SchemaFingerprint(schema_)) {
  if (nodes_.empty()) throw InvariantError("tree has no nodes");
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const TreeNode& node = nodes_[i];
    if (node.id != i) throw InvariantError("node ids must be preorder indices");
    if (node.is_leaf()) continue;
    if (node.attribute >= schema_.schema.size()) {
      throw InvariantError(fmt::format("node {}: attribute out of range", i));
    }
    if (node.children.empty()) {
      throw InvariantError(fmt::format("node {}: split without children", i));
    }
    bool has_fallback = false;
    for (const auto& [outcome, child] : node.children) {
      if (child <= i || child >= nodes_.size()) {
        throw InvariantError(fmt::format("node {}: bad child id {}", i, child));
      }
      has_fallback |= outcome == node.fallback_outcome;
    }
    if (!has_fallback) {
      throw InvariantError(
          fmt::format("node {}: fallback outcome has no child", i));
    }
  }
}

std::vector<std::size_t> FairTree::leaf_ids() const {
  std::vector<std::size_t> ids;
  for (const auto& node : nodes_) {
    if (node.is_leaf()) ids.push_back(node.id);
  }
  return ids;
}

bool operator==(const FairTree& a, const FairTree& b) {
  return a.nodes_ == b.nodes_ && a.criterion_ == b.criterion_ &&
         a.config_ == b.config_ && a.schema_ == b.schema_ &&
         a.fingerprint_ == b.fingerprint_;
}

FairTree Build(const DataTable& table, Criterion criterion,
               const TreeConfig& config) {
  if (table.num_rows() == 0) throw DataError("cannot build a tree on 0 rows");
  if (config.min_rows < 1) {
    throw ConfigError(
        fmt::format("min_rows must be >= 1, got {}", config.min_rows));
  }
  for (std::size_t c : table.feature_columns()) {
    const auto& spec = table.attribute(c);
    if (spec.kind == AttributeKind::kNumeric) {
      throw ConfigError(fmt::format(
          "numeric column '{}' must be discretized before building", spec.name));
    }
  }
  Builder builder(table, criterion, config);
  return FairTree(builder.Run(), criterion, config, table.schema_document());
}

std::size_t Assign(const FairTree& tree, const DataTable& table,
                   std::size_t row) {
  const TreeNode* node = &tree.root();
  while (!node->is_leaf()) {
    const Code code = table.at(row, node->attribute);
    const auto& children = node->children;
    auto it = std::lower_bound(
        children.begin(), children.end(), code,
        [](const auto& child, Code value) { return child.first < value; });
    if (it == children.end() || it->first != code) {
      it = std::lower_bound(
          children.begin(), children.end(), node->fallback_outcome,
          [](const auto& child, Code value) { return child.first < value; });
    }
    node = &tree.node(it->second);
  }
  return node->id;
}

std::vector<std::size_t> AssignAll(const FairTree& tree,
                                   const DataTable& table) {
  if (table.SchemaFingerprint() != tree.schema_fingerprint()) {
    throw ConfigError(
        "table schema does not match the tree (different columns, categories "
        "or cut points)");
  }
  std::vector<std::size_t> leaves(table.num_rows());
  for (std::size_t r = 0; r < table.num_rows(); ++r) {
    leaves[r] = Assign(tree, table, r);
  }
  return leaves;
}

InterpretabilityStats Stats(const FairTree& tree) {
  InterpretabilityStats stats;
  stats.node_count = tree.nodes().size();
  for (const auto& node : tree.nodes()) {
    if (node.is_leaf()) {
      ++stats.sparsity;
      stats.depth = std::max(stats.depth, node.depth);
    }
  }
  return stats;
}

std::string SubgroupDescriptor::PathText() const {
  std::string out;
  for (const auto& condition : path) {
    if (!out.empty()) out += " AND ";
    out += condition.attribute + "=" + condition.outcome;
  }
  return out;
}

std::vector<SubgroupDescriptor> ExtractSubgroups(const FairTree& tree,
                                                 double min_disc,
                                                 std::size_t top_k) {
  const auto& schema = tree.schema().schema;
  std::vector<SubgroupDescriptor> out;
  std::vector<PathCondition> path;
  auto visit = [&](auto&& self, const TreeNode& node) -> void {
    if (node.is_leaf()) {
      if (node.disc > 0 && node.disc >= min_disc) {
        out.push_back({node.id, path, node.counts, node.disc});
      }
      return;
    }
    const auto& spec = schema[node.attribute];
    for (const auto& [outcome, child] : node.children) {
      path.push_back({spec.name, spec.outcomes[outcome]});
      self(self, tree.node(child));
      path.pop_back();
    }
  };
  visit(visit, tree.root());
  std::sort(out.begin(), out.end(),
            [](const SubgroupDescriptor& a, const SubgroupDescriptor& b) {
              if (a.disc != b.disc) return a.disc > b.disc;
              if (a.counts.total() != b.counts.total()) {
                return a.counts.total() > b.counts.total();
              }
              return a.leaf_id < b.leaf_id;
            });
  if (top_k > 0 && out.size() > top_k) out.resize(top_k);
  return out;
}

}  // namespace fairudt
