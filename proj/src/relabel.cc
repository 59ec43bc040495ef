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

#include "fairudt/relabel.h"

#include <algorithm>

#include "fairudt/errors.h"
#include "fairudt/fingerprint.h"
#include "fairudt/random.h"
#include "fmt/format.h"
#include "json.hpp"

namespace fairudt {
namespace {

using nlohmann::json;

constexpr char kPlanFormat[] = "fairudt-plan";
constexpr int kPlanVersion = 1;

// round(numerator / denominator) half away from zero, for numerator >= 0 and
// denominator > 0.
std::int64_t RoundedQuotient(std::int64_t numerator, std::int64_t denominator) {
  return (2 * numerator + denominator) / (2 * denominator);
}

}  // namespace

std::string_view RelabelActionName(RelabelAction action) {
  return action == RelabelAction::kPromote ? "promote" : "demote";
}

std::int64_t PromoteCount(const GroupCounts& c) {
  if (c.deprived() == 0 || c.favored() == 0) return 0;
  // Target deprived positives: round(n_d * n_f+ / n_f).
  const std::int64_t target =
      RoundedQuotient(c.deprived() * c.favored_pos, c.favored());
  return std::clamp<std::int64_t>(target - c.deprived_pos, 0, c.deprived_neg);
}

std::int64_t DemoteCount(const GroupCounts& c) {
  if (c.favored() == 0 || c.deprived() == 0) return 0;
  const std::int64_t target =
      RoundedQuotient(c.favored() * c.deprived_neg, c.deprived());
  return std::clamp<std::int64_t>(target - c.favored_neg, 0, c.favored_pos);
}

RelabelPlan Plan(const FairTree& tree, const DataTable& table, double sigma,
                 std::uint64_t seed) {
  if (!(sigma >= 0.0 && sigma <= 2.0)) {
    throw ConfigError(fmt::format("sigma must lie in [0, 2], got {}", sigma));
  }
  const std::vector<std::size_t> leaf_of = AssignAll(tree, table);

  RelabelPlan plan;
  plan.sigma = sigma;
  plan.seed = seed;
  plan.generator = kGeneratorName;
  plan.tree_fingerprint = tree.schema_fingerprint();
  plan.source_fingerprint = table.OutcomeFingerprint();
  plan.num_rows = table.num_rows();

  std::vector<std::vector<std::size_t>> rows_of(tree.nodes().size());
  for (std::size_t r = 0; r < leaf_of.size(); ++r) rows_of[leaf_of[r]].push_back(r);

  for (std::size_t leaf : tree.leaf_ids()) {
    const TreeNode& node = tree.node(leaf);
    if (!(node.disc >= sigma)) continue;
    LeafAction action;
    action.leaf_id = leaf;
    action.disc = node.disc;
    action.action = node.majority == ClassLabel::kPositive
                        ? RelabelAction::kPromote
                        : RelabelAction::kDemote;
    action.counts = CountGroups(table, rows_of[leaf]);
    std::vector<std::size_t> candidates;
    for (std::size_t r : rows_of[leaf]) {
      const bool wanted = action.action == RelabelAction::kPromote
                              ? (!table.is_favored(r) && !table.is_positive(r))
                              : (table.is_favored(r) && table.is_positive(r));
      if (wanted) candidates.push_back(r);
    }
    action.count = action.action == RelabelAction::kPromote
                       ? PromoteCount(action.counts)
                       : DemoteCount(action.counts);
    auto engine = MakeEngine(seed, leaf);
    action.rows = SampleWithoutReplacement(
        candidates, static_cast<std::size_t>(action.count), engine);
    plan.actions.push_back(std::move(action));
  }
  return plan;
}

RelabeledTable Apply(const RelabelPlan& plan, const DataTable& table) {
  if (table.num_rows() != plan.num_rows ||
      table.OutcomeFingerprint() != plan.source_fingerprint) {
    throw ConfigError(
        "refusing to apply: the plan was computed for a different table");
  }
  std::vector<bool> positive(table.num_rows());
  for (std::size_t r = 0; r < table.num_rows(); ++r) {
    positive[r] = table.is_positive(r);
  }
  std::vector<bool> touched(table.num_rows(), false);
  std::size_t changed = 0;
  for (const auto& action : plan.actions) {
    if (action.rows.size() != static_cast<std::size_t>(action.count)) {
      throw InvariantError(fmt::format(
          "leaf {}: {} rows selected for a count of {}", action.leaf_id,
          action.rows.size(), action.count));
    }
    const bool promote = action.action == RelabelAction::kPromote;
    for (std::size_t r : action.rows) {
      if (r >= table.num_rows() || touched[r]) {
        throw InvariantError(fmt::format("leaf {}: invalid row {}",
                                         action.leaf_id, r));
      }
      const bool candidate = promote ? (!table.is_favored(r) && !positive[r])
                                     : (table.is_favored(r) && positive[r]);
      if (!candidate) {
        throw InvariantError(fmt::format("leaf {}: row {} cannot be {}d",
                                         action.leaf_id, r,
                                         RelabelActionName(action.action)));
      }
      positive[r] = promote;
      touched[r] = true;
      ++changed;
    }
  }
  return RelabeledTable{table.WithLabels(positive), plan.source_fingerprint,
                        PlanDigest(plan), changed};
}

std::string PlanToJson(const RelabelPlan& plan) {
  json actions = json::array();
  for (const auto& a : plan.actions) {
    actions.push_back(json{
        {"leaf", a.leaf_id},
        {"action", RelabelActionName(a.action)},
        {"disc", a.disc},
        {"counts",
         {{"favored_pos", a.counts.favored_pos},
          {"favored_neg", a.counts.favored_neg},
          {"deprived_pos", a.counts.deprived_pos},
          {"deprived_neg", a.counts.deprived_neg}}},
        {"count", a.count},
        {"rows", a.rows}});
  }
  json doc{{"format", kPlanFormat},
           {"version", kPlanVersion},
           {"sigma", plan.sigma},
           {"seed", plan.seed},
           {"generator", plan.generator},
           {"tree_fingerprint", FingerprintToHex(plan.tree_fingerprint)},
           {"source_fingerprint", FingerprintToHex(plan.source_fingerprint)},
           {"num_rows", plan.num_rows},
           {"actions", std::move(actions)}};
  return doc.dump(1);
}

RelabelPlan PlanFromJson(std::string_view document) {
  try {
    const json doc = json::parse(document);
    if (doc.at("format") != kPlanFormat) throw ParseError("not a plan document");
    if (doc.at("version") != kPlanVersion) {
      throw ParseError(fmt::format("unsupported plan version {}",
                                   doc.at("version").dump()));
    }
    RelabelPlan plan;
    plan.sigma = doc.at("sigma");
    plan.seed = doc.at("seed");
    plan.generator = doc.at("generator");
    plan.tree_fingerprint =
        FingerprintFromHex(doc.at("tree_fingerprint").get<std::string>());
    plan.source_fingerprint =
        FingerprintFromHex(doc.at("source_fingerprint").get<std::string>());
    plan.num_rows = doc.at("num_rows");
    for (const json& j : doc.at("actions")) {
      LeafAction a;
      a.leaf_id = j.at("leaf");
      const std::string name = j.at("action");
      if (name == "promote") {
        a.action = RelabelAction::kPromote;
      } else if (name == "demote") {
        a.action = RelabelAction::kDemote;
      } else {
        throw ParseError(fmt::format("unknown action '{}'", name));
      }
      a.disc = j.at("disc");
      const json& c = j.at("counts");
      a.counts = {c.at("favored_pos"), c.at("favored_neg"),
                  c.at("deprived_pos"), c.at("deprived_neg")};
      a.count = j.at("count");
      a.rows = j.at("rows").get<std::vector<std::size_t>>();
      plan.actions.push_back(std::move(a));
    }
    return plan;
  } catch (const json::exception& e) {
    throw ParseError(fmt::format("malformed plan document: {}", e.what()));
  }
}

std::uint64_t PlanDigest(const RelabelPlan& plan) {
  return Fingerprinter().Add(PlanToJson(plan)).value();
}

}  // namespace fairudt
