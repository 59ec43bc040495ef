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

#ifndef FAIRUDT_RELABEL_H_
#define FAIRUDT_RELABEL_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fairudt/data.h"
#include "fairudt/group_counts.h"
#include "fairudt/tree.h"

namespace fairudt {

enum class RelabelAction {
  kPromote,  // deprived negatives -> positive
  kDemote,   // favored positives -> negative
};

std::string_view RelabelActionName(RelabelAction action);

struct LeafAction {
  std::size_t leaf_id = 0;
  RelabelAction action = RelabelAction::kPromote;
  // Tree leaf discrimination that qualified the leaf.
  double disc = 0;
  // Counts of the planned table's rows routed to the leaf.
  GroupCounts counts;
  std::int64_t count = 0;
  // Row indices of the planned table, ascending; size() == count.
  std::vector<std::size_t> rows;

  friend bool operator==(const LeafAction&, const LeafAction&) = default;
};

struct RelabelPlan {
  double sigma = 0;
  std::uint64_t seed = 0;
  std::string generator;
  std::uint64_t tree_fingerprint = 0;
  // DataTable::OutcomeFingerprint of the planned table.
  std::uint64_t source_fingerprint = 0;
  std::size_t num_rows = 0;
  std::vector<LeafAction> actions;  // by leaf id

  friend bool operator==(const RelabelPlan&, const RelabelPlan&) = default;
};

// Number of deprived negatives to promote so that the deprived positive rate
// is as close as possible to the favored one:
// clamp(round(n_d * n_f+ / n_f - n_d+), 0, n_d-), rounding half away from
// zero. 0 when either group is empty.
std::int64_t PromoteCount(const GroupCounts& counts);

// Mirror image: favored positives to demote toward equal negative rates,
// clamp(round(n_f * n_d- / n_d - n_f-), 0, n_f+).
std::int64_t DemoteCount(const GroupCounts& counts);

// Selects every tree leaf with disc >= sigma, promotes when its training
// majority is positive (ties included) and demotes otherwise. Counts and rows
// come from routing `table` through the tree, so the same tree can plan for
// its training table or for held-out rows. Row choice is uniform without
// replacement, seeded per leaf.
//
// Throws ConfigError if sigma is outside [0, 2] or the table schema differs
// from the tree's.
RelabelPlan Plan(const FairTree& tree, const DataTable& table, double sigma,
                 std::uint64_t seed);

struct RelabeledTable {
  DataTable table;
  std::uint64_t source_fingerprint = 0;
  std::uint64_t plan_digest = 0;
  std::size_t changed_rows = 0;
};

// Flips the planned rows' labels. `table` may be any view of the planned
// rows (raw or discretized) with the same outcome fingerprint. Throws
// ConfigError on a fingerprint mismatch and InvariantError if a selected row
// is not a candidate of its action.
RelabeledTable Apply(const RelabelPlan& plan, const DataTable& table);

std::string PlanToJson(const RelabelPlan& plan);
RelabelPlan PlanFromJson(std::string_view document);
std::uint64_t PlanDigest(const RelabelPlan& plan);

}  // namespace fairudt

#endif  // FAIRUDT_RELABEL_H_
