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
#include <string>

#include "fairudt/errors.h"
#include "fairudt/fingerprint.h"
#include "fairudt/tree.h"
#include "fmt/format.h"
#include "json.hpp"

namespace fairudt {
namespace {

using nlohmann::json;

constexpr char kTreeFormat[] = "fairudt-tree";
constexpr int kTreeVersion = 1;
constexpr double kDiscTolerance = 1e-9;

std::string_view MajorityName(ClassLabel label) {
  return label == ClassLabel::kPositive ? "positive" : "negative";
}

json CountsToJson(const GroupCounts& c) {
  return json{{"favored_pos", c.favored_pos},
              {"favored_neg", c.favored_neg},
              {"deprived_pos", c.deprived_pos},
              {"deprived_neg", c.deprived_neg}};
}

GroupCounts CountsFromJson(const json& j) {
  GroupCounts c;
  c.favored_pos = j.at("favored_pos");
  c.favored_neg = j.at("favored_neg");
  c.deprived_pos = j.at("deprived_pos");
  c.deprived_neg = j.at("deprived_neg");
  if (c.favored_pos < 0 || c.favored_neg < 0 || c.deprived_pos < 0 ||
      c.deprived_neg < 0) {
    throw ParseError("negative count in tree document");
  }
  return c;
}

json NodeToJson(const FairTree& tree, const TreeNode& node) {
  json j{{"id", node.id},
         {"depth", node.depth},
         {"counts", CountsToJson(node.counts)},
         {"disc", node.disc},
         {"majority", MajorityName(node.majority)}};
  if (!node.is_leaf()) {
    const auto& spec = tree.schema().schema[node.attribute];
    json children = json::array();
    for (const auto& [outcome, child] : node.children) {
      children.push_back(json{{"outcome", spec.outcomes[outcome]},
                              {"node", NodeToJson(tree, tree.node(child))}});
    }
    j["split"] = json{{"attribute", spec.name},
                      {"fallback_outcome", spec.outcomes[node.fallback_outcome]},
                      {"children", std::move(children)}};
  }
  return j;
}

class NodeReader {
 public:
  explicit NodeReader(const SchemaDocument& schema) : schema_(schema) {}

  std::vector<TreeNode> Read(const json& root) {
    Visit(root, 0);
    return std::move(nodes_);
  }

 private:
  std::size_t Visit(const json& j, int depth) {
    const std::size_t id = nodes_.size();
    nodes_.emplace_back();
    TreeNode node;
    node.id = id;
    if (j.at("id").get<std::size_t>() != id) {
      throw ParseError(fmt::format("node ids are not in preorder at node {}", id));
    }
    node.depth = j.at("depth");
    if (node.depth != depth) {
      throw ParseError(fmt::format("node {}: depth {} should be {}", id,
                                   node.depth, depth));
    }
    node.counts = CountsFromJson(j.at("counts"));
    node.disc = j.at("disc");
    const double expected = LeafDisc(node.counts);
    if (!(std::abs(node.disc - expected) <= kDiscTolerance)) {
      throw ParseError(fmt::format(
          "node {}: disc {} disagrees with its counts (expected {})", id,
          node.disc, expected));
    }
    node.disc = expected;
    const std::string majority = j.at("majority");
    node.majority = MajorityClass(node.counts);
    if (majority != MajorityName(node.majority)) {
      throw ParseError(fmt::format("node {}: majority '{}' disagrees with its "
                                   "counts",
                                   id, majority));
    }
    if (j.contains("split")) {
      const json& split = j.at("split");
      const std::string name = split.at("attribute");
      std::size_t column = schema_.schema.size();
      for (std::size_t c = 0; c < schema_.schema.size(); ++c) {
        if (schema_.schema[c].name == name) column = c;
      }
      if (column == schema_.schema.size()) {
        throw ParseError(fmt::format("node {}: unknown attribute '{}'", id, name));
      }
      const auto& spec = schema_.schema[column];
      auto code_of = [&](const std::string& outcome) {
        const auto code = spec.Find(outcome);
        if (!code) {
          throw ParseError(fmt::format("node {}: '{}' is not an outcome of '{}'",
                                       id, outcome, name));
        }
        return *code;
      };
      node.attribute = column;
      node.fallback_outcome = code_of(split.at("fallback_outcome"));
      GroupCounts sum;
      for (const json& child : split.at("children")) {
        const Code outcome = code_of(child.at("outcome"));
        if (!node.children.empty() && outcome <= node.children.back().first) {
          throw ParseError(
              fmt::format("node {}: children not in outcome order", id));
        }
        const std::size_t child_id = Visit(child.at("node"), depth + 1);
        sum += nodes_[child_id].counts;
        node.children.emplace_back(outcome, child_id);
      }
      if (!(sum == node.counts)) {
        throw ParseError(
            fmt::format("node {}: children counts do not sum to the node", id));
      }
    }
    nodes_[id] = std::move(node);
    return id;
  }

  const SchemaDocument& schema_;
  std::vector<TreeNode> nodes_;
};

}  // namespace

std::string Serialize(const FairTree& tree) {
  json doc{{"format", kTreeFormat},
           {"version", kTreeVersion},
           {"criterion", CriterionName(tree.criterion())},
           {"config",
            {{"min_rows", tree.config().min_rows},
             {"attribute_policy", kAttributePolicy}}},
           {"schema", json::parse(SchemaToJson(tree.schema()))},
           {"schema_fingerprint", FingerprintToHex(tree.schema_fingerprint())},
           {"root", NodeToJson(tree, tree.root())}};
  return doc.dump(1);
}

FairTree Deserialize(std::string_view document) {
  try {
    const json doc = json::parse(document);
    if (doc.at("format") != kTreeFormat) {
      throw ParseError("not a tree document");
    }
    if (doc.at("version") != kTreeVersion) {
      throw ParseError(fmt::format("unsupported tree document version {}",
                                   doc.at("version").dump()));
    }
    const std::string tag = doc.at("criterion");
    Criterion criterion;
    try {
      criterion = ParseCriterion(tag);
    } catch (const ConfigError&) {
      throw ParseError(fmt::format("unknown criterion tag '{}'", tag));
    }
    TreeConfig config;
    config.min_rows = doc.at("config").at("min_rows");
    const std::string policy = doc.at("config").at("attribute_policy");
    if (policy != kAttributePolicy) {
      throw ParseError(fmt::format("unknown attribute policy '{}'", policy));
    }
    SchemaDocument schema = SchemaFromJson(doc.at("schema").dump());
    const std::uint64_t stored =
        FingerprintFromHex(doc.at("schema_fingerprint").get<std::string>());
    if (stored != SchemaFingerprint(schema)) {
      throw ParseError("schema fingerprint does not match the embedded schema");
    }
    std::vector<TreeNode> nodes = NodeReader(schema).Read(doc.at("root"));
    try {
      return FairTree(std::move(nodes), criterion, config, std::move(schema));
    } catch (const InvariantError& e) {
      throw ParseError(e.what());
    }
  } catch (const json::exception& e) {
    throw ParseError(fmt::format("malformed tree document: {}", e.what()));
  }
}

}  // namespace fairudt
