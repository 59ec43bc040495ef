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

#ifndef FAIRUDT_DATA_H_
#define FAIRUDT_DATA_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fairudt/group_counts.h"

namespace fairudt {

// Index into AttributeSpec::outcomes.
using Code = std::uint32_t;

// Category text used for empty, "?" and "NA" fields.
inline constexpr std::string_view kMissingCategory = "\xE2\x90\x80missing";

enum class AttributeKind { kCategorical, kNumeric };

enum class BinningStrategy { kEqualFrequency, kEqualWidth };

std::string_view BinningStrategyName(BinningStrategy strategy);
// Accepts "equal-frequency" and "equal-width"; throws ConfigError otherwise.
BinningStrategy ParseBinningStrategy(std::string_view name);

struct DiscretizationRule {
  std::string column;
  BinningStrategy strategy = BinningStrategy::kEqualFrequency;
  int bin_count = 4;
  // Filled by Discretize. Bin i holds cut_points[i-1] <= v < cut_points[i].
  std::vector<double> cut_points;

  friend bool operator==(const DiscretizationRule&,
                         const DiscretizationRule&) = default;
};

struct AttributeSpec {
  std::string name;
  AttributeKind kind = AttributeKind::kCategorical;
  // Distinct category texts in declared order. For numeric columns these are
  // the distinct source tokens ordered by value, with the missing category
  // (if any) last.
  std::vector<std::string> outcomes;
  // Numeric columns only: parsed value of each outcome, NaN for missing.
  std::vector<double> values;
  // Set once a numeric column has been discretized into range categories.
  std::optional<DiscretizationRule> binning;

  std::optional<Code> Find(std::string_view outcome) const;

  friend bool operator==(const AttributeSpec& a, const AttributeSpec& b);
};

// Binary label declaration. An empty `negative` is resolved from the data.
struct LabelSpec {
  std::string column;
  std::string positive;
  std::string negative;

  friend bool operator==(const LabelSpec&, const LabelSpec&) = default;
};

// Binary sensitive attribute declaration. An empty `deprived` is resolved
// from the data.
struct SensitiveSpec {
  std::string column;
  std::string favored;
  std::string deprived;

  friend bool operator==(const SensitiveSpec&, const SensitiveSpec&) = default;
};

struct SchemaDocument;

// Column-major table of category codes. Immutable: every transformation
// returns a new table, and column storage is shared between copies.
//
// The label column's outcomes are always {positive, negative} and the
// sensitive column's {favored, deprived}, so code 0 means positive / favored.
class DataTable {
 public:
  // Validates every invariant; throws SchemaError / DataError.
  DataTable(std::vector<AttributeSpec> schema,
            std::vector<std::vector<Code>> columns, LabelSpec label,
            SensitiveSpec sensitive);

  std::size_t num_rows() const { return num_rows_; }
  std::size_t num_columns() const { return schema_.size(); }

  const std::vector<AttributeSpec>& schema() const { return schema_; }
  const AttributeSpec& attribute(std::size_t column) const {
    return schema_[column];
  }
  std::optional<std::size_t> FindColumn(std::string_view name) const;

  std::span<const Code> column(std::size_t index) const {
    return *columns_[index];
  }
  Code at(std::size_t row, std::size_t column) const {
    return (*columns_[column])[row];
  }
  const std::string& text(std::size_t row, std::size_t column) const {
    return schema_[column].outcomes[at(row, column)];
  }

  const LabelSpec& label() const { return label_; }
  const SensitiveSpec& sensitive() const { return sensitive_; }
  std::size_t label_column() const { return label_column_; }
  std::size_t sensitive_column() const { return sensitive_column_; }

  bool is_positive(std::size_t row) const {
    return at(row, label_column_) == 0;
  }
  bool is_favored(std::size_t row) const {
    return at(row, sensitive_column_) == 0;
  }

  // All columns except label and sensitive, in declaration order.
  std::vector<std::size_t> feature_columns() const;

  std::size_t favored_count() const;
  std::size_t deprived_count() const { return num_rows_ - favored_count(); }

  // Rows in the given order (may repeat or reorder).
  DataTable Subset(std::span<const std::size_t> rows) const;
  DataTable WithColumn(std::size_t index, AttributeSpec spec,
                       std::vector<Code> codes) const;
  // Replaces the label column; `positive[i]` is the new label of row i.
  DataTable WithLabels(const std::vector<bool>& positive) const;

  SchemaDocument schema_document() const;
  // See the free SchemaFingerprint below.
  std::uint64_t SchemaFingerprint() const;
  // Hash of N and every row's (sensitive, label) texts. Identical for a raw
  // table and its discretized view.
  std::uint64_t OutcomeFingerprint() const;

  friend bool operator==(const DataTable& a, const DataTable& b);

 private:
  std::vector<AttributeSpec> schema_;
  std::vector<std::shared_ptr<const std::vector<Code>>> columns_;
  LabelSpec label_;
  SensitiveSpec sensitive_;
  std::size_t num_rows_ = 0;
  std::size_t label_column_ = 0;
  std::size_t sensitive_column_ = 0;
};

struct LoadOptions {
  // Use `<path>.schema.json` when it exists (outcome order, kinds, cut
  // points).
  bool use_sidecar = true;
};

// Loads a headed CSV. Columns other than label/sensitive whose non-missing
// fields all parse as finite numbers are numeric; everything else is
// categorical with outcomes in byte order.
//
// Errors: ConfigError for a missing label/sensitive column; DataError for an
// unreadable file or a row with the wrong field count (naming the row);
// SchemaError when a label/sensitive value is outside its declared pair.
DataTable LoadCsv(const std::filesystem::path& path, const LabelSpec& label,
                  const SensitiveSpec& sensitive, const LoadOptions& options = {});
DataTable ParseCsv(std::istream& in, const LabelSpec& label,
                   const SensitiveSpec& sensitive,
                   const std::vector<AttributeSpec>* declared = nullptr);

// Writes the table as CSV plus its schema sidecar at `<path>.schema.json`.
void WriteCsv(const DataTable& table, const std::filesystem::path& path);
void WriteCsv(const DataTable& table, std::ostream& out);

// Sidecar document: human-readable JSON, keys sorted.
std::string SchemaToJson(const DataTable& table);
std::string SchemaToJson(const std::vector<AttributeSpec>& schema,
                         const LabelSpec& label,
                         const SensitiveSpec& sensitive);
struct SchemaDocument {
  std::vector<AttributeSpec> schema;
  LabelSpec label;
  SensitiveSpec sensitive;

  friend bool operator==(const SchemaDocument&,
                         const SchemaDocument&) = default;
};
std::string SchemaToJson(const SchemaDocument& schema);

// Hash of names, kinds, outcomes, cut points and the label/sensitive specs.
std::uint64_t SchemaFingerprint(const SchemaDocument& schema);
SchemaDocument SchemaFromJson(std::string_view json);

// Cut points for a numeric column. Deterministic, depends only on the
// multiset of values. Constant columns yield no cut points; fewer distinct
// values than bins yield one bin per distinct value. Both cases log a
// warning naming `column`.
std::vector<double> FitCutPoints(std::vector<double> values,
                                 BinningStrategy strategy, int bin_count,
                                 std::string_view column = "numeric column");

// Replaces a numeric column with range categories ("<c1", "c1-c2", ">=ck").
// Favored and deprived rows are fitted together. Throws ConfigError when the
// column is unknown, not numeric, or bin_count < 2.
DataTable Discretize(const DataTable& table, const DiscretizationRule& rule);

// Discretizes every numeric feature column with the same strategy.
DataTable DiscretizeAll(const DataTable& table, BinningStrategy strategy,
                        int bin_count);

// Re-expresses `table` in `schema`: numeric columns are binned with the
// schema's cut points, categorical ones remapped by text. Throws DataError on
// a category the schema does not know.
DataTable ConformTo(const DataTable& table,
                    const std::vector<AttributeSpec>& schema);

GroupCounts CountGroups(const DataTable& table,
                        std::span<const std::size_t> rows);
GroupCounts CountGroups(const DataTable& table);

}  // namespace fairudt

#endif  // FAIRUDT_DATA_H_
