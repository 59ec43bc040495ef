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

#include "fairudt/data.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "fairudt/csv.h"
#include "fairudt/errors.h"
#include "fairudt/fingerprint.h"
#include "fmt/format.h"
#include "json.hpp"
#include "spdlog/spdlog.h"

namespace fairudt {
namespace {

using nlohmann::json;

constexpr char kSchemaFormat[] = "fairudt-schema";
constexpr int kSchemaVersion = 1;

bool IsMissingToken(std::string_view field) {
  return field.empty() || field == "?" || field == "NA";
}

std::optional<double> ParseNumber(std::string_view text) {
  double value = 0;
  const auto [end, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size() ||
      !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::filesystem::path SidecarPath(const std::filesystem::path& path) {
  return std::filesystem::path(path.string() + ".schema.json");
}

std::string FormatCut(double value) { return fmt::format("{}", value); }

std::vector<std::string> BinLabels(std::span<const double> cuts, double lo,
                                   double hi) {
  std::vector<std::string> labels;
  if (cuts.empty()) {
    labels.push_back(lo == hi ? FormatCut(lo)
                              : fmt::format("{}-{}", FormatCut(lo),
                                            FormatCut(hi)));
    return labels;
  }
  labels.push_back("<" + FormatCut(cuts.front()));
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    labels.push_back(
        fmt::format("{}-{}", FormatCut(cuts[i - 1]), FormatCut(cuts[i])));
  }
  labels.push_back(">=" + FormatCut(cuts.back()));
  return labels;
}

Code BinOf(std::span<const double> cuts, double value) {
  return static_cast<Code>(std::upper_bound(cuts.begin(), cuts.end(), value) -
                           cuts.begin());
}

// Resolves the second value of a binary column from the data when it was not
// declared.
std::string ResolvePair(const std::string& column, const std::string& first,
                        const std::string& second,
                        const std::vector<std::string>& observed,
                        std::string_view what) {
  if (first.empty()) {
    throw ConfigError(fmt::format("no {} value declared for column '{}'",
                                  what, column));
  }
  std::set<std::string> distinct(observed.begin(), observed.end());
  for (const auto& value : distinct) {
    if (IsMissingToken(value)) {
      throw SchemaError(fmt::format(
          "column '{}' has a missing value; binary columns must be complete",
          column));
    }
  }
  if (!second.empty()) {
    if (second == first) {
      throw ConfigError(fmt::format(
          "column '{}': both declared values are '{}'", column, first));
    }
    for (const auto& value : distinct) {
      if (value != first && value != second) {
        throw SchemaError(fmt::format(
            "column '{}' has value '{}' outside the declared pair {{'{}', "
            "'{}'}}",
            column, value, first, second));
      }
    }
    return second;
  }
  distinct.erase(first);
  if (distinct.size() == 1) return *distinct.begin();
  if (distinct.empty() && observed.empty()) {
    // Nothing to infer from; the placeholder keeps the pair distinct.
    return std::string(kMissingCategory);
  }
  throw SchemaError(fmt::format(
      "column '{}' must hold exactly two distinct values including '{}', "
      "found {}",
      column, first, distinct.size() + 1));
}

void ValidateSpec(const AttributeSpec& spec, std::size_t num_rows) {
  std::set<std::string_view> seen;
  for (const auto& outcome : spec.outcomes) {
    if (!seen.insert(outcome).second) {
      throw SchemaError(fmt::format("column '{}': duplicate outcome '{}'",
                                    spec.name, outcome));
    }
  }
  if (spec.outcomes.empty() && num_rows > 0) {
    throw SchemaError(fmt::format("column '{}' has no outcomes", spec.name));
  }
  if (spec.kind == AttributeKind::kNumeric &&
      spec.values.size() != spec.outcomes.size()) {
    throw SchemaError(fmt::format(
        "numeric column '{}' needs one value per outcome", spec.name));
  }
  if (spec.binning) {
    const auto& cuts = spec.binning->cut_points;
    for (std::size_t i = 1; i < cuts.size(); ++i) {
      if (!(cuts[i - 1] < cuts[i])) {
        throw SchemaError(fmt::format(
            "column '{}': cut points must be strictly increasing", spec.name));
      }
    }
  }
}

json RuleToJson(const DiscretizationRule& rule) {
  return json{{"column", rule.column},
              {"strategy", BinningStrategyName(rule.strategy)},
              {"bin_count", rule.bin_count},
              {"cut_points", rule.cut_points}};
}

std::vector<double> ParseValues(const std::vector<std::string>& outcomes) {
  std::vector<double> values;
  values.reserve(outcomes.size());
  for (const auto& outcome : outcomes) {
    values.push_back(
        ParseNumber(outcome).value_or(std::numeric_limits<double>::quiet_NaN()));
  }
  return values;
}

}  // namespace

std::string_view BinningStrategyName(BinningStrategy strategy) {
  return strategy == BinningStrategy::kEqualFrequency ? "equal-frequency"
                                                      : "equal-width";
}

BinningStrategy ParseBinningStrategy(std::string_view name) {
  if (name == "equal-frequency") return BinningStrategy::kEqualFrequency;
  if (name == "equal-width") return BinningStrategy::kEqualWidth;
  throw ConfigError(fmt::format(
      "unknown binning strategy '{}' (expected equal-frequency or "
      "equal-width)",
      name));
}

std::optional<Code> AttributeSpec::Find(std::string_view outcome) const {
  const auto it = std::find(outcomes.begin(), outcomes.end(), outcome);
  if (it == outcomes.end()) return std::nullopt;
  return static_cast<Code>(it - outcomes.begin());
}

bool operator==(const AttributeSpec& a, const AttributeSpec& b) {
  return a.name == b.name && a.kind == b.kind && a.outcomes == b.outcomes &&
         a.binning == b.binning;
}

DataTable::DataTable(std::vector<AttributeSpec> schema,
                     std::vector<std::vector<Code>> columns, LabelSpec label,
                     SensitiveSpec sensitive)
    : schema_(std::move(schema)),
      label_(std::move(label)),
      sensitive_(std::move(sensitive)) {
  if (schema_.size() != columns.size()) {
    throw InvariantError("schema and column counts differ");
  }
  num_rows_ = columns.empty() ? 0 : columns.front().size();
  const auto label_column = FindColumn(label_.column);
  const auto sensitive_column = FindColumn(sensitive_.column);
  if (!label_column) {
    throw ConfigError(fmt::format("label column '{}' not found", label_.column));
  }
  if (!sensitive_column) {
    throw ConfigError(
        fmt::format("sensitive column '{}' not found", sensitive_.column));
  }
  if (*label_column == *sensitive_column) {
    throw ConfigError("label and sensitive attribute must be different columns");
  }
  label_column_ = *label_column;
  sensitive_column_ = *sensitive_column;
  if (schema_[label_column_].outcomes !=
      std::vector<std::string>{label_.positive, label_.negative}) {
    throw SchemaError(fmt::format(
        "label column '{}' must have outcomes {{'{}', '{}'}}", label_.column,
        label_.positive, label_.negative));
  }
  if (schema_[sensitive_column_].outcomes !=
      std::vector<std::string>{sensitive_.favored, sensitive_.deprived}) {
    throw SchemaError(fmt::format(
        "sensitive column '{}' must have outcomes {{'{}', '{}'}}",
        sensitive_.column, sensitive_.favored, sensitive_.deprived));
  }
  std::set<std::string_view> names;
  columns_.reserve(columns.size());
  for (std::size_t c = 0; c < schema_.size(); ++c) {
    const auto& spec = schema_[c];
    if (!names.insert(spec.name).second) {
      throw DataError(fmt::format("duplicate column name '{}'", spec.name));
    }
    ValidateSpec(spec, num_rows_);
    if (columns[c].size() != num_rows_) {
      throw InvariantError(
          fmt::format("column '{}' has a different row count", spec.name));
    }
    for (std::size_t r = 0; r < num_rows_; ++r) {
      if (columns[c][r] >= spec.outcomes.size()) {
        throw InvariantError(fmt::format(
            "row {}: code out of range in column '{}'", r, spec.name));
      }
    }
    columns_.push_back(
        std::make_shared<const std::vector<Code>>(std::move(columns[c])));
  }
}

std::optional<std::size_t> DataTable::FindColumn(std::string_view name) const {
  for (std::size_t c = 0; c < schema_.size(); ++c) {
    if (schema_[c].name == name) return c;
  }
  return std::nullopt;
}

std::vector<std::size_t> DataTable::feature_columns() const {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < schema_.size(); ++c) {
    if (c != label_column_ && c != sensitive_column_) out.push_back(c);
  }
  return out;
}

std::size_t DataTable::favored_count() const {
  const auto codes = column(sensitive_column_);
  return static_cast<std::size_t>(std::count(codes.begin(), codes.end(), 0));
}

DataTable DataTable::Subset(std::span<const std::size_t> rows) const {
  std::vector<std::vector<Code>> columns(schema_.size());
  for (std::size_t c = 0; c < schema_.size(); ++c) {
    const auto& source = *columns_[c];
    columns[c].reserve(rows.size());
    for (std::size_t r : rows) columns[c].push_back(source.at(r));
  }
  return DataTable(schema_, std::move(columns), label_, sensitive_);
}

DataTable DataTable::WithColumn(std::size_t index, AttributeSpec spec,
                                std::vector<Code> codes) const {
  std::vector<AttributeSpec> schema = schema_;
  schema.at(index) = std::move(spec);
  std::vector<std::vector<Code>> columns;
  columns.reserve(columns_.size());
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    columns.push_back(c == index ? std::move(codes) : *columns_[c]);
  }
  return DataTable(std::move(schema), std::move(columns), label_, sensitive_);
}

DataTable DataTable::WithLabels(const std::vector<bool>& positive) const {
  if (positive.size() != num_rows_) {
    throw InvariantError("label vector length differs from row count");
  }
  std::vector<Code> codes(num_rows_);
  for (std::size_t r = 0; r < num_rows_; ++r) codes[r] = positive[r] ? 0 : 1;
  return WithColumn(label_column_, schema_[label_column_], std::move(codes));
}

SchemaDocument DataTable::schema_document() const {
  return {schema_, label_, sensitive_};
}

std::uint64_t DataTable::SchemaFingerprint() const {
  return fairudt::SchemaFingerprint(schema_document());
}

std::uint64_t SchemaFingerprint(const SchemaDocument& doc) {
  Fingerprinter fp;
  fp.Add(std::string_view("schema/v1"));
  for (const auto& spec : doc.schema) {
    fp.Add(spec.name).Add(static_cast<std::uint64_t>(spec.kind));
    fp.Add(static_cast<std::uint64_t>(spec.outcomes.size()));
    for (const auto& outcome : spec.outcomes) fp.Add(outcome);
    if (spec.binning) {
      fp.Add(BinningStrategyName(spec.binning->strategy));
      fp.Add(static_cast<std::uint64_t>(spec.binning->bin_count));
      for (double cut : spec.binning->cut_points) fp.Add(cut);
    }
  }
  const auto& label = doc.label;
  const auto& sensitive = doc.sensitive;
  fp.Add(label.column).Add(label.positive).Add(label.negative);
  fp.Add(sensitive.column).Add(sensitive.favored).Add(sensitive.deprived);
  return fp.value();
}

std::uint64_t DataTable::OutcomeFingerprint() const {
  Fingerprinter fp;
  fp.Add(std::string_view("outcomes/v1"));
  fp.Add(static_cast<std::uint64_t>(num_rows_));
  fp.Add(label_.positive).Add(label_.negative);
  fp.Add(sensitive_.favored).Add(sensitive_.deprived);
  for (std::size_t r = 0; r < num_rows_; ++r) {
    fp.Add(static_cast<std::uint64_t>((is_favored(r) ? 2 : 0) |
                                      (is_positive(r) ? 1 : 0)));
  }
  return fp.value();
}

bool operator==(const DataTable& a, const DataTable& b) {
  if (a.schema_ != b.schema_ || a.label_ != b.label_ ||
      a.sensitive_ != b.sensitive_ || a.num_rows_ != b.num_rows_) {
    return false;
  }
  for (std::size_t c = 0; c < a.columns_.size(); ++c) {
    if (*a.columns_[c] != *b.columns_[c]) return false;
  }
  return true;
}

DataTable ParseCsv(std::istream& in, const LabelSpec& label,
                   const SensitiveSpec& sensitive,
                   const std::vector<AttributeSpec>* declared) {
  std::vector<csv::Record> records = csv::ReadAll(in);
  if (records.empty()) throw DataError("CSV has no header row");
  const csv::Record header = std::move(records.front());
  records.erase(records.begin());
  if (header.size() > 1) {
    std::erase_if(records, [](const csv::Record& record) {
      return record.size() == 1 && record.front().empty();
    });
  }
  const std::size_t width = header.size();
  for (std::size_t r = 0; r < records.size(); ++r) {
    if (records[r].size() != width) {
      throw DataError(fmt::format("row {}: expected {} fields, found {}", r + 1,
                                  width, records[r].size()));
    }
  }
  auto column_of = [&](const std::string& name, std::string_view role) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw ConfigError(
          fmt::format("{} column '{}' not found in header", role, name));
    }
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t label_col = column_of(label.column, "label");
  const std::size_t sensitive_col = column_of(sensitive.column, "sensitive");

  auto column_values = [&](std::size_t c) {
    std::vector<std::string> values;
    values.reserve(records.size());
    for (const auto& record : records) values.push_back(record[c]);
    return values;
  };

  LabelSpec resolved_label = label;
  resolved_label.negative =
      ResolvePair(label.column, label.positive, label.negative,
                  column_values(label_col), "positive label");
  SensitiveSpec resolved_sensitive = sensitive;
  resolved_sensitive.deprived =
      ResolvePair(sensitive.column, sensitive.favored, sensitive.deprived,
                  column_values(sensitive_col), "favored");

  std::vector<AttributeSpec> schema(width);
  std::vector<std::vector<Code>> columns(width);
  for (std::size_t c = 0; c < width; ++c) {
    AttributeSpec& spec = schema[c];
    spec.name = header[c];
    auto& codes = columns[c];
    codes.reserve(records.size());

    if (c == label_col || c == sensitive_col) {
      const auto& first =
          c == label_col ? resolved_label.positive : resolved_sensitive.favored;
      spec.outcomes = c == label_col
                          ? std::vector<std::string>{resolved_label.positive,
                                                     resolved_label.negative}
                          : std::vector<std::string>{
                                resolved_sensitive.favored,
                                resolved_sensitive.deprived};
      for (const auto& record : records) {
        codes.push_back(record[c] == first ? 0 : 1);
      }
      continue;
    }

    if (declared != nullptr) {
      const auto it =
          std::find_if(declared->begin(), declared->end(),
                       [&](const AttributeSpec& s) { return s.name == spec.name; });
      if (it == declared->end()) {
        throw DataError(fmt::format(
            "column '{}' is not in the declared schema", spec.name));
      }
      spec = *it;
      for (std::size_t r = 0; r < records.size(); ++r) {
        const std::string_view text = IsMissingToken(records[r][c])
                                          ? kMissingCategory
                                          : std::string_view(records[r][c]);
        const auto code = spec.Find(text);
        if (!code) {
          throw DataError(fmt::format(
              "row {}: value '{}' is not a declared outcome of '{}'", r + 1,
              records[r][c], spec.name));
        }
        codes.push_back(*code);
      }
      continue;
    }

    // Inference.
    bool numeric = false;
    bool has_missing = false;
    std::map<std::string, double> numbers;
    std::set<std::string> texts;
    for (const auto& record : records) {
      if (IsMissingToken(record[c])) {
        has_missing = true;
      } else {
        texts.insert(record[c]);
      }
    }
    if (!texts.empty()) {
      numeric = true;
      for (const auto& text : texts) {
        const auto value = ParseNumber(text);
        if (!value) {
          numeric = false;
          break;
        }
        numbers.emplace(text, *value);
      }
    }
    if (numeric) {
      spec.kind = AttributeKind::kNumeric;
      std::vector<std::pair<double, std::string>> ordered;
      for (const auto& [text, value] : numbers) ordered.emplace_back(value, text);
      std::sort(ordered.begin(), ordered.end());
      for (auto& [value, text] : ordered) {
        spec.outcomes.push_back(std::move(text));
        spec.values.push_back(value);
      }
    } else {
      spec.outcomes.assign(texts.begin(), texts.end());
    }
    if (has_missing) {
      spec.outcomes.emplace_back(kMissingCategory);
      if (numeric) spec.values.push_back(std::numeric_limits<double>::quiet_NaN());
    }
    std::unordered_map<std::string_view, Code> index;
    for (std::size_t i = 0; i < spec.outcomes.size(); ++i) {
      index.emplace(spec.outcomes[i], static_cast<Code>(i));
    }
    for (const auto& record : records) {
      const std::string_view text = IsMissingToken(record[c])
                                        ? kMissingCategory
                                        : std::string_view(record[c]);
      codes.push_back(index.at(text));
    }
  }
  return DataTable(std::move(schema), std::move(columns),
                   std::move(resolved_label), std::move(resolved_sensitive));
}

DataTable LoadCsv(const std::filesystem::path& path, const LabelSpec& label,
                  const SensitiveSpec& sensitive, const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(fmt::format("cannot open '{}'", path.string()));
  const auto sidecar = SidecarPath(path);
  if (options.use_sidecar && std::filesystem::exists(sidecar)) {
    std::ifstream side(sidecar, std::ios::binary);
    std::stringstream buffer;
    buffer << side.rdbuf();
    const SchemaDocument doc = SchemaFromJson(buffer.str());
    return ParseCsv(in, label, sensitive, &doc.schema);
  }
  return ParseCsv(in, label, sensitive);
}

void WriteCsv(const DataTable& table, std::ostream& out) {
  csv::Record record;
  for (const auto& spec : table.schema()) record.push_back(spec.name);
  csv::WriteRecord(out, record);
  for (std::size_t r = 0; r < table.num_rows(); ++r) {
    record.clear();
    for (std::size_t c = 0; c < table.num_columns(); ++c) {
      const std::string& text = table.text(r, c);
      record.push_back(text == kMissingCategory ? std::string() : text);
    }
    csv::WriteRecord(out, record);
  }
}

void WriteCsv(const DataTable& table, const std::filesystem::path& path) {
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError(fmt::format("cannot write '{}'", path.string()));
    WriteCsv(table, out);
    if (!out) throw DataError(fmt::format("write to '{}' failed", path.string()));
  }
  std::ofstream side(SidecarPath(path), std::ios::binary | std::ios::trunc);
  if (!side) {
    throw DataError(
        fmt::format("cannot write '{}'", SidecarPath(path).string()));
  }
  side << SchemaToJson(table) << '\n';
}

std::string SchemaToJson(const std::vector<AttributeSpec>& schema,
                         const LabelSpec& label,
                         const SensitiveSpec& sensitive) {
  json attributes = json::array();
  for (const auto& spec : schema) {
    json entry{{"name", spec.name},
               {"kind", spec.kind == AttributeKind::kNumeric ? "numeric"
                                                             : "categorical"},
               {"outcomes", spec.outcomes}};
    if (spec.binning) entry["binning"] = RuleToJson(*spec.binning);
    attributes.push_back(std::move(entry));
  }
  json doc{{"format", kSchemaFormat},
           {"version", kSchemaVersion},
           {"label",
            {{"column", label.column},
             {"positive", label.positive},
             {"negative", label.negative}}},
           {"sensitive",
            {{"column", sensitive.column},
             {"favored", sensitive.favored},
             {"deprived", sensitive.deprived}}},
           {"attributes", std::move(attributes)}};
  return doc.dump(2);
}

std::string SchemaToJson(const DataTable& table) {
  return SchemaToJson(table.schema(), table.label(), table.sensitive());
}

std::string SchemaToJson(const SchemaDocument& schema) {
  return SchemaToJson(schema.schema, schema.label, schema.sensitive);
}

SchemaDocument SchemaFromJson(std::string_view text) {
  try {
    const json doc = json::parse(text);
    if (doc.at("format") != kSchemaFormat) {
      throw ParseError("not a schema document");
    }
    if (doc.at("version") != kSchemaVersion) {
      throw ParseError(fmt::format("unsupported schema version {}",
                                   doc.at("version").dump()));
    }
    SchemaDocument out;
    out.label = {doc.at("label").at("column"), doc.at("label").at("positive"),
                 doc.at("label").at("negative")};
    out.sensitive = {doc.at("sensitive").at("column"),
                     doc.at("sensitive").at("favored"),
                     doc.at("sensitive").at("deprived")};
    for (const auto& entry : doc.at("attributes")) {
      AttributeSpec spec;
      spec.name = entry.at("name");
      const std::string kind = entry.at("kind");
      if (kind != "numeric" && kind != "categorical") {
        throw ParseError(fmt::format("unknown attribute kind '{}'", kind));
      }
      spec.kind = kind == "numeric" ? AttributeKind::kNumeric
                                    : AttributeKind::kCategorical;
      spec.outcomes = entry.at("outcomes").get<std::vector<std::string>>();
      if (spec.kind == AttributeKind::kNumeric) {
        spec.values = ParseValues(spec.outcomes);
      }
      if (entry.contains("binning")) {
        const auto& b = entry.at("binning");
        DiscretizationRule rule;
        rule.column = b.at("column");
        rule.strategy = ParseBinningStrategy(b.at("strategy").get<std::string>());
        rule.bin_count = b.at("bin_count");
        rule.cut_points = b.at("cut_points").get<std::vector<double>>();
        spec.binning = std::move(rule);
      }
      out.schema.push_back(std::move(spec));
    }
    return out;
  } catch (const json::exception& e) {
    throw ParseError(fmt::format("malformed schema document: {}", e.what()));
  } catch (const ConfigError& e) {
    throw ParseError(e.what());
  }
}

std::vector<double> FitCutPoints(std::vector<double> values,
                                 BinningStrategy strategy, int bin_count,
                                 std::string_view column) {
  if (bin_count < 2) {
    throw ConfigError(fmt::format("bin count must be >= 2, got {}", bin_count));
  }
  std::sort(values.begin(), values.end());
  std::vector<double> distinct = values;
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::vector<double> cuts;
  if (distinct.size() <= 1) {
    spdlog::warn("{}: constant, emitting a single bin", column);
    return cuts;
  }
  if (distinct.size() < static_cast<std::size_t>(bin_count)) {
    spdlog::warn("{}: {} distinct values < {} bins, using one bin per value",
                 column, distinct.size(), bin_count);
    for (std::size_t i = 1; i < distinct.size(); ++i) {
      cuts.push_back((distinct[i - 1] + distinct[i]) / 2);
    }
    return cuts;
  }
  const auto k = static_cast<std::size_t>(bin_count);
  if (strategy == BinningStrategy::kEqualWidth) {
    const double lo = distinct.front();
    const double width = (distinct.back() - lo) / static_cast<double>(k);
    for (std::size_t j = 1; j < k; ++j) {
      cuts.push_back(lo + width * static_cast<double>(j));
    }
  } else {
    const std::size_t n = values.size();
    // Positions b where values[b-1] < values[b]: a cut can only go there.
    std::vector<std::size_t> boundaries;
    for (std::size_t b = 1; b < n; ++b) {
      if (values[b - 1] < values[b]) boundaries.push_back(b);
    }
    for (std::size_t j = 1; j < k; ++j) {
      const std::size_t target = (2 * j * n + k) / (2 * k);
      auto it = std::lower_bound(boundaries.begin(), boundaries.end(), target);
      std::size_t best;
      if (it == boundaries.end()) {
        best = boundaries.back();
      } else if (it == boundaries.begin() || *it == target) {
        best = *it;
      } else {
        const std::size_t above = *it;
        const std::size_t below = *(it - 1);
        best = (target - below <= above - target) ? below : above;
      }
      cuts.push_back((values[best - 1] + values[best]) / 2);
    }
  }
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  if (cuts.size() + 1 < k) {
    spdlog::warn("{}: ties reduced {} requested bins to {}", column, k,
                 cuts.size() + 1);
  }
  return cuts;
}

DataTable Discretize(const DataTable& table, const DiscretizationRule& rule) {
  const auto index = table.FindColumn(rule.column);
  if (!index) {
    throw ConfigError(fmt::format("unknown column '{}'", rule.column));
  }
  if (*index == table.label_column() || *index == table.sensitive_column()) {
    throw ConfigError(fmt::format(
        "column '{}' is the label or sensitive attribute", rule.column));
  }
  const AttributeSpec& source = table.attribute(*index);
  if (source.kind != AttributeKind::kNumeric) {
    throw ConfigError(fmt::format("column '{}' is not numeric", rule.column));
  }
  std::vector<double> observed;
  bool has_missing = false;
  for (Code code : table.column(*index)) {
    const double v = source.values[code];
    if (std::isnan(v)) {
      has_missing = true;
    } else {
      observed.push_back(v);
    }
  }
  DiscretizationRule resolved = rule;
  resolved.cut_points = FitCutPoints(observed, rule.strategy, rule.bin_count,
                                         rule.column);

  const auto [lo, hi] = observed.empty()
                            ? std::pair<double, double>{0, 0}
                            : std::pair<double, double>{
                                  *std::min_element(observed.begin(),
                                                    observed.end()),
                                  *std::max_element(observed.begin(),
                                                    observed.end())};
  AttributeSpec spec;
  spec.name = source.name;
  spec.kind = AttributeKind::kCategorical;
  spec.outcomes = BinLabels(resolved.cut_points, lo, hi);
  const Code missing_code = static_cast<Code>(spec.outcomes.size());
  if (has_missing) spec.outcomes.emplace_back(kMissingCategory);

  std::vector<Code> codes;
  codes.reserve(table.num_rows());
  for (Code code : table.column(*index)) {
    const double v = source.values[code];
    codes.push_back(std::isnan(v) ? missing_code
                                  : BinOf(resolved.cut_points, v));
  }
  spec.binning = std::move(resolved);
  return table.WithColumn(*index, std::move(spec), std::move(codes));
}

DataTable DiscretizeAll(const DataTable& table, BinningStrategy strategy,
                        int bin_count) {
  DataTable out = table;
  for (std::size_t c : table.feature_columns()) {
    if (table.attribute(c).kind != AttributeKind::kNumeric) continue;
    DiscretizationRule rule;
    rule.column = table.attribute(c).name;
    rule.strategy = strategy;
    rule.bin_count = bin_count;
    out = Discretize(out, rule);
  }
  return out;
}

DataTable ConformTo(const DataTable& table,
                    const std::vector<AttributeSpec>& schema) {
  if (schema.size() != table.num_columns()) {
    throw ConfigError(fmt::format("table has {} columns, schema expects {}",
                                  table.num_columns(), schema.size()));
  }
  std::vector<std::vector<Code>> columns;
  columns.reserve(schema.size());
  for (const auto& target : schema) {
    const auto index = table.FindColumn(target.name);
    if (!index) {
      throw ConfigError(
          fmt::format("column '{}' missing from table", target.name));
    }
    const AttributeSpec& source = table.attribute(*index);
    std::vector<Code> codes;
    codes.reserve(table.num_rows());
    if (target.binning && source.kind == AttributeKind::kNumeric) {
      const auto& cuts = target.binning->cut_points;
      const auto missing = target.Find(kMissingCategory);
      for (Code code : table.column(*index)) {
        const double v = source.values[code];
        if (std::isnan(v)) {
          if (!missing) {
            throw DataError(fmt::format(
                "column '{}' has missing values the schema does not declare",
                target.name));
          }
          codes.push_back(*missing);
        } else {
          codes.push_back(BinOf(cuts, v));
        }
      }
    } else {
      std::vector<Code> remap(source.outcomes.size());
      for (std::size_t i = 0; i < source.outcomes.size(); ++i) {
        const auto code = target.Find(source.outcomes[i]);
        // Only fail when the unknown category actually occurs.
        remap[i] = code.value_or(std::numeric_limits<Code>::max());
      }
      for (Code code : table.column(*index)) {
        if (remap[code] == std::numeric_limits<Code>::max()) {
          throw DataError(fmt::format("column '{}': category '{}' is unknown to "
                                      "the schema",
                                      target.name, source.outcomes[code]));
        }
        codes.push_back(remap[code]);
      }
    }
    columns.push_back(std::move(codes));
  }
  return DataTable(schema, std::move(columns), table.label(),
                   table.sensitive());
}

GroupCounts CountGroups(const DataTable& table,
                        std::span<const std::size_t> rows) {
  GroupCounts counts;
  for (std::size_t r : rows) counts.Add(table.is_favored(r), table.is_positive(r));
  return counts;
}

GroupCounts CountGroups(const DataTable& table) {
  GroupCounts counts;
  for (std::size_t r = 0; r < table.num_rows(); ++r) {
    counts.Add(table.is_favored(r), table.is_positive(r));
  }
  return counts;
}

}  // namespace fairudt
