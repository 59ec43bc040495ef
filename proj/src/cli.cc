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

#include "fairudt/cli.h"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "fairudt/data.h"
#include "fairudt/errors.h"
#include "fairudt/eval.h"
#include "fairudt/fingerprint.h"
#include "fairudt/metrics.h"
#include "fairudt/relabel.h"
#include "fairudt/tree.h"
#include "fmt/format.h"
#include "json.hpp"
#include "spdlog/spdlog.h"

namespace fairudt {
namespace {

namespace fs = std::filesystem;

constexpr char kVersion[] = "fairudt 1.0.0";
constexpr char kLockName[] = ".fairudt.lock";

struct DataFlags {
  std::string data;
  std::string label;
  std::string positive;
  std::string negative;
  std::string sensitive;
  std::string favored;
  std::string deprived;
  std::string binning = "equal-frequency";
  int bins = 4;
};

struct Flags {
  DataFlags data;
  std::string out;
  std::string tree;
  std::string plan;
  std::string criterion = "kl";
  std::int64_t min_rows = 1;
  double sigma = 0;
  std::uint64_t seed = 0;
  bool plan_only = false;
  std::string predictions;
  std::string scores;
  bool roc = false;
  double test_fraction = 0.25;
  double min_disc = 0;
  std::size_t top_k = 0;
  std::string grid = "0:2:0.1";
  int folds = 10;
  int epochs = 300;
  double learning_rate = 1.0;
  double l2 = 1e-4;
  bool no_sensitive_feature = false;
};

void AddDataFlags(CLI::App* app, DataFlags& f, bool specs_required) {
  app->add_option("--data", f.data, "Input CSV")->required();
  auto* label = app->add_option("--label", f.label, "Label column");
  auto* positive =
      app->add_option("--positive", f.positive, "Positive label value");
  app->add_option("--negative", f.negative,
                  "Negative label value (inferred if omitted)");
  auto* sensitive =
      app->add_option("--sensitive", f.sensitive, "Sensitive column");
  auto* favored =
      app->add_option("--favored", f.favored, "Favored group value");
  app->add_option("--deprived", f.deprived,
                  "Deprived group value (inferred if omitted)");
  if (specs_required) {
    for (auto* o : {label, positive, sensitive, favored}) o->required();
  }
  app->add_option("--binning", f.binning,
                  "equal-frequency or equal-width")
      ->capture_default_str();
  app->add_option("--bins", f.bins, "Bins per numeric column")
      ->capture_default_str();
}

void AddOutFlag(CLI::App* app, Flags& f) {
  app->add_option("--out", f.out,
                  fmt::format("Output directory (default ${} or ./fairudt-out)",
                              kOutputDirEnv));
}

LabelSpec MakeLabel(const DataFlags& f) {
  return {f.label, f.positive, f.negative};
}
SensitiveSpec MakeSensitive(const DataFlags& f) {
  return {f.sensitive, f.favored, f.deprived};
}

fs::path ResolveOut(const Flags& f) {
  if (!f.out.empty()) return f.out;
  if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env) {
    return env;
  }
  return "fairudt-out";
}

// Exclusive claim on an output directory for the lifetime of a command.
class OutputLock {
 public:
  explicit OutputLock(const fs::path& dir) : path_(dir / kLockName) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
      throw ConfigError(fmt::format("cannot create output directory '{}': {}",
                                    dir.string(), ec.message()));
    }
    FILE* file = std::fopen(path_.c_str(), "wx");
    if (file == nullptr) {
      if (errno == EEXIST) {
        throw ConfigError(fmt::format(
            "output directory '{}' is in use (remove {} if no run is active)",
            dir.string(), path_.string()));
      }
      throw ConfigError(fmt::format("cannot lock output directory '{}'",
                                    dir.string()));
    }
    std::fclose(file);
  }
  ~OutputLock() {
    std::error_code ec;
    fs::remove(path_, ec);
  }
  OutputLock(const OutputLock&) = delete;
  OutputLock& operator=(const OutputLock&) = delete;

 private:
  fs::path path_;
};

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(fmt::format("cannot read '{}'", path));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteFile(const fs::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw DataError(fmt::format("cannot write '{}'", path.string()));
}

DataTable Load(const DataFlags& f) {
  return LoadCsv(f.data, MakeLabel(f), MakeSensitive(f));
}

std::vector<bool> ColumnFlags(const DataTable& t, bool (DataTable::*get)(std::size_t) const) {
  std::vector<bool> out(t.num_rows());
  for (std::size_t r = 0; r < out.size(); ++r) out[r] = (t.*get)(r);
  return out;
}

std::size_t RequireColumn(const DataTable& table, const std::string& name,
                          std::string_view flag) {
  const auto index = table.FindColumn(name);
  if (!index) {
    throw ConfigError(
        fmt::format("{}: column '{}' not found in the data", flag, name));
  }
  return *index;
}

std::vector<bool> ParsePredictions(const DataTable& table,
                                   std::size_t column) {
  const LabelSpec& label = table.label();
  std::vector<bool> out(table.num_rows());
  for (std::size_t r = 0; r < out.size(); ++r) {
    const std::string& v = table.text(r, column);
    if (v == label.positive || v == "1" || v == "true") {
      out[r] = true;
    } else if (v == label.negative || v == "0" || v == "false") {
      out[r] = false;
    } else {
      throw DataError(fmt::format(
          "row {}: prediction '{}' is neither '{}' nor '{}'", r + 1, v,
          label.positive, label.negative));
    }
  }
  return out;
}

std::vector<double> ParseScores(const DataTable& table, std::size_t column) {
  std::vector<double> out(table.num_rows());
  for (std::size_t r = 0; r < out.size(); ++r) {
    const std::string& v = table.text(r, column);
    double value = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), value);
    if (ec != std::errc() || ptr != v.data() + v.size() || std::isnan(value)) {
      throw DataError(fmt::format("row {}: score '{}' is not a number", r + 1, v));
    }
    out[r] = value;
  }
  return out;
}

int CmdBuild(const Flags& f, std::ostream& out) {
  const Criterion criterion = ParseCriterion(f.criterion);
  const fs::path dir = ResolveOut(f);
  OutputLock lock(dir);
  const DataTable raw = Load(f.data);
  const DataTable table =
      DiscretizeAll(raw, ParseBinningStrategy(f.data.binning), f.data.bins);
  TreeConfig config;
  config.min_rows = f.min_rows;
  const FairTree tree = Build(table, criterion, config);
  const InterpretabilityStats stats = Stats(tree);
  WriteFile(dir / "tree.json", Serialize(tree));
  const nlohmann::json doc{
      {"format", "fairudt-tree-stats"},
      {"version", 1},
      {"criterion", CriterionName(criterion)},
      {"rows", table.num_rows()},
      {"node_count", stats.node_count},
      {"sparsity", stats.sparsity},
      {"depth", stats.depth},
      {"schema_fingerprint", FingerprintToHex(tree.schema_fingerprint())}};
  WriteFile(dir / "stats.json", doc.dump(1));
  out << fmt::format("nodes={} leaves={} depth={}\n", stats.node_count,
                     stats.sparsity, stats.depth)
      << fmt::format("wrote {}\n", (dir / "tree.json").string());
  return kExitOk;
}

int CmdRelabel(const Flags& f, std::ostream& out) {
  const FairTree tree = Deserialize(ReadFile(f.tree));
  const SchemaDocument& schema = tree.schema();
  // Label and sensitive declarations default to the tree's.
  DataFlags data = f.data;
  if (data.label.empty()) data.label = schema.label.column;
  if (data.positive.empty()) data.positive = schema.label.positive;
  if (data.negative.empty()) data.negative = schema.label.negative;
  if (data.sensitive.empty()) data.sensitive = schema.sensitive.column;
  if (data.favored.empty()) data.favored = schema.sensitive.favored;
  if (data.deprived.empty()) data.deprived = schema.sensitive.deprived;

  const fs::path dir = ResolveOut(f);
  OutputLock lock(dir);
  const DataTable raw = Load(data);
  const DataTable view = ConformTo(raw, schema.schema);

  RelabelPlan plan;
  if (!f.plan.empty()) {
    plan = PlanFromJson(ReadFile(f.plan));
    if (plan.tree_fingerprint != tree.schema_fingerprint()) {
      throw ConfigError("the plan was made for a different tree");
    }
  } else {
    plan = Plan(tree, view, f.sigma, f.seed);
  }
  WriteFile(dir / "plan.json", PlanToJson(plan));
  std::size_t planned = 0;
  for (const auto& a : plan.actions) planned += a.rows.size();
  out << fmt::format("sigma={} leaves={} rows={}\n", plan.sigma,
                     plan.actions.size(), planned);
  if (f.plan_only) {
    out << fmt::format("wrote {}\n", (dir / "plan.json").string());
    return kExitOk;
  }
  const RelabeledTable relabeled = Apply(plan, raw);
  WriteCsv(relabeled.table, dir / "relabeled.csv");
  out << fmt::format("wrote {}\n", (dir / "relabeled.csv").string());
  return kExitOk;
}

int CmdAudit(const Flags& f, std::ostream& out) {
  if (f.roc && f.scores.empty() && !f.predictions.empty()) {
    throw ConfigError("--roc with --predictions also needs --scores");
  }
  const fs::path dir = ResolveOut(f);
  OutputLock lock(dir);
  const DataTable raw = Load(f.data);

  std::vector<bool> labels;
  std::vector<bool> groups;
  std::vector<bool> predictions;
  std::vector<double> scores;
  if (!f.predictions.empty()) {
    const std::size_t column = RequireColumn(raw, f.predictions, "--predictions");
    predictions = ParsePredictions(raw, column);
    if (!f.scores.empty()) {
      scores = ParseScores(raw, RequireColumn(raw, f.scores, "--scores"));
    }
    labels = ColumnFlags(raw, &DataTable::is_positive);
    groups = ColumnFlags(raw, &DataTable::is_favored);
  } else {
    // Built-in classifier scored on a held-out split.
    const DataTable table =
        DiscretizeAll(raw, ParseBinningStrategy(f.data.binning), f.data.bins);
    const SplitIndices split = Split(table.num_rows(), f.test_fraction, f.seed);
    LinearConfig config;
    config.epochs = f.epochs;
    config.learning_rate = f.learning_rate;
    config.l2 = f.l2;
    config.seed = f.seed;
    config.use_sensitive = !f.no_sensitive_feature;
    const LinearModel model = TrainLinear(table.Subset(split.train), config);
    const DataTable test = table.Subset(split.test);
    scores = model.ScoreAll(test);
    predictions.resize(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) predictions[i] = scores[i] >= 0.5;
    labels = ColumnFlags(test, &DataTable::is_positive);
    groups = ColumnFlags(test, &DataTable::is_favored);
  }
  const FairnessReport report = Evaluate(labels, predictions, groups);
  const std::string json = ReportToJson(report);
  WriteFile(dir / "report.json", json);
  out << json << "\n";
  if (f.roc) {
    WriteFile(dir / "roc.csv", RocToCsv(RocPoints(scores, labels, groups)));
    out << fmt::format("wrote {}\n", (dir / "roc.csv").string());
  }
  return kExitOk;
}

int CmdReport(const Flags& f, std::ostream& out) {
  if (!(f.min_disc >= -2 && f.min_disc <= 2)) {
    throw ConfigError(fmt::format("--min-disc {} lies outside [-2, 2]", f.min_disc));
  }
  const FairTree tree = Deserialize(ReadFile(f.tree));
  const auto subgroups = ExtractSubgroups(tree, f.min_disc, f.top_k);
  const fs::path dir = ResolveOut(f);
  OutputLock lock(dir);

  std::ostringstream csv;
  csv << "rank,leaf,disc,favored_pos,favored_neg,deprived_pos,deprived_neg,path\n";
  out << fmt::format("{:>4}  {:>6}  {:>8}  {:>9}  {:>9}  {}\n", "rank", "leaf",
                     "disc", "fav +:-", "dep +:-", "subgroup");
  for (std::size_t i = 0; i < subgroups.size(); ++i) {
    const auto& s = subgroups[i];
    const GroupCounts& c = s.counts;
    csv << fmt::format("{},{},{},{},{},{},{},", i + 1, s.leaf_id, s.disc,
                       c.favored_pos, c.favored_neg, c.deprived_pos,
                       c.deprived_neg);
    std::string path = s.PathText();
    if (path.find_first_of(",\"\n") != std::string::npos) {
      std::string quoted = "\"";
      for (char ch : path) {
        if (ch == '"') quoted += '"';
        quoted += ch;
      }
      path = quoted + "\"";
    }
    csv << path << "\n";
    out << fmt::format("{:>4}  {:>6}  {:>8.4f}  {:>9}  {:>9}  {}\n", i + 1,
                       s.leaf_id, s.disc,
                       fmt::format("{}:{}", c.favored_pos, c.favored_neg),
                       fmt::format("{}:{}", c.deprived_pos, c.deprived_neg),
                       s.PathText());
  }
  WriteFile(dir / "subgroups.csv", csv.str());
  out << fmt::format("{} subgroup(s)\n", subgroups.size());
  return kExitOk;
}

int CmdSweep(const Flags& f, std::ostream& out) {
  SweepConfig config;
  config.criterion = ParseCriterion(f.criterion);
  config.sigma_grid = ParseSigmaGrid(f.grid);
  config.folds = f.folds;
  config.test_fraction = f.test_fraction;
  config.seed = f.seed;
  config.tree.min_rows = f.min_rows;
  config.linear.epochs = f.epochs;
  config.linear.learning_rate = f.learning_rate;
  config.linear.l2 = f.l2;
  config.linear.seed = f.seed;
  config.linear.use_sensitive = !f.no_sensitive_feature;
  config.binning = ParseBinningStrategy(f.data.binning);
  config.bins = f.data.bins;

  const fs::path dir = ResolveOut(f);
  OutputLock lock(dir);
  const DataTable raw = Load(f.data);
  const SweepResult result = Sweep(raw, config);
  WriteFile(dir / "sweep.csv", SweepToCsv(result));
  WriteFile(dir / "sweep_folds.csv", SweepFoldsToCsv(result));
  WriteFile(dir / "manifest.json", SweepManifest(result));

  const SweepRow& base = result.baseline();
  const SweepRow* best = nullptr;
  for (const auto& row : result.rows) {
    if (row.variant != SweepVariant::kRaw || std::isnan(row.dp.mean)) continue;
    if (best == nullptr || std::abs(row.dp.mean) < std::abs(best->dp.mean)) {
      best = &row;
    }
  }
  out << fmt::format("baseline dp={:.4f} acc={:.4f}\n", base.dp.mean,
                     base.acc.mean);
  if (best != nullptr) {
    out << fmt::format("best |dp| at sigma={}: dp={:.4f} acc={:.4f}\n",
                       best->sigma, best->dp.mean, best->acc.mean);
  }
  out << fmt::format("wrote {}\n", (dir / "sweep.csv").string());
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  Flags f;
  CLI::App app{"Fairness-aware uplift trees and leaf relabeling"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  auto* build = app.add_subcommand("build", "Fit a tree on a CSV");
  AddDataFlags(build, f.data, true);
  build->add_option("--criterion", f.criterion, "kl or euclid")
      ->capture_default_str();
  build->add_option("--min-rows", f.min_rows, "Smallest splittable node")
      ->capture_default_str();
  AddOutFlag(build, f);

  auto* relabel = app.add_subcommand("relabel", "Relabel discriminatory leaves");
  relabel->add_option("--tree", f.tree, "Tree document")->required();
  AddDataFlags(relabel, f.data, false);
  relabel->add_option("--sigma", f.sigma, "Threshold in [0, 2]")
      ->capture_default_str();
  relabel->add_option("--seed", f.seed, "Row selection seed")
      ->capture_default_str();
  relabel->add_option("--plan", f.plan, "Apply an existing plan document");
  relabel->add_flag("--plan-only", f.plan_only,
                    "Write the plan and leave the data untouched");
  AddOutFlag(relabel, f);

  auto* audit = app.add_subcommand("audit", "Fairness and accuracy report");
  AddDataFlags(audit, f.data, true);
  audit->add_option("--predictions", f.predictions,
                    "Column of predicted labels (omit to fit the built-in "
                    "classifier on a split)");
  audit->add_option("--scores", f.scores, "Column of scores for --roc");
  audit->add_flag("--roc", f.roc, "Write per-group ROC points");
  audit->add_option("--seed", f.seed, "Split and initialization seed")
      ->capture_default_str();
  audit->add_option("--test-fraction", f.test_fraction, "Share of rows held out")
      ->capture_default_str();
  audit->add_option("--epochs", f.epochs, "Gradient descent epochs")
      ->capture_default_str();
  audit->add_option("--lr", f.learning_rate, "Learning rate")
      ->capture_default_str();
  audit->add_option("--l2", f.l2, "L2 penalty")
      ->capture_default_str();
  audit->add_flag("--no-sensitive-feature", f.no_sensitive_feature,
                  "Hide the sensitive column from the classifier");
  AddOutFlag(audit, f);

  auto* report = app.add_subcommand("report", "List discriminatory subgroups");
  report->add_option("--tree", f.tree, "Tree document")->required();
  report->add_option("--min-disc", f.min_disc, "Smallest disc listed")
      ->capture_default_str();
  report->add_option("--top-k", f.top_k, "0 lists all")
      ->capture_default_str();
  AddOutFlag(report, f);

  auto* sweep = app.add_subcommand("sweep", "Relabel-and-train threshold sweep");
  AddDataFlags(sweep, f.data, true);
  sweep->add_option("--criterion", f.criterion, "kl or euclid")
      ->capture_default_str();
  sweep->add_option("--grid", f.grid, "start:stop:step or a comma list")
      ->capture_default_str();
  sweep->add_option("--folds", f.folds, "Repeated train/test splits")
      ->capture_default_str();
  sweep->add_option("--seed", f.seed, "Split and initialization seed")
      ->capture_default_str();
  sweep->add_option("--test-fraction", f.test_fraction, "Share of rows held out")
      ->capture_default_str();
  sweep->add_option("--min-rows", f.min_rows, "Smallest splittable node")
      ->capture_default_str();
  sweep->add_option("--epochs", f.epochs, "Gradient descent epochs")
      ->capture_default_str();
  sweep->add_option("--lr", f.learning_rate, "Learning rate")
      ->capture_default_str();
  sweep->add_option("--l2", f.l2, "L2 penalty")
      ->capture_default_str();
  sweep->add_flag("--no-sensitive-feature", f.no_sensitive_feature,
                 "Hide the sensitive column from the classifier");
  AddOutFlag(sweep, f);

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << (dynamic_cast<const CLI::CallForVersion*>(&e) != nullptr
                  ? std::string(kVersion) + "\n"
                  : app.help());
      return kExitOk;
    }
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (build->parsed()) return CmdBuild(f, out);
    if (relabel->parsed()) return CmdRelabel(f, out);
    if (audit->parsed()) return CmdAudit(f, out);
    if (report->parsed()) return CmdReport(f, out);
    if (sweep->parsed()) return CmdSweep(f, out);
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace fairudt
