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

#include "fairudt/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "fairudt/errors.h"
#include "fmt/format.h"
#include "json.hpp"

namespace fairudt {
namespace {

double Ratio(std::int64_t numerator, std::int64_t denominator,
             std::string_view what, std::string_view scope) {
  if (denominator == 0) {
    throw MetricUndefinedError(
        fmt::format("{} is undefined for group '{}': no rows in its "
                    "denominator",
                    what, scope));
  }
  return static_cast<double>(numerator) / static_cast<double>(denominator);
}

void CheckSizes(std::size_t a, std::size_t b) {
  if (a != b) {
    throw ConfigError(
        fmt::format("length mismatch: {} labels vs {} predictions", a, b));
  }
}

nlohmann::json ConfusionJson(const Confusion& c) {
  return {{"tp", c.tp}, {"fp", c.fp}, {"tn", c.tn}, {"fn", c.fn}};
}

}  // namespace

double Confusion::Tpr(std::string_view scope) const {
  return Ratio(tp, tp + fn, "TPR", scope);
}
double Confusion::Fpr(std::string_view scope) const {
  return Ratio(fp, fp + tn, "FPR", scope);
}
double Confusion::Tnr(std::string_view scope) const {
  return Ratio(tn, fp + tn, "TNR", scope);
}
double Confusion::PositiveRate(std::string_view scope) const {
  return Ratio(tp + fp, total(), "positive prediction rate", scope);
}

Confusion GroupConfusion::overall() const {
  return {favored.tp + deprived.tp, favored.fp + deprived.fp,
          favored.tn + deprived.tn, favored.fn + deprived.fn};
}

GroupConfusion Tally(const std::vector<bool>& labels,
                     const std::vector<bool>& predictions,
                     const std::vector<bool>& favored) {
  CheckSizes(labels.size(), predictions.size());
  CheckSizes(labels.size(), favored.size());
  GroupConfusion out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    Confusion& c = favored[i] ? out.favored : out.deprived;
    if (labels[i]) {
      ++(predictions[i] ? c.tp : c.fn);
    } else {
      ++(predictions[i] ? c.fp : c.tn);
    }
  }
  return out;
}

double DemographicParity(const std::vector<bool>& predictions,
                         const std::vector<bool>& favored) {
  CheckSizes(favored.size(), predictions.size());
  std::int64_t n[2] = {0, 0};
  std::int64_t pos[2] = {0, 0};
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const int g = favored[i] ? 0 : 1;
    ++n[g];
    pos[g] += predictions[i] ? 1 : 0;
  }
  return Ratio(pos[0], n[0], "positive prediction rate", "favored") -
         Ratio(pos[1], n[1], "positive prediction rate", "deprived");
}

double DemographicParity(const GroupConfusion& c) {
  return c.favored.PositiveRate("favored") - c.deprived.PositiveRate("deprived");
}

double AverageOddsDifference(const GroupConfusion& c) {
  const double tpr_gap = c.favored.Tpr("favored") - c.deprived.Tpr("deprived");
  const double fpr_gap = c.favored.Fpr("favored") - c.deprived.Fpr("deprived");
  return (tpr_gap + fpr_gap) / 2;
}

double BalancedAccuracy(const Confusion& c) {
  return (c.Tpr() + c.Tnr()) / 2;
}

double BalancedAccuracy(const std::vector<bool>& labels,
                        const std::vector<bool>& predictions) {
  const std::vector<bool> any(labels.size(), true);
  return BalancedAccuracy(Tally(labels, predictions, any).overall());
}

double Accuracy(const Confusion& c) {
  if (c.total() == 0) throw ConfigError("accuracy of an empty prediction set");
  return static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
}

double Accuracy(const std::vector<bool>& labels,
                const std::vector<bool>& predictions) {
  CheckSizes(labels.size(), predictions.size());
  if (labels.empty()) throw ConfigError("accuracy of an empty prediction set");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    correct += labels[i] == predictions[i] ? 1 : 0;
  }
  return static_cast<double>(correct) / static_cast<double>(labels.size());
}

FairnessReport Evaluate(const std::vector<bool>& labels,
                        const std::vector<bool>& predictions,
                        const std::vector<bool>& favored) {
  FairnessReport report;
  report.confusion = Tally(labels, predictions, favored);
  const Confusion all = report.confusion.overall();
  report.dp = DemographicParity(report.confusion);
  report.aod = AverageOddsDifference(report.confusion);
  report.ba = BalancedAccuracy(all);
  report.acc = Accuracy(all);
  return report;
}

std::string ReportToJson(const FairnessReport& r) {
  nlohmann::json doc{
      {"format", "fairudt-fairness-report"},
      {"version", 1},
      {"sign_convention", kSignConvention},
      {"dp", r.dp},
      {"aod", r.aod},
      {"ba", r.ba},
      {"acc", r.acc},
      {"confusion",
       {{"favored", ConfusionJson(r.confusion.favored)},
        {"deprived", ConfusionJson(r.confusion.deprived)}}}};
  return doc.dump(1);
}

std::string ReportCsvHeader() {
  return "dp,aod,ba,acc,favored_tp,favored_fp,favored_tn,favored_fn,"
         "deprived_tp,deprived_fp,deprived_tn,deprived_fn";
}

std::string ReportCsvRow(const FairnessReport& r) {
  const Confusion& f = r.confusion.favored;
  const Confusion& d = r.confusion.deprived;
  return fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}", r.dp, r.aod, r.ba,
                     r.acc, f.tp, f.fp, f.tn, f.fn, d.tp, d.fp, d.tn, d.fn);
}

std::vector<RocSeries> RocPoints(const std::vector<double>& scores,
                                 const std::vector<bool>& labels,
                                 const std::vector<bool>& favored) {
  if (scores.size() != labels.size() || scores.size() != favored.size()) {
    throw ConfigError("ROC inputs have different lengths");
  }
  for (double s : scores) {
    if (std::isnan(s)) throw DataError("ROC scores contain NaN");
  }
  constexpr double kInf = std::numeric_limits<double>::infinity();
  constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

  std::vector<RocSeries> out;
  for (const char* group : {"favored", "deprived", "all"}) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      const bool in = std::string_view(group) == "all" ||
                      favored[i] == (std::string_view(group) == "favored");
      if (in) rows.push_back(i);
    }
    // Descending score; sweeping the threshold down admits one score level
    // at a time.
    std::sort(rows.begin(), rows.end(), [&](std::size_t a, std::size_t b) {
      return scores[a] > scores[b] || (scores[a] == scores[b] && a < b);
    });
    std::int64_t pos = 0;
    for (std::size_t r : rows) pos += labels[r] ? 1 : 0;
    const std::int64_t neg = static_cast<std::int64_t>(rows.size()) - pos;

    RocSeries series;
    series.group = group;
    series.defined = pos > 0 && neg > 0;
    auto point = [&](double threshold, std::int64_t tp, std::int64_t fp) {
      series.points.push_back(
          {threshold, pos > 0 ? static_cast<double>(tp) / pos : kNaN,
           neg > 0 ? static_cast<double>(fp) / neg : kNaN});
    };
    point(kInf, 0, 0);
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    for (std::size_t i = 0; i < rows.size();) {
      const double level = scores[rows[i]];
      for (; i < rows.size() && scores[rows[i]] == level; ++i) {
        ++(labels[rows[i]] ? tp : fp);
      }
      if (level != kInf && level != -kInf) point(level, tp, fp);
    }
    point(-kInf, pos, neg);
    out.push_back(std::move(series));
  }
  return out;
}

std::string RocToCsv(const std::vector<RocSeries>& series) {
  std::string out = "group,threshold,tpr,fpr\n";
  for (const auto& s : series) {
    for (const auto& p : s.points) {
      out += fmt::format("{},{},{},{}\n", s.group, p.threshold, p.tpr, p.fpr);
    }
  }
  return out;
}

}  // namespace fairudt
