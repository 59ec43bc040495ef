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

#ifndef FAIRUDT_METRICS_H_
#define FAIRUDT_METRICS_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace fairudt {

// Differences are always favored minus deprived.
inline constexpr const char* kSignConvention = "favored_minus_deprived";

// Confusion counts of binary predictions against binary labels.
struct Confusion {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t tn = 0;
  std::int64_t fn = 0;

  std::int64_t total() const { return tp + fp + tn + fn; }
  std::int64_t predicted_positive() const { return tp + fp; }

  // Rates throw MetricUndefinedError when the denominator is zero; `scope`
  // names the group in the message.
  double Tpr(std::string_view scope = "all") const;
  double Fpr(std::string_view scope = "all") const;
  double Tnr(std::string_view scope = "all") const;
  double PositiveRate(std::string_view scope = "all") const;

  friend bool operator==(const Confusion&, const Confusion&) = default;
};

struct GroupConfusion {
  Confusion favored;
  Confusion deprived;

  Confusion overall() const;

  friend bool operator==(const GroupConfusion&,
                         const GroupConfusion&) = default;
};

// All vectors are indexed by row and must have equal length (ConfigError
// otherwise). `favored[i]` is the group of row i.
GroupConfusion Tally(const std::vector<bool>& labels,
                     const std::vector<bool>& predictions,
                     const std::vector<bool>& favored);

// P(pred+ | favored) - P(pred+ | deprived). MetricUndefinedError if a group
// is empty.
double DemographicParity(const std::vector<bool>& predictions,
                         const std::vector<bool>& favored);
double DemographicParity(const GroupConfusion& confusion);

// ((TPR_F - TPR_D) + (FPR_F - FPR_D)) / 2.
double AverageOddsDifference(const GroupConfusion& confusion);

// (TPR + TNR) / 2 over all rows. MetricUndefinedError on single-class labels.
double BalancedAccuracy(const std::vector<bool>& labels,
                        const std::vector<bool>& predictions);
double BalancedAccuracy(const Confusion& confusion);

// Fraction of matching entries. ConfigError if empty.
double Accuracy(const std::vector<bool>& labels,
                const std::vector<bool>& predictions);
double Accuracy(const Confusion& confusion);

struct FairnessReport {
  double dp = 0;
  double aod = 0;
  double ba = 0;
  double acc = 0;
  GroupConfusion confusion;
};

// Every metric must be defined.
FairnessReport Evaluate(const std::vector<bool>& labels,
                        const std::vector<bool>& predictions,
                        const std::vector<bool>& favored);

std::string ReportToJson(const FairnessReport& report);
std::string ReportCsvHeader();
std::string ReportCsvRow(const FairnessReport& report);

struct RocPoint {
  double threshold = 0;
  double tpr = 0;
  double fpr = 0;
};

struct RocSeries {
  std::string group;  // "favored", "deprived" or "all"
  // False when the group lacks one class; the affected rate is NaN.
  bool defined = true;
  std::vector<RocPoint> points;
};

// Predicted positive iff score >= threshold. Thresholds run from +inf down
// through every distinct score to -inf, so each series starts at (0, 0) and
// ends at (1, 1).
std::vector<RocSeries> RocPoints(const std::vector<double>& scores,
                                 const std::vector<bool>& labels,
                                 const std::vector<bool>& favored);

// CSV with header group,threshold,tpr,fpr.
std::string RocToCsv(const std::vector<RocSeries>& series);

}  // namespace fairudt

#endif  // FAIRUDT_METRICS_H_
