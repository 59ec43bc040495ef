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

#include "fairudt/divergence.h"

#include <array>
#include <cmath>

#include "fairudt/errors.h"
#include "fmt/format.h"

namespace fairudt {
namespace {

std::array<double, 2> AsArray(const ClassDist& d) { return {d.p_pos, d.p_neg}; }

double Pointwise(const ClassDist& p, const ClassDist& q, Measure measure) {
  return measure == Measure::kKl ? Kl(p, q) : SqEuclid(p, q);
}

}  // namespace

ClassDist EstimateClassDist(std::int64_t positives, std::int64_t negatives,
                            bool laplace) {
  ClassDist d;
  d.support = positives + negatives;
  d.laplace_applied = laplace;
  if (laplace) {
    d.p_pos = static_cast<double>(positives + 1) /
              static_cast<double>(d.support + 2);
    d.p_neg = static_cast<double>(negatives + 1) /
              static_cast<double>(d.support + 2);
  } else if (d.support == 0) {
    d.degenerate = true;
  } else {
    d.p_pos = static_cast<double>(positives) / static_cast<double>(d.support);
    d.p_neg = static_cast<double>(negatives) / static_cast<double>(d.support);
  }
  return d;
}

std::pair<ClassDist, ClassDist> ClassDists(const GroupCounts& counts,
                                           bool laplace) {
  return {EstimateClassDist(counts.favored_pos, counts.favored_neg, laplace),
          EstimateClassDist(counts.deprived_pos, counts.deprived_neg, laplace)};
}

double Kl(std::span<const double> p, std::span<const double> q) {
  double sum = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0) continue;
    if (q[i] <= 0) {
      throw DomainError(fmt::format(
          "KL divergence is infinite: reference has zero mass at outcome {} "
          "(apply Laplace correction)",
          i));
    }
    sum += p[i] * std::log2(p[i] / q[i]);
  }
  return sum;
}

double Kl(const ClassDist& p, const ClassDist& q) {
  const auto a = AsArray(p);
  const auto b = AsArray(q);
  return Kl(a, b);
}

double SqEuclid(std::span<const double> p, std::span<const double> q) {
  double sum = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = p[i] - q[i];
    sum += d * d;
  }
  return sum;
}

double SqEuclid(const ClassDist& p, const ClassDist& q) {
  const auto a = AsArray(p);
  const auto b = AsArray(q);
  return SqEuclid(a, b);
}

double Entropy(std::span<const double> p) {
  double h = 0;
  for (double v : p) {
    if (v > 0) h -= v * std::log2(v);
  }
  return h;
}

double Gini(std::span<const double> p) {
  double sum_sq = 0;
  for (double v : p) sum_sq += v * v;
  return 1.0 - sum_sq;
}

double NodeDivergence(const GroupCounts& counts, Measure measure,
                      bool laplace) {
  const auto [favored, deprived] = ClassDists(counts, laplace);
  return Pointwise(favored, deprived, measure);
}

double ConditionalDivergence(std::span<const GroupCounts> children,
                             Measure measure, bool laplace) {
  std::int64_t total = 0;
  for (const auto& child : children) total += child.total();
  if (total == 0) return 0;
  double sum = 0;
  for (const auto& child : children) {
    if (child.total() == 0) continue;
    const double weight =
        static_cast<double>(child.total()) / static_cast<double>(total);
    sum += weight * NodeDivergence(child, measure, laplace);
  }
  return sum;
}

double DivergenceGain(const GroupCounts& parent,
                      std::span<const GroupCounts> children, Measure measure,
                      bool laplace) {
  return ConditionalDivergence(children, measure, laplace) -
         NodeDivergence(parent, measure, laplace);
}

OutcomeDists EstimateOutcomeDists(std::span<const GroupCounts> children,
                                  bool laplace) {
  const auto k = static_cast<double>(children.size());
  std::int64_t n_favored = 0;
  std::int64_t n_deprived = 0;
  for (const auto& child : children) {
    n_favored += child.favored();
    n_deprived += child.deprived();
  }
  auto estimate = [&](std::int64_t count, std::int64_t total) {
    if (laplace) {
      return (static_cast<double>(count) + 1) / (static_cast<double>(total) + k);
    }
    return total == 0 ? 1.0 / k
                      : static_cast<double>(count) / static_cast<double>(total);
  };
  OutcomeDists out;
  out.favored.reserve(children.size());
  out.deprived.reserve(children.size());
  for (const auto& child : children) {
    out.favored.push_back(estimate(child.favored(), n_favored));
    out.deprived.push_back(estimate(child.deprived(), n_deprived));
  }
  return out;
}

double KlNormalizer(const GroupCounts& parent, const OutcomeDists& outcomes) {
  const double n = static_cast<double>(parent.total());
  if (n == 0) return 0;
  const double w_favored = static_cast<double>(parent.favored()) / n;
  const double w_deprived = static_cast<double>(parent.deprived()) / n;
  const std::array<double, 2> groups{w_favored, w_deprived};
  const double balance = Entropy(groups);
  // The imbalance term vanishes with either group; skip it so an absent
  // group's (uniform) outcome distribution is never compared.
  const double imbalance =
      balance > 0 ? balance * Kl(outcomes.favored, outcomes.deprived) : 0.0;
  return imbalance + w_favored * Entropy(outcomes.favored) +
         w_deprived * Entropy(outcomes.deprived);
}

double ENormalizer(const GroupCounts& parent, const OutcomeDists& outcomes) {
  const double n = static_cast<double>(parent.total());
  if (n == 0) return 0;
  const double w_favored = static_cast<double>(parent.favored()) / n;
  const double w_deprived = static_cast<double>(parent.deprived()) / n;
  const std::array<double, 2> groups{w_favored, w_deprived};
  return Gini(groups) * SqEuclid(outcomes.favored, outcomes.deprived) +
         w_favored * Gini(outcomes.favored) +
         w_deprived * Gini(outcomes.deprived);
}

double GainRatio(double raw_gain, double normalizer) {
  if (normalizer < kNormalizerEpsilon) return kIneligibleRatio;
  return raw_gain / normalizer;
}

double FallbackGain(const GroupCounts& parent,
                    std::span<const GroupCounts> children, Measure measure) {
  const bool favored_only = parent.deprived() == 0 && parent.favored() > 0;
  const bool deprived_only = parent.favored() == 0 && parent.deprived() > 0;
  if (!favored_only && !deprived_only) {
    throw InvariantError(
        "fallback gain needs exactly one empty group at the node");
  }
  auto impurity = [&](std::int64_t pos, std::int64_t neg) {
    const double n = static_cast<double>(pos + neg);
    if (n == 0) return 0.0;
    const std::array<double, 2> p{static_cast<double>(pos) / n,
                                  static_cast<double>(neg) / n};
    return measure == Measure::kKl ? Entropy(p) : Gini(p);
  };
  auto group_of = [&](const GroupCounts& c) {
    return favored_only ? std::pair{c.favored_pos, c.favored_neg}
                        : std::pair{c.deprived_pos, c.deprived_neg};
  };
  const auto [parent_pos, parent_neg] = group_of(parent);
  const double n = static_cast<double>(parent_pos + parent_neg);
  double after = 0;
  for (const auto& child : children) {
    const auto [pos, neg] = group_of(child);
    after += static_cast<double>(pos + neg) / n * impurity(pos, neg);
  }
  return impurity(parent_pos, parent_neg) - after;
}

}  // namespace fairudt
