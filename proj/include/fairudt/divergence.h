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

#ifndef FAIRUDT_DIVERGENCE_H_
#define FAIRUDT_DIVERGENCE_H_

#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "fairudt/group_counts.h"

namespace fairudt {

// Information-theoretic kernels of the splitting criteria. All logarithms are
// base 2.

enum class Measure { kKl, kEuclid };

// Laplace smoothing is used for KL (it keeps the divergence finite) and not
// for the squared Euclidean distance.
constexpr bool DefaultLaplace(Measure measure) { return measure == Measure::kKl; }

// Normalizers below this make a candidate ineligible.
inline constexpr double kNormalizerEpsilon = 1e-9;
inline constexpr double kIneligibleRatio =
    -std::numeric_limits<double>::infinity();

// Binary class distribution of one group.
struct ClassDist {
  double p_pos = 0.5;
  double p_neg = 0.5;
  bool laplace_applied = false;
  // Number of rows the estimate was made from.
  std::int64_t support = 0;
  // Raw estimate over zero rows; the distribution is then uniform.
  bool degenerate = false;
};

// Add-one estimate (n+ + 1)/(n + 2) with Laplace, raw frequency otherwise. An
// empty group gives the uniform distribution either way.
ClassDist EstimateClassDist(std::int64_t positives, std::int64_t negatives,
                            bool laplace);

// (favored, deprived) class distributions.
std::pair<ClassDist, ClassDist> ClassDists(const GroupCounts& counts,
                                           bool laplace);

// sum p_i log2(p_i / q_i). Throws DomainError when q_i = 0 < p_i.
double Kl(const ClassDist& p, const ClassDist& q);
double Kl(std::span<const double> p, std::span<const double> q);

double SqEuclid(const ClassDist& p, const ClassDist& q);
double SqEuclid(std::span<const double> p, std::span<const double> q);

double Entropy(std::span<const double> p);
double Gini(std::span<const double> p);

// D(P^F(Y) : P^D(Y)) at one node.
double NodeDivergence(const GroupCounts& counts, Measure measure, bool laplace);
inline double NodeDivergence(const GroupCounts& counts, Measure measure) {
  return NodeDivergence(counts, measure, DefaultLaplace(measure));
}

// sum_a N(a)/N * D(P^F(Y|a) : P^D(Y|a)), N over both groups. 0 when every
// child is empty.
double ConditionalDivergence(std::span<const GroupCounts> children,
                             Measure measure, bool laplace);
inline double ConditionalDivergence(std::span<const GroupCounts> children,
                                    Measure measure) {
  return ConditionalDivergence(children, measure, DefaultLaplace(measure));
}

// Conditional divergence after the split minus divergence before it. May be
// negative.
double DivergenceGain(const GroupCounts& parent,
                      std::span<const GroupCounts> children, Measure measure,
                      bool laplace);
inline double DivergenceGain(const GroupCounts& parent,
                             std::span<const GroupCounts> children,
                             Measure measure) {
  return DivergenceGain(parent, children, measure, DefaultLaplace(measure));
}

// Distribution of a test's outcomes within each group: P^F(A), P^D(A).
struct OutcomeDists {
  std::vector<double> favored;
  std::vector<double> deprived;
};

// With Laplace: (n_g(a) + 1) / (n_g + k) over the k children given.
OutcomeDists EstimateOutcomeDists(std::span<const GroupCounts> children,
                                  bool laplace);

// H(N^F/N, N^D/N) KL(P^F(A):P^D(A)) + N^F/N H(P^F(A)) + N^D/N H(P^D(A)).
double KlNormalizer(const GroupCounts& parent, const OutcomeDists& outcomes);

// Same shape with Gini in place of entropy and E in place of KL.
double ENormalizer(const GroupCounts& parent, const OutcomeDists& outcomes);

// gain / normalizer, or kIneligibleRatio when normalizer < kNormalizerEpsilon.
double GainRatio(double raw_gain, double normalizer);

// Classical entropy gain (KL) or Gini gain (Euclid) on the class labels of the
// only non-empty group. Throws InvariantError unless exactly one group is
// empty at the parent.
double FallbackGain(const GroupCounts& parent,
                    std::span<const GroupCounts> children, Measure measure);

}  // namespace fairudt

#endif  // FAIRUDT_DIVERGENCE_H_
