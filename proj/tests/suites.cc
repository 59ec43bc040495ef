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

#include "suites.h"

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "fairudt/divergence.h"
#include "fairudt/tree.h"
#include "fmt/format.h"
#include "oracle.h"
#include "test_util.h"

namespace fairudt::suites {
namespace {

using Real = long double;

std::int64_t Draw(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

Real Impurity(std::int64_t pos, std::int64_t neg, bool gini) {
  const Real n = static_cast<Real>(pos + neg);
  if (n == 0) return 0;
  const Real p = pos / n;
  const Real q = neg / n;
  if (gini) return 1 - p * p - q * q;
  Real h = 0;
  if (p > 0) h -= p * std::log2(p);
  if (q > 0) h -= q * std::log2(q);
  return h;
}

// Classical impurity gain of a (positives, negatives) partition.
double ImpurityGain(const std::vector<std::pair<std::int64_t, std::int64_t>>& parts,
                    bool gini) {
  std::int64_t pos = 0;
  std::int64_t neg = 0;
  for (const auto& [p, n] : parts) {
    pos += p;
    neg += n;
  }
  Real gain = Impurity(pos, neg, gini);
  for (const auto& [p, n] : parts) {
    gain -= static_cast<Real>(p + n) / static_cast<Real>(pos + neg) *
            Impurity(p, n, gini);
  }
  return static_cast<double>(gain);
}

// Single-group dataset realizing `parts`, one attribute with one outcome per
// part.
DataTable OneGroupTable(
    const std::vector<std::pair<std::int64_t, std::int64_t>>& parts,
    bool favored) {
  oracle::Dataset data;
  data.arity = {static_cast<int>(parts.size())};
  for (std::size_t j = 0; j < parts.size(); ++j) {
    const int v = static_cast<int>(j);
    for (std::int64_t i = 0; i < parts[j].first; ++i) data.rows.push_back({favored, true, {v}});
    for (std::int64_t i = 0; i < parts[j].second; ++i) data.rows.push_back({favored, false, {v}});
  }
  return testing::MakeTable(data);
}

Outcome ReductionProperty(int instances, std::uint64_t seed, bool gini) {
  std::mt19937_64 rng(seed);
  Outcome out;
  const Measure measure = gini ? Measure::kEuclid : Measure::kKl;
  const Criterion criterion = gini ? Criterion::kEuclidRatio : Criterion::kKlRatio;
  for (int i = 0; i < instances; ++i) {
    // KL reduces to entropy when the deprived group is absent; the Euclid
    // form is symmetric, so either group may be missing.
    const bool favored = gini ? i % 2 == 0 : true;
    const int k = static_cast<int>(Draw(rng, 1, 4));
    std::vector<std::pair<std::int64_t, std::int64_t>> parts;
    std::vector<GroupCounts> children;
    GroupCounts parent;
    for (int j = 0; j < k; ++j) {
      std::int64_t p = Draw(rng, 0, 7);
      std::int64_t n = Draw(rng, 0, 7);
      if (p + n == 0) p = 1;
      parts.emplace_back(p, n);
      GroupCounts c = favored ? GroupCounts{p, n, 0, 0} : GroupCounts{0, 0, p, n};
      children.push_back(c);
      parent += c;
    }
    const double expected = ImpurityGain(parts, gini);
    const std::string label = fmt::format("instance {}", i);
    out.Error(std::abs(DivergenceGain(parent, children, measure, false) - expected),
              1e-10, label + " divergence gain");
    const DataTable table = OneGroupTable(parts, favored);
    std::vector<std::size_t> rows(table.num_rows());
    for (std::size_t r = 0; r < rows.size(); ++r) rows[r] = r;
    const std::vector<std::size_t> attrs{0};
    const auto evals = EvaluateSplits(table, rows, attrs, criterion);
    out.Error(std::abs(evals[0].raw_gain - expected), 1e-10,
              label + " split evaluation");
    ++out.instances;
  }
  return out;
}

// Cross-multiplied comparison of two raw rates a/n and c/m.
bool SameRate(std::int64_t a, std::int64_t n, std::int64_t c, std::int64_t m) {
  return a * m == c * n;
}

void CompareWithOracle(const DataTable& table,
                       const std::vector<std::size_t>& rows,
                       const oracle::Dataset& data, Outcome& out) {
  std::vector<std::size_t> attrs(data.arity.size());
  for (std::size_t a = 0; a < attrs.size(); ++a) attrs[a] = a;
  for (Criterion criterion : {Criterion::kKlRatio, Criterion::kEuclidRatio}) {
    const oracle::Mode mode = criterion == Criterion::kKlRatio
                                  ? oracle::Mode::kKl
                                  : oracle::Mode::kEuclid;
    const auto evals = EvaluateSplits(table, rows, attrs, criterion);
    const auto expected = oracle::Evaluate(data, mode);
    for (std::size_t a = 0; a < attrs.size(); ++a) {
      auto where = [&](const char* what) {
        return fmt::format("{} rows, {} attribute {}: {}", rows.size(),
                           CriterionName(criterion), a, what);
      };
      out.Error(std::abs(evals[a].raw_gain - expected[a].gain), 1e-10,
                [&] { return where("gain"); });
      out.Error(std::abs(evals[a].normalizer - expected[a].normalizer), 1e-10,
                [&] { return where("normalizer"); });
      if (evals[a].eligible != expected[a].eligible) out.Fail(where("eligibility"));
    }
    const auto chosen = ChooseSplit(evals);
    const auto best = oracle::BestAttribute(expected);
    const bool same = chosen.has_value() == best.has_value() &&
                      (!chosen || static_cast<int>(*chosen) == *best);
    if (!same) {
      std::string ratios;
      for (std::size_t a = 0; a < attrs.size(); ++a) {
        ratios += fmt::format(" [{}: {:.3e} vs {:.3e}]", a, evals[a].ratio,
                              expected[a].ratio);
      }
      out.Fail(fmt::format("{} rows, {}: chose {} but argmax is {};{}", rows.size(),
                           CriterionName(criterion),
                           chosen ? static_cast<int>(*chosen) : -1,
                           best ? *best : -1, ratios));
    }
  }
  ++out.instances;
}

}  // namespace

Outcome IdenticalGroupsProperty(int instances, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Outcome out;
  for (int i = 0; i < instances; ++i) {
    const int k = static_cast<int>(Draw(rng, 1, 4));
    const bool laplace = i % 3 == 0;
    // Equal counts keep the smoothed estimates identical too.
    const std::int64_t m = laplace ? 1 : Draw(rng, 1, 3);
    std::vector<GroupCounts> children;
    GroupCounts parent;
    for (int j = 0; j < k; ++j) {
      std::int64_t a = Draw(rng, 0, 6);
      std::int64_t b = Draw(rng, 0, 6);
      if (a + b == 0) b = 1;
      children.push_back({a, b, m * a, m * b});
      parent += children.back();
    }
    for (Measure measure : {Measure::kKl, Measure::kEuclid}) {
      const double gain = DivergenceGain(parent, children, measure, laplace);
      out.Error(std::abs(gain), 1e-12, fmt::format("instance {}: identical", i));
    }

    // Unequal children: every count positive so raw KL stays finite.
    std::vector<GroupCounts> unequal;
    bool differs = false;
    bool smoothed_differs = false;
    for (int j = 0; j < k; ++j) {
      const GroupCounts c{Draw(rng, 1, 6), Draw(rng, 1, 6), Draw(rng, 1, 6),
                          Draw(rng, 1, 6)};
      differs = differs || !SameRate(c.favored_pos, c.favored(), c.deprived_pos,
                                     c.deprived());
      smoothed_differs =
          smoothed_differs || !SameRate(c.favored_pos + 1, c.favored() + 2,
                                        c.deprived_pos + 1, c.deprived() + 2);
      unequal.push_back(c);
    }
    if (differs) {
      for (Measure measure : {Measure::kKl, Measure::kEuclid}) {
        if (!(ConditionalDivergence(unequal, measure, false) > 0)) {
          out.Fail(fmt::format("instance {}: unequal children gave zero", i));
        }
      }
    }
    if (smoothed_differs && !(ConditionalDivergence(unequal, Measure::kKl, true) > 0)) {
      out.Fail(fmt::format("instance {}: smoothed unequal children gave zero", i));
    }
    ++out.instances;
  }
  return out;
}

Outcome IndependenceProperty(int instances, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Outcome out;
  for (int i = 0; i < instances; ++i) {
    const bool kl = i % 2 == 0;
    // Raw KL needs both classes present in the deprived reference.
    const std::int64_t lo = kl ? 1 : 0;
    std::int64_t a = Draw(rng, lo, 5), b = Draw(rng, lo, 5);
    std::int64_t c = Draw(rng, lo, 5), d = Draw(rng, lo, 5);
    if (a + b == 0) a = 1;
    if (c + d == 0) d = 1;
    const int k = static_cast<int>(Draw(rng, 1, 4));
    std::vector<GroupCounts> children;
    GroupCounts parent;
    for (int j = 0; j < k; ++j) {
      const std::int64_t t = Draw(rng, 1, 3);
      const std::int64_t u = Draw(rng, 1, 3);
      children.push_back({t * a, t * b, u * c, u * d});
      parent += children.back();
    }
    const Measure measure = kl ? Measure::kKl : Measure::kEuclid;
    const double gain = DivergenceGain(parent, children, measure, false);
    out.Error(std::abs(gain), 1e-9, fmt::format("instance {}", i));
    ++out.instances;
  }
  return out;
}

Outcome EntropyReductionProperty(int instances, std::uint64_t seed) {
  return ReductionProperty(instances, seed, false);
}

Outcome GiniReductionProperty(int instances, std::uint64_t seed) {
  return ReductionProperty(instances, seed, true);
}

Outcome OracleEquivalence(const Enumeration& space) {
  // One prototype row per distinct (group, class, values) combination.
  oracle::Dataset prototypes;
  prototypes.arity = space.arity;
  std::vector<int> values(space.arity.size(), 0);
  std::function<void(std::size_t)> expand = [&](std::size_t a) {
    if (a == space.arity.size()) {
      for (bool favored : {true, false}) {
        for (bool positive : {true, false}) {
          prototypes.rows.push_back({favored, positive, values});
        }
      }
      return;
    }
    for (int v = 0; v < space.arity[a]; ++v) {
      values[a] = v;
      expand(a + 1);
    }
  };
  expand(0);
  const DataTable table = testing::MakeTable(prototypes);
  const std::size_t types = prototypes.rows.size();

  Outcome out;
  std::vector<std::size_t> rows;
  oracle::Dataset data;
  data.arity = space.arity;
  // Multisets as non-decreasing sequences of prototype indices.
  std::function<void(std::size_t)> extend = [&](std::size_t from) {
    if (!rows.empty()) CompareWithOracle(table, rows, data, out);
    if (static_cast<int>(rows.size()) == space.max_rows) return;
    for (std::size_t t = from; t < types; ++t) {
      rows.push_back(t);
      data.rows.push_back(prototypes.rows[t]);
      extend(t);
      rows.pop_back();
      data.rows.pop_back();
    }
  };
  extend(0);
  return out;
}

Outcome OracleEquivalenceRandom(int instances, int max_rows,
                                std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Outcome out;
  for (int i = 0; i < instances; ++i) {
    std::vector<int> arity(static_cast<std::size_t>(Draw(rng, 2, 3)));
    for (int& k : arity) k = static_cast<int>(Draw(rng, 1, 3));
    const oracle::Dataset data = testing::RandomDataset(rng, max_rows, arity);
    const DataTable table = testing::MakeTable(data);
    std::vector<std::size_t> rows(table.num_rows());
    for (std::size_t r = 0; r < rows.size(); ++r) rows[r] = r;
    CompareWithOracle(table, rows, data, out);

    // A full build splits its root the same way unless the root is pure.
    const GroupCounts counts = CountGroups(table);
    const bool pure = counts.positives() == 0 || counts.negatives() == 0;
    for (Criterion criterion : {Criterion::kKlRatio, Criterion::kEuclidRatio}) {
      const FairTree tree = Build(table, criterion);
      const auto best = oracle::BestAttribute(
          data, criterion == Criterion::kKlRatio ? oracle::Mode::kKl
                                                 : oracle::Mode::kEuclid);
      const bool leaf = tree.root().is_leaf();
      const bool expect_leaf = pure || !best;
      if (leaf != expect_leaf ||
          (!leaf && static_cast<int>(tree.root().attribute) != *best)) {
        out.Fail(fmt::format("instance {}: built root differs from argmax", i));
      }
    }
  }
  return out;
}

}  // namespace fairudt::suites
