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

// Direct evaluation of the split criteria from raw rows, written without any
// of the library's kernels. Used as the reference in equivalence tests.

#ifndef FAIRUDT_TESTS_ORACLE_H_
#define FAIRUDT_TESTS_ORACLE_H_

#include <optional>
#include <vector>

namespace oracle {

struct Row {
  bool favored = true;
  bool positive = true;
  std::vector<int> values;  // one code per attribute
};

struct Dataset {
  std::vector<int> arity;  // outcomes per attribute
  std::vector<Row> rows;
};

enum class Mode { kKl, kEuclid };

struct Candidate {
  double gain = 0;
  double normalizer = 0;
  double ratio = 0;
  bool eligible = false;
};

// Criterion terms of every attribute at the root.
std::vector<Candidate> Evaluate(const Dataset& data, Mode mode);

// Index of the attribute a root split would use, by exhaustive comparison.
std::optional<int> BestAttribute(const Dataset& data, Mode mode);
std::optional<int> BestAttribute(const std::vector<Candidate>& candidates);

// Leaf discrimination straight from the four rates.
double Disc(long long fp, long long fn, long long dp, long long dn);

}  // namespace oracle

#endif  // FAIRUDT_TESTS_ORACLE_H_
