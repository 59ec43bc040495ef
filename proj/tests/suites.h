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

// Randomized and exhaustive checks shared by the unit tests and the
// acceptance runner. Each returns a summary instead of asserting so callers
// can report it their own way.

#ifndef FAIRUDT_TESTS_SUITES_H_
#define FAIRUDT_TESTS_SUITES_H_

#include <cstdint>
#include <string>
#include <vector>

namespace fairudt::suites {

struct Outcome {
  std::int64_t instances = 0;
  std::int64_t failures = 0;
  double max_error = 0;
  std::string first_failure;

  bool ok() const { return failures == 0 && instances > 0; }
  void Fail(const std::string& what) {
    if (failures++ == 0) first_failure = what;
  }
  void Error(double err, double tolerance, const std::string& what) {
    Error(err, tolerance, [&] { return what; });
  }
  // Builds the description only when the check fails.
  template <typename Describe>
  void Error(double err, double tolerance, const Describe& describe) {
    if (err > max_error) max_error = err;
    if (!(err <= tolerance)) Fail(describe());
  }
};

// Identical group distributions at the parent and in every child give zero
// gain; children with unequal group distributions give positive conditional
// divergence.
Outcome IdenticalGroupsProperty(int instances, std::uint64_t seed);

// Children whose per-group class distributions equal the parent's give zero
// gain (no smoothing), within 1e-9.
Outcome IndependenceProperty(int instances, std::uint64_t seed);

// With one group absent, the divergence gain against the uniform reference
// and the split evaluation's gain both equal the entropy gain (KL) or the
// Gini gain (Euclid) within 1e-10.
Outcome EntropyReductionProperty(int instances, std::uint64_t seed);
Outcome GiniReductionProperty(int instances, std::uint64_t seed);

struct Enumeration {
  int max_rows = 0;
  std::vector<int> arity;
};

// Every multiset of rows (favored, label, attribute values) up to
// `max_rows`: the chosen root attribute must equal the oracle's argmax, and
// gains and normalizers must agree within 1e-10. Both criteria.
Outcome OracleEquivalence(const Enumeration& space);

// Random datasets checked the same way, including full tree builds.
Outcome OracleEquivalenceRandom(int instances, int max_rows,
                                std::uint64_t seed);

}  // namespace fairudt::suites

#endif  // FAIRUDT_TESTS_SUITES_H_
