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

#ifndef FAIRUDT_RANDOM_H_
#define FAIRUDT_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace fairudt {

// Name recorded in plan documents and manifests. Bump the suffix whenever the
// derivation below changes, so that old documents are not silently replayed
// with different draws.
inline constexpr const char* kGeneratorName = "mt19937_64+splitmix64/v1";

// One round of SplitMix64; used to derive independent stream seeds.
std::uint64_t MixSeed(std::uint64_t seed, std::uint64_t stream);

// Engine for a (seed, stream) pair. std::mt19937_64's output sequence is fixed
// by the standard; the distributions are not, so the helpers below draw from
// the raw engine directly.
std::mt19937_64 MakeEngine(std::uint64_t seed, std::uint64_t stream);

// Uniform integer in [0, bound) by rejection. bound > 0.
std::uint64_t UniformBelow(std::mt19937_64& engine, std::uint64_t bound);

// Uniform double in [0, 1) with 53 random bits.
double UniformUnit(std::mt19937_64& engine);

// k elements drawn uniformly without replacement, returned in ascending order.
std::vector<std::size_t> SampleWithoutReplacement(
    std::span<const std::size_t> population, std::size_t k,
    std::mt19937_64& engine);

// Fisher-Yates permutation of 0..n-1.
std::vector<std::size_t> Permutation(std::size_t n, std::mt19937_64& engine);

}  // namespace fairudt

#endif  // FAIRUDT_RANDOM_H_
