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

#include "fairudt/random.h"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace fairudt {

std::uint64_t MixSeed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::mt19937_64 MakeEngine(std::uint64_t seed, std::uint64_t stream) {
  return std::mt19937_64(MixSeed(seed, stream));
}

std::uint64_t UniformBelow(std::mt19937_64& engine, std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("UniformBelow: bound is 0");
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = kMax - (kMax % bound + 1) % bound;
  std::uint64_t draw;
  do {
    draw = engine();
  } while (draw > limit);
  return draw % bound;
}

double UniformUnit(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

std::vector<std::size_t> SampleWithoutReplacement(
    std::span<const std::size_t> population, std::size_t k,
    std::mt19937_64& engine) {
  std::vector<std::size_t> pool(population.begin(), population.end());
  k = std::min(k, pool.size());
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + UniformBelow(engine, pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

std::vector<std::size_t> Permutation(std::size_t n, std::mt19937_64& engine) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = n; i > 1; --i) {
    std::swap(order[i - 1], order[UniformBelow(engine, i)]);
  }
  return order;
}

}  // namespace fairudt
