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

#ifndef FAIRUDT_GROUP_COUNTS_H_
#define FAIRUDT_GROUP_COUNTS_H_

#include <cstdint>

namespace fairudt {

// Class tallies of the favored and deprived groups at one node (or any row
// subset).
struct GroupCounts {
  std::int64_t favored_pos = 0;
  std::int64_t favored_neg = 0;
  std::int64_t deprived_pos = 0;
  std::int64_t deprived_neg = 0;

  std::int64_t favored() const { return favored_pos + favored_neg; }
  std::int64_t deprived() const { return deprived_pos + deprived_neg; }
  std::int64_t total() const { return favored() + deprived(); }
  std::int64_t positives() const { return favored_pos + deprived_pos; }
  std::int64_t negatives() const { return favored_neg + deprived_neg; }

  void Add(bool favored, bool positive) {
    if (favored) {
      ++(positive ? favored_pos : favored_neg);
    } else {
      ++(positive ? deprived_pos : deprived_neg);
    }
  }

  GroupCounts& operator+=(const GroupCounts& other) {
    favored_pos += other.favored_pos;
    favored_neg += other.favored_neg;
    deprived_pos += other.deprived_pos;
    deprived_neg += other.deprived_neg;
    return *this;
  }

  friend GroupCounts operator+(GroupCounts a, const GroupCounts& b) {
    return a += b;
  }
  friend bool operator==(const GroupCounts&, const GroupCounts&) = default;
};

}  // namespace fairudt

#endif  // FAIRUDT_GROUP_COUNTS_H_
