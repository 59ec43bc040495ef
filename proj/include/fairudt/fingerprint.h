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

#ifndef FAIRUDT_FINGERPRINT_H_
#define FAIRUDT_FINGERPRINT_H_

#include <cstdint>
#include <string>
#include <string_view>

namespace fairudt {

// Streaming 64-bit FNV-1a. Stable across platforms and runs, which is all the
// fingerprints in documents need.
class Fingerprinter {
 public:
  Fingerprinter& Add(std::string_view bytes);
  Fingerprinter& Add(std::uint64_t value);
  Fingerprinter& Add(double value);

  std::uint64_t value() const { return state_; }

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

std::string FingerprintToHex(std::uint64_t fingerprint);

// Throws ParseError on anything but 16 hex digits.
std::uint64_t FingerprintFromHex(std::string_view hex);

}  // namespace fairudt

#endif  // FAIRUDT_FINGERPRINT_H_
