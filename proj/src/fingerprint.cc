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

#include "fairudt/fingerprint.h"

#include <bit>
#include <charconv>

#include "fairudt/errors.h"
#include "fmt/format.h"

namespace fairudt {

Fingerprinter& Fingerprinter::Add(std::string_view bytes) {
  for (unsigned char c : bytes) {
    state_ ^= c;
    state_ *= 0x100000001b3ULL;
  }
  // Length terminator so that ("ab","c") and ("a","bc") differ.
  return Add(static_cast<std::uint64_t>(bytes.size()));
}

Fingerprinter& Fingerprinter::Add(std::uint64_t value) {
  for (int i = 0; i < 8; ++i) {
    state_ ^= (value >> (8 * i)) & 0xff;
    state_ *= 0x100000001b3ULL;
  }
  return *this;
}

Fingerprinter& Fingerprinter::Add(double value) {
  return Add(std::bit_cast<std::uint64_t>(value));
}

std::string FingerprintToHex(std::uint64_t fingerprint) {
  return fmt::format("{:016x}", fingerprint);
}

std::uint64_t FingerprintFromHex(std::string_view hex) {
  std::uint64_t value = 0;
  const auto [end, ec] =
      std::from_chars(hex.data(), hex.data() + hex.size(), value, 16);
  if (hex.size() != 16 || ec != std::errc() || end != hex.data() + hex.size()) {
    throw ParseError(fmt::format("invalid fingerprint '{}'", hex));
  }
  return value;
}

}  // namespace fairudt
