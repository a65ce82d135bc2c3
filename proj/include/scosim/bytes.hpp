/******************************************************************************
 *
 *  Copyright 2026 The scosim Authors
 *
 *  Licensed under the Apache License, Version 2.0 (the "License");
 *  you may not use this file except in compliance with the License.
 *  You may obtain a copy of the License at:
 *
 *  http://www.apache.org/licenses/LICENSE-2.0
 *
 *  Unless required by applicable law or agreed to in writing, software
 *  distributed under the License is distributed on an "AS IS" BASIS,
 *  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 *  See the License for the specific language governing permissions and
 *  limitations under the License.
 *
 ******************************************************************************/

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace scosim {

using Bytes = std::vector<uint8_t>;
using BytesView = std::span<const uint8_t>;

using Key128 = std::array<uint8_t, 16>;
using Key256 = std::array<uint8_t, 32>;

std::string to_hex(BytesView data);

template <size_t N>
std::string to_hex(const std::array<uint8_t, N>& data) {
  return to_hex(BytesView(data.data(), data.size()));
}

// Accepts an even number of hex digits; whitespace and ':' separators are
// skipped.
std::optional<Bytes> from_hex(std::string_view text);

template <size_t N>
std::optional<std::array<uint8_t, N>> array_from_hex(std::string_view text) {
  auto bytes = from_hex(text);
  if (!bytes || bytes->size() != N) return std::nullopt;
  std::array<uint8_t, N> out{};
  std::copy(bytes->begin(), bytes->end(), out.begin());
  return out;
}

inline void append(Bytes& out, BytesView data) {
  out.insert(out.end(), data.begin(), data.end());
}

template <size_t N>
void append(Bytes& out, const std::array<uint8_t, N>& data) {
  out.insert(out.end(), data.begin(), data.end());
}

inline Bytes to_bytes(std::string_view text) {
  return Bytes(text.begin(), text.end());
}

}  // namespace scosim
