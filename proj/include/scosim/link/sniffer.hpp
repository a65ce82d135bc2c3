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

/******************************************************************************
 *
 *  Promiscuous capture of everything on air. One record per delivered frame
 *  and one per advertising start. Text export, one record per line:
 *
 *    <time_us> <src> <dst> <P|E> <hex>
 *
 *  P marks plaintext, E ciphertext. Advertisements use "broadcast" as the
 *  destination and carry AD structures (complete local name, 128-bit
 *  service UUIDs). Connection frames start with a channel octet: 0x00 link
 *  control, 0x04 ATT, 0x06 SMP; encrypted frames are opaque.
 *
 ******************************************************************************/

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scosim/att/pdu.hpp"
#include "scosim/bytes.hpp"
#include "scosim/link/scheduler.hpp"
#include "scosim/model.hpp"

namespace scosim::link {

enum class Channel : uint8_t {
  kLinkControl = 0x00,
  kAtt = 0x04,
  kSmp = 0x06,
};

struct SnifferRecord {
  Time time = 0;
  std::string source;
  std::string destination;  // "broadcast" for advertisements
  bool encrypted = false;
  Bytes data;

  std::string to_line() const;
  static std::optional<SnifferRecord> parse_line(std::string_view line);

  bool operator==(const SnifferRecord&) const = default;
};

struct SniffedAdvertisement {
  std::string address;
  std::string name;
};

class SnifferLog {
 public:
  void record(SnifferRecord r) { records_.push_back(std::move(r)); }
  const std::vector<SnifferRecord>& records() const { return records_; }
  size_t size() const { return records_.size(); }

  std::string to_text() const;

  // What a passive observer learns without any key.
  std::vector<SniffedAdvertisement> advertisements() const;
  std::vector<att::HandleValue> plaintext_att_values() const;

 private:
  std::vector<SnifferRecord> records_;
};

}  // namespace scosim::link
