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

#include "scosim/link/sniffer.hpp"

#include <cstdio>
#include <sstream>

namespace scosim::link {

namespace {

constexpr uint8_t kAdCompleteName = 0x09;

}  // namespace

std::string SnifferRecord::to_line() const {
  char t[24];
  std::snprintf(t, sizeof(t), "%012llu", static_cast<unsigned long long>(time));
  std::string out = t;
  out += ' ';
  out += source;
  out += ' ';
  out += destination;
  out += encrypted ? " E " : " P ";
  out += to_hex(data);
  return out;
}

std::optional<SnifferRecord> SnifferRecord::parse_line(std::string_view line) {
  std::istringstream in{std::string(line)};
  SnifferRecord r;
  std::string time, flag, hex;
  if (!(in >> time >> r.source >> r.destination >> flag)) return std::nullopt;
  in >> hex;
  if (flag != "P" && flag != "E") return std::nullopt;
  r.encrypted = flag == "E";
  try {
    r.time = std::stoull(time);
  } catch (const std::exception&) {
    return std::nullopt;
  }
  auto data = from_hex(hex);
  if (!data) return std::nullopt;
  r.data = *data;
  return r;
}

std::string SnifferLog::to_text() const {
  std::string out;
  for (const auto& r : records_) {
    out += r.to_line();
    out += '\n';
  }
  return out;
}

std::vector<SniffedAdvertisement> SnifferLog::advertisements() const {
  std::vector<SniffedAdvertisement> out;
  for (const auto& r : records_) {
    if (r.destination != "broadcast") continue;
    SniffedAdvertisement ad{r.source, ""};
    for (size_t i = 0; i + 1 < r.data.size();) {
      const size_t len = r.data[i];
      if (len == 0 || i + 1 + len > r.data.size()) break;
      if (r.data[i + 1] == kAdCompleteName) {
        ad.name.assign(r.data.begin() + i + 2, r.data.begin() + i + 1 + len);
      }
      i += 1 + len;
    }
    out.push_back(ad);
  }
  return out;
}

std::vector<att::HandleValue> SnifferLog::plaintext_att_values() const {
  std::vector<att::HandleValue> out;
  for (const auto& r : records_) {
    if (r.encrypted || r.destination == "broadcast" || r.data.empty() ||
        r.data[0] != static_cast<uint8_t>(Channel::kAtt)) {
      continue;
    }
    auto pdu = att::Pdu::decode(BytesView(r.data).subspan(1));
    if (!pdu) continue;
    if (auto hv = att::parse_handle_value(*pdu)) {
      out.push_back(*hv);
    } else if (pdu->opcode == att::Opcode::kReadResponse) {
      out.push_back(att::HandleValue{0, pdu->payload});
    }
  }
  return out;
}

}  // namespace scosim::link
