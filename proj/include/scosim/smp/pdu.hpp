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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "scosim/bytes.hpp"
#include "scosim/crypto.hpp"
#include "scosim/model.hpp"

namespace scosim::smp {

enum class Opcode : uint8_t {
  kPairingRequest = 0x01,
  kPairingResponse = 0x02,
  kPairingConfirm = 0x03,
  kPairingRandom = 0x04,
  kPairingFailed = 0x05,
  kIdentityInformation = 0x08,
  kIdentityAddressInformation = 0x09,
  kSecurityRequest = 0x0B,
  kPairingPublicKey = 0x0C,
  kPairingDhKeyCheck = 0x0D,
};

std::string_view to_string(Opcode opcode);

// Key distribution bit for identity information (IRK + identity address).
inline constexpr uint8_t kKeyDistIdKey = 0x02;

struct Pdu {
  Opcode opcode = Opcode::kPairingFailed;
  Bytes payload;

  Bytes encode() const;
  static std::optional<Pdu> decode(BytesView wire);

  bool operator==(const Pdu&) const = default;
};

// Pairing request/response body:
//   [io] [oob] [authreq] [max key size] [initiator key dist] [responder key dist]
// authreq: bit0 bonding, bit2 MITM, bit3 SC. Remaining bits are ignored on
// receipt.
struct FeatureExchange {
  PairingFeatures features;
  uint8_t initiator_key_dist = 0;
  uint8_t responder_key_dist = 0;
};

Pdu make_pairing_request(const FeatureExchange& body);
Pdu make_pairing_response(const FeatureExchange& body);
std::optional<FeatureExchange> parse_feature_exchange(const Pdu& pdu);

Pdu make_public_key(const crypto::PublicKey& key);
std::optional<crypto::PublicKey> parse_public_key(const Pdu& pdu);

Pdu make_confirm(const Key128& value);
Pdu make_random(const crypto::Nonce& nonce);
Pdu make_dhkey_check(const Key128& value);
std::optional<Key128> parse_key128(const Pdu& pdu);

Pdu make_failed(SecurityError reason);
// Unknown reason octets map to PairingAuthFail.
SecurityError parse_failed(const Pdu& pdu);

Pdu make_identity_information(const crypto::Irk& irk);
Pdu make_identity_address_information(const DeviceAddress& identity);
std::optional<DeviceAddress> parse_identity_address(const Pdu& pdu);

Pdu make_security_request(const PairingFeatures& features);
// Only the AuthReq flags are carried; io and oob keep their defaults.
std::optional<PairingFeatures> parse_security_request(const Pdu& pdu);

// One-line human readable rendering, used in transcripts.
std::string describe(const Pdu& pdu);

}  // namespace scosim::smp
