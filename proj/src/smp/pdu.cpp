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

#include "scosim/smp/pdu.hpp"

#include <algorithm>

namespace scosim::smp {

namespace {

constexpr uint8_t kAuthReqBonding = 0x01;
constexpr uint8_t kAuthReqMitm = 0x04;
constexpr uint8_t kAuthReqSc = 0x08;
constexpr uint8_t kMaxKeySize = 16;
constexpr size_t kFeatureLength = 6;

uint8_t encode_authreq(const PairingFeatures& f) {
  uint8_t v = 0;
  if (f.bonding) v |= kAuthReqBonding;
  if (f.mitm) v |= kAuthReqMitm;
  if (f.sc) v |= kAuthReqSc;
  return v;
}

Bytes encode_features(const FeatureExchange& body) {
  const PairingFeatures& f = body.features;
  return Bytes{static_cast<uint8_t>(f.io), static_cast<uint8_t>(f.oob ? 1 : 0),
               encode_authreq(f), kMaxKeySize, body.initiator_key_dist,
               body.responder_key_dist};
}

bool valid_opcode(uint8_t v) {
  switch (static_cast<Opcode>(v)) {
    case Opcode::kPairingRequest:
    case Opcode::kPairingResponse:
    case Opcode::kPairingConfirm:
    case Opcode::kPairingRandom:
    case Opcode::kPairingFailed:
    case Opcode::kIdentityInformation:
    case Opcode::kIdentityAddressInformation:
    case Opcode::kSecurityRequest:
    case Opcode::kPairingPublicKey:
    case Opcode::kPairingDhKeyCheck:
      return true;
  }
  return false;
}

template <size_t N>
Pdu make_fixed(Opcode op, const std::array<uint8_t, N>& value) {
  return Pdu{op, Bytes(value.begin(), value.end())};
}

}  // namespace

std::string_view to_string(Opcode opcode) {
  switch (opcode) {
    case Opcode::kPairingRequest:
      return "PairingRequest";
    case Opcode::kPairingResponse:
      return "PairingResponse";
    case Opcode::kPairingConfirm:
      return "PairingConfirm";
    case Opcode::kPairingRandom:
      return "PairingRandom";
    case Opcode::kPairingFailed:
      return "PairingFailed";
    case Opcode::kIdentityInformation:
      return "IdentityInformation";
    case Opcode::kIdentityAddressInformation:
      return "IdentityAddressInformation";
    case Opcode::kSecurityRequest:
      return "SecurityRequest";
    case Opcode::kPairingPublicKey:
      return "PairingPublicKey";
    case Opcode::kPairingDhKeyCheck:
      return "PairingDhKeyCheck";
  }
  return "?";
}

Bytes Pdu::encode() const {
  Bytes out;
  out.reserve(payload.size() + 1);
  out.push_back(static_cast<uint8_t>(opcode));
  append(out, payload);
  return out;
}

std::optional<Pdu> Pdu::decode(BytesView wire) {
  if (wire.empty() || !valid_opcode(wire[0])) return std::nullopt;
  return Pdu{static_cast<Opcode>(wire[0]), Bytes(wire.begin() + 1, wire.end())};
}

Pdu make_pairing_request(const FeatureExchange& body) {
  return Pdu{Opcode::kPairingRequest, encode_features(body)};
}

Pdu make_pairing_response(const FeatureExchange& body) {
  return Pdu{Opcode::kPairingResponse, encode_features(body)};
}

std::optional<FeatureExchange> parse_feature_exchange(const Pdu& pdu) {
  if (pdu.opcode != Opcode::kPairingRequest &&
      pdu.opcode != Opcode::kPairingResponse) {
    return std::nullopt;
  }
  if (pdu.payload.size() != kFeatureLength) return std::nullopt;
  auto io = static_cast<IoCapability>(pdu.payload[0]);
  if (std::find(kAllIoCapabilities.begin(), kAllIoCapabilities.end(), io) ==
      kAllIoCapabilities.end()) {
    return std::nullopt;
  }
  FeatureExchange out;
  out.features.io = io;
  out.features.oob = pdu.payload[1] != 0;
  const uint8_t authreq = pdu.payload[2];
  out.features.bonding = (authreq & kAuthReqBonding) != 0;
  out.features.mitm = (authreq & kAuthReqMitm) != 0;
  out.features.sc = (authreq & kAuthReqSc) != 0;
  out.initiator_key_dist = pdu.payload[4];
  out.responder_key_dist = pdu.payload[5];
  return out;
}

Pdu make_public_key(const crypto::PublicKey& key) {
  return make_fixed(Opcode::kPairingPublicKey, key.xy);
}

std::optional<crypto::PublicKey> parse_public_key(const Pdu& pdu) {
  crypto::PublicKey key;
  if (pdu.opcode != Opcode::kPairingPublicKey ||
      pdu.payload.size() != key.xy.size()) {
    return std::nullopt;
  }
  std::copy(pdu.payload.begin(), pdu.payload.end(), key.xy.begin());
  return key;
}

Pdu make_confirm(const Key128& value) {
  return make_fixed(Opcode::kPairingConfirm, value);
}

Pdu make_random(const crypto::Nonce& nonce) {
  return make_fixed(Opcode::kPairingRandom, nonce);
}

Pdu make_dhkey_check(const Key128& value) {
  return make_fixed(Opcode::kPairingDhKeyCheck, value);
}

std::optional<Key128> parse_key128(const Pdu& pdu) {
  Key128 out{};
  if (pdu.payload.size() != out.size()) return std::nullopt;
  std::copy(pdu.payload.begin(), pdu.payload.end(), out.begin());
  return out;
}

Pdu make_failed(SecurityError reason) {
  return Pdu{Opcode::kPairingFailed, Bytes{wire_value(reason)}};
}

SecurityError parse_failed(const Pdu& pdu) {
  if (pdu.payload.size() == 1) {
    if (auto e = security_error_from_wire(pdu.payload[0])) return *e;
  }
  return SecurityError::kPairingAuthFail;
}

Pdu make_identity_information(const crypto::Irk& irk) {
  return make_fixed(Opcode::kIdentityInformation, irk);
}

Pdu make_identity_address_information(const DeviceAddress& identity) {
  Pdu pdu{Opcode::kIdentityAddressInformation, Bytes{0x00}};
  append(pdu.payload, identity.octets());
  return pdu;
}

std::optional<DeviceAddress> parse_identity_address(const Pdu& pdu) {
  if (pdu.opcode != Opcode::kIdentityAddressInformation ||
      pdu.payload.size() != 7 || pdu.payload[0] != 0x00) {
    return std::nullopt;
  }
  uint64_t value = 0;
  for (size_t i = 1; i < 7; ++i) value = (value << 8) | pdu.payload[i];
  return DeviceAddress::public_identity(value);
}

Pdu make_security_request(const PairingFeatures& features) {
  return Pdu{Opcode::kSecurityRequest, Bytes{encode_authreq(features)}};
}

std::optional<PairingFeatures> parse_security_request(const Pdu& pdu) {
  if (pdu.opcode != Opcode::kSecurityRequest || pdu.payload.size() != 1) {
    return std::nullopt;
  }
  const uint8_t authreq = pdu.payload[0];
  PairingFeatures f;
  f.bonding = (authreq & kAuthReqBonding) != 0;
  f.mitm = (authreq & kAuthReqMitm) != 0;
  f.sc = (authreq & kAuthReqSc) != 0;
  return f;
}

std::string describe(const Pdu& pdu) {
  std::string out(to_string(pdu.opcode));
  switch (pdu.opcode) {
    case Opcode::kPairingRequest:
    case Opcode::kPairingResponse:
      if (auto body = parse_feature_exchange(pdu)) {
        const PairingFeatures& f = body->features;
        out += " io=";
        out += to_string(f.io);
        out += f.mitm ? " mitm=1" : " mitm=0";
        out += f.sc ? " sc=1" : " sc=0";
        out += f.oob ? " oob=1" : " oob=0";
        out += " idist=" + std::to_string(body->initiator_key_dist);
        out += " rdist=" + std::to_string(body->responder_key_dist);
      }
      break;
    case Opcode::kPairingFailed:
      out += " reason=";
      out += to_string(parse_failed(pdu));
      break;
    case Opcode::kIdentityAddressInformation:
      if (auto addr = parse_identity_address(pdu)) {
        out += " addr=" + addr->to_string();
      }
      break;
    default:
      out += " " + to_hex(pdu.payload);
      break;
  }
  return out;
}

}  // namespace scosim::smp
