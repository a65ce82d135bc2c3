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

#include "scosim/model.hpp"

#include <cctype>
#include <cstdio>

namespace scosim {

namespace {

constexpr uint64_t kRpaMarkerMask = 0xC000'0000'0000ull;
constexpr uint64_t kRpaMarker = 0x4000'0000'0000ull;

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::string to_hex(BytesView data) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(data.size() * 2);
  for (uint8_t b : data) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0F]);
  }
  return out;
}

std::optional<Bytes> from_hex(std::string_view text) {
  Bytes out;
  int high = -1;
  for (char c : text) {
    if (c == ':' || std::isspace(static_cast<unsigned char>(c))) continue;
    int v = hex_digit(c);
    if (v < 0) return std::nullopt;
    if (high < 0) {
      high = v;
    } else {
      out.push_back(static_cast<uint8_t>((high << 4) | v));
      high = -1;
    }
  }
  if (high >= 0) return std::nullopt;
  return out;
}

DeviceAddress DeviceAddress::resolvable_private(uint64_t value) {
  value &= kMask;
  if ((value & kRpaMarkerMask) != kRpaMarker) {
    throw std::invalid_argument("resolvable private address needs 0b01 MSBs");
  }
  return DeviceAddress(AddressKind::kResolvablePrivate, value);
}

std::optional<DeviceAddress> DeviceAddress::parse(std::string_view text) {
  bool rpa = false;
  if (text.ends_with("/rpa")) {
    rpa = true;
    text.remove_suffix(4);
  }
  if (text.size() != 17) return std::nullopt;
  uint64_t value = 0;
  for (size_t i = 0; i < text.size(); ++i) {
    if (i % 3 == 2) {
      if (text[i] != ':') return std::nullopt;
      continue;
    }
    int v = hex_digit(text[i]);
    if (v < 0) return std::nullopt;
    value = (value << 4) | static_cast<uint64_t>(v);
  }
  if (!rpa) return public_identity(value);
  if ((value & kRpaMarkerMask) != kRpaMarker) return std::nullopt;
  return resolvable_private(value);
}

std::array<uint8_t, 6> DeviceAddress::octets() const {
  std::array<uint8_t, 6> out{};
  for (int i = 0; i < 6; ++i) {
    out[i] = static_cast<uint8_t>(value_ >> (8 * (5 - i)));
  }
  return out;
}

std::string DeviceAddress::to_string() const {
  auto o = octets();
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%02X:%02X:%02X:%02X:%02X:%02X", o[0], o[1],
                o[2], o[3], o[4], o[5]);
  std::string out(buf);
  if (is_rpa()) out += "/rpa";
  return out;
}

std::string_view to_string(IoCapability io) {
  switch (io) {
    case IoCapability::kDisplayOnly:
      return "DisplayOnly";
    case IoCapability::kDisplayYesNo:
      return "DisplayYesNo";
    case IoCapability::kKeyboardOnly:
      return "KeyboardOnly";
    case IoCapability::kNoInputNoOutput:
      return "NoInputNoOutput";
    case IoCapability::kKeyboardDisplay:
      return "KeyboardDisplay";
  }
  return "?";
}

std::optional<IoCapability> parse_io_capability(std::string_view text) {
  for (IoCapability io : kAllIoCapabilities) {
    if (to_string(io) == text) return io;
  }
  return std::nullopt;
}

bool can_display(IoCapability io) {
  return io == IoCapability::kDisplayOnly ||
         io == IoCapability::kDisplayYesNo ||
         io == IoCapability::kKeyboardDisplay;
}

bool can_input(IoCapability io) {
  return io == IoCapability::kKeyboardOnly ||
         io == IoCapability::kKeyboardDisplay;
}

bool can_confirm(IoCapability io) {
  return io == IoCapability::kDisplayYesNo ||
         io == IoCapability::kKeyboardDisplay;
}

std::string_view to_string(PairingMethod method) {
  switch (method) {
    case PairingMethod::kJustWorks:
      return "JustWorks";
    case PairingMethod::kPasskeyEntry:
      return "PasskeyEntry";
    case PairingMethod::kNumericComparison:
      return "NumericComparison";
    case PairingMethod::kOutOfBand:
      return "OutOfBand";
  }
  return "?";
}

std::optional<PairingMethod> parse_pairing_method(std::string_view text) {
  for (PairingMethod m : kAllPairingMethods) {
    if (to_string(m) == text) return m;
  }
  return std::nullopt;
}

int strength(PairingMethod method) {
  switch (method) {
    case PairingMethod::kJustWorks:
      return 0;
    case PairingMethod::kPasskeyEntry:
    case PairingMethod::kOutOfBand:
      return 1;
    case PairingMethod::kNumericComparison:
      return 2;
  }
  return 0;
}

std::string_view to_string(SecurityError error) {
  switch (error) {
    case SecurityError::kAuthenticationRequirements:
      return "AuthenticationRequirements";
    case SecurityError::kPairingAuthFail:
      return "PairingAuthFail";
    case SecurityError::kInsufficientAuthentication:
      return "InsufficientAuthentication";
    case SecurityError::kPinOrKeyMissing:
      return "PinOrKeyMissing";
  }
  return "?";
}

std::optional<SecurityError> parse_security_error(std::string_view text) {
  for (auto e : {SecurityError::kAuthenticationRequirements,
                 SecurityError::kPairingAuthFail,
                 SecurityError::kInsufficientAuthentication,
                 SecurityError::kPinOrKeyMissing}) {
    if (to_string(e) == text) return e;
  }
  return std::nullopt;
}

std::optional<SecurityError> security_error_from_wire(uint8_t octet) {
  switch (octet) {
    case 0x03:
      return SecurityError::kAuthenticationRequirements;
    case 0x04:
      return SecurityError::kPairingAuthFail;
    case 0x05:
      return SecurityError::kInsufficientAuthentication;
    case 0x06:
      return SecurityError::kPinOrKeyMissing;
    default:
      return std::nullopt;
  }
}

Result<PairingMethod> method_for(const PairingFeatures& initiator,
                                 const PairingFeatures& responder) {
  if (!initiator.sc || !responder.sc) {
    return SecurityError::kAuthenticationRequirements;
  }
  if (initiator.oob && responder.oob) return PairingMethod::kOutOfBand;
  if (!initiator.mitm && !responder.mitm) return PairingMethod::kJustWorks;

  const IoCapability a = initiator.io;
  const IoCapability b = responder.io;
  if (can_confirm(a) && can_confirm(b)) {
    return PairingMethod::kNumericComparison;
  }
  if ((can_input(a) && can_display(b)) || (can_input(b) && can_display(a))) {
    return PairingMethod::kPasskeyEntry;
  }
  // MITM protection was requested but only Just Works is feasible.
  return SecurityError::kAuthenticationRequirements;
}

PasskeyRole passkey_role(IoCapability self, IoCapability peer) {
  if (!can_input(self)) return PasskeyRole::kDisplays;
  if (!can_input(peer)) return PasskeyRole::kInputs;
  return can_display(self) ? PasskeyRole::kDisplays : PasskeyRole::kInputs;
}

}  // namespace scosim
