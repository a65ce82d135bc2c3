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
 *  Core value types shared by every layer of the simulator: addresses, I/O
 *  capabilities, pairing features and methods, security error codes, key
 *  sets and bonds.
 *
 ******************************************************************************/

#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

#include "scosim/bytes.hpp"

namespace scosim {

enum class AddressKind : uint8_t {
  kPublicIdentity,
  kResolvablePrivate,
};

// 48-bit device address. Resolvable private addresses always carry 0b01 in
// their two most significant bits.
class DeviceAddress {
 public:
  static constexpr uint64_t kMask = 0xFFFF'FFFF'FFFFull;

  DeviceAddress() = default;

  static DeviceAddress public_identity(uint64_t value) {
    return DeviceAddress(AddressKind::kPublicIdentity, value & kMask);
  }

  // Throws std::invalid_argument when the 0b01 marker is missing.
  static DeviceAddress resolvable_private(uint64_t value);

  // "AA:BB:CC:DD:EE:FF", optionally followed by "/rpa".
  static std::optional<DeviceAddress> parse(std::string_view text);

  AddressKind kind() const { return kind_; }
  uint64_t value() const { return value_; }
  bool is_rpa() const { return kind_ == AddressKind::kResolvablePrivate; }

  // Most significant byte first.
  std::array<uint8_t, 6> octets() const;

  std::string to_string() const;

  auto operator<=>(const DeviceAddress&) const = default;

 private:
  DeviceAddress(AddressKind kind, uint64_t value)
      : kind_(kind), value_(value) {}

  AddressKind kind_ = AddressKind::kPublicIdentity;
  uint64_t value_ = 0;
};

enum class IoCapability : uint8_t {
  kDisplayOnly = 0x00,
  kDisplayYesNo = 0x01,
  kKeyboardOnly = 0x02,
  kNoInputNoOutput = 0x03,
  kKeyboardDisplay = 0x04,
};

inline constexpr std::array<IoCapability, 5> kAllIoCapabilities = {
    IoCapability::kNoInputNoOutput, IoCapability::kDisplayOnly,
    IoCapability::kDisplayYesNo, IoCapability::kKeyboardOnly,
    IoCapability::kKeyboardDisplay};

std::string_view to_string(IoCapability io);
std::optional<IoCapability> parse_io_capability(std::string_view text);

bool can_display(IoCapability io);
bool can_input(IoCapability io);
bool can_confirm(IoCapability io);

struct PairingFeatures {
  IoCapability io = IoCapability::kNoInputNoOutput;
  bool mitm = false;
  bool sc = true;
  bool bonding = true;
  bool oob = false;

  bool operator==(const PairingFeatures&) const = default;
};

enum class PairingMethod : uint8_t {
  kJustWorks,
  kPasskeyEntry,
  kNumericComparison,
  kOutOfBand,
};

inline constexpr std::array<PairingMethod, 4> kAllPairingMethods = {
    PairingMethod::kJustWorks, PairingMethod::kPasskeyEntry,
    PairingMethod::kNumericComparison, PairingMethod::kOutOfBand};

std::string_view to_string(PairingMethod method);
std::optional<PairingMethod> parse_pairing_method(std::string_view text);

// Only Just Works yields unauthenticated keys.
constexpr bool is_authenticated(PairingMethod method) {
  return method != PairingMethod::kJustWorks;
}

// Ranking used when several apps specify different methods for one device:
// Numeric Comparison > Passkey Entry = Out Of Band > Just Works.
int strength(PairingMethod method);

enum class SecurityError : uint8_t {
  kAuthenticationRequirements = 0x03,
  kPairingAuthFail = 0x04,
  kInsufficientAuthentication = 0x05,
  kPinOrKeyMissing = 0x06,
};

std::string_view to_string(SecurityError error);
std::optional<SecurityError> parse_security_error(std::string_view text);

constexpr uint8_t wire_value(SecurityError error) {
  return static_cast<uint8_t>(error);
}
std::optional<SecurityError> security_error_from_wire(uint8_t octet);

// Either a value or a SecurityError.
template <typename T>
class Result {
 public:
  Result(T value) : state_(std::move(value)) {}
  Result(SecurityError error) : state_(error) {}

  bool ok() const { return std::holds_alternative<T>(state_); }
  explicit operator bool() const { return ok(); }

  const T& value() const { return std::get<T>(state_); }
  T& value() { return std::get<T>(state_); }
  const T& operator*() const { return value(); }
  const T* operator->() const { return &value(); }

  SecurityError error() const { return std::get<SecurityError>(state_); }

  bool operator==(const Result&) const = default;

 private:
  std::variant<T, SecurityError> state_;
};

struct KeySet {
  Key256 dh_key{};
  Key128 mac_key{};
  Key128 ltk{};
  bool authenticated = false;

  bool operator==(const KeySet&) const = default;
};

using AppId = std::string;

struct Bond {
  DeviceAddress peer_identity;
  Key128 ltk{};
  bool authenticated = false;
  std::optional<Key128> peer_irk;
  std::set<AppId> owner_apps;
  uint32_t refcount = 0;
};

// Phase-1 method selection. Both feature sets must have the SC bit set.
// Returns AuthenticationRequirements when a MITM flag is set but the I/O
// capabilities only allow Just Works, or when either side lacks SC.
Result<PairingMethod> method_for(const PairingFeatures& initiator,
                                 const PairingFeatures& responder);

// Which side types the passkey during Passkey Entry. Only meaningful when
// method_for returned kPasskeyEntry.
enum class PasskeyRole : uint8_t { kDisplays, kInputs };
PasskeyRole passkey_role(IoCapability self, IoCapability peer);

}  // namespace scosim
