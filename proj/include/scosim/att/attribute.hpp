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
 *  Attribute data model: UUIDs, permission levels, attributes, services and
 *  the link security state used to gate access.
 *
 ******************************************************************************/

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "scosim/bytes.hpp"
#include "scosim/model.hpp"

namespace scosim::att {

// 128-bit UUID, most significant byte first.
struct Uuid {
  std::array<uint8_t, 16> bytes{};

  // Expands a 16-bit assigned number onto the Bluetooth base UUID.
  static Uuid from16(uint16_t short_uuid);
  // "180D", "0x180D" or the dashed 36-character form.
  static std::optional<Uuid> parse(std::string_view text);

  // 16-bit form when the UUID sits on the base UUID, dashed form otherwise.
  std::string to_string() const;

  auto operator<=>(const Uuid&) const = default;
};

inline const Uuid kPrimaryServiceUuid = Uuid::from16(0x2800);
inline const Uuid kSecondaryServiceUuid = Uuid::from16(0x2801);
inline const Uuid kCccdUuid = Uuid::from16(0x2902);

enum class Permission : uint8_t {
  kOpen,
  kEncryptedReadWrite,
  kAuthenticatedReadWrite,
  // No authorization callback exists, so access is always denied.
  kAuthorizedReadWrite,
};

inline constexpr std::array<Permission, 4> kAllPermissions = {
    Permission::kOpen, Permission::kEncryptedReadWrite,
    Permission::kAuthenticatedReadWrite, Permission::kAuthorizedReadWrite};

std::string_view to_string(Permission permission);
std::optional<Permission> parse_permission(std::string_view text);

class LinkSecurityState {
 public:
  constexpr LinkSecurityState() = default;

  static constexpr LinkSecurityState plaintext() { return {}; }
  static constexpr LinkSecurityState encrypted(bool key_authenticated) {
    LinkSecurityState s;
    s.encrypted_ = true;
    s.key_authenticated_ = key_authenticated;
    return s;
  }

  constexpr bool is_encrypted() const { return encrypted_; }
  constexpr bool key_authenticated() const { return key_authenticated_; }

  bool operator==(const LinkSecurityState&) const = default;

 private:
  bool encrypted_ = false;
  bool key_authenticated_ = false;
};

struct Attribute {
  uint16_t handle = 0;
  Uuid uuid;
  Bytes value;
  Permission permission = Permission::kOpen;
};

enum class ServiceKind : uint8_t { kPrimary, kSecondary };

struct Service {
  ServiceKind kind = ServiceKind::kPrimary;
  Uuid uuid;
  uint16_t first_handle = 0;
  uint16_t last_handle = 0;

  bool contains(uint16_t handle) const {
    return handle >= first_handle && handle <= last_handle;
  }
};

// Returns InsufficientAuthentication when the link does not meet the
// attribute's permission.
std::optional<SecurityError> check_permission(Permission permission,
                                              const LinkSecurityState& link);

inline std::optional<SecurityError> check_permission(
    const Attribute& attribute, const LinkSecurityState& link) {
  return check_permission(attribute.permission, link);
}

}  // namespace scosim::att
