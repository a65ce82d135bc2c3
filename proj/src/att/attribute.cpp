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

#include "scosim/att/attribute.hpp"

#include <cctype>
#include <cstdio>

namespace scosim::att {

namespace {

// 0000xxxx-0000-1000-8000-00805F9B34FB
constexpr std::array<uint8_t, 16> kBaseUuid = {
    0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x10, 0x00,
    0x80, 0x00, 0x00, 0x80, 0x5F, 0x9B, 0x34, 0xFB};

}  // namespace

Uuid Uuid::from16(uint16_t short_uuid) {
  Uuid u;
  u.bytes = kBaseUuid;
  u.bytes[2] = static_cast<uint8_t>(short_uuid >> 8);
  u.bytes[3] = static_cast<uint8_t>(short_uuid);
  return u;
}

std::optional<Uuid> Uuid::parse(std::string_view text) {
  if (text.starts_with("0x") || text.starts_with("0X")) text.remove_prefix(2);
  if (text.size() == 4) {
    auto b = from_hex(text);
    if (!b) return std::nullopt;
    return from16(static_cast<uint16_t>((*b)[0] << 8 | (*b)[1]));
  }
  if (text.size() != 36) return std::nullopt;
  std::string digits;
  for (size_t i = 0; i < text.size(); ++i) {
    const bool dash_slot = i == 8 || i == 13 || i == 18 || i == 23;
    if (dash_slot != (text[i] == '-')) return std::nullopt;
    if (!dash_slot) {
      if (!std::isxdigit(static_cast<unsigned char>(text[i]))) {
        return std::nullopt;
      }
      digits.push_back(text[i]);
    }
  }
  auto b = array_from_hex<16>(digits);
  if (!b) return std::nullopt;
  return Uuid{*b};
}

std::string Uuid::to_string() const {
  const bool on_base = bytes[0] == 0 && bytes[1] == 0 &&
                       std::equal(bytes.begin() + 4, bytes.end(),
                                  kBaseUuid.begin() + 4);
  char buf[40];
  if (on_base) {
    std::snprintf(buf, sizeof(buf), "%02X%02X", bytes[2], bytes[3]);
    return buf;
  }
  std::string out;
  for (size_t i = 0; i < bytes.size(); ++i) {
    if (i == 4 || i == 6 || i == 8 || i == 10) out.push_back('-');
    std::snprintf(buf, sizeof(buf), "%02X", bytes[i]);
    out += buf;
  }
  return out;
}

std::string_view to_string(Permission permission) {
  switch (permission) {
    case Permission::kOpen:
      return "Open";
    case Permission::kEncryptedReadWrite:
      return "EncryptedReadWrite";
    case Permission::kAuthenticatedReadWrite:
      return "AuthenticatedReadWrite";
    case Permission::kAuthorizedReadWrite:
      return "AuthorizedReadWrite";
  }
  return "?";
}

std::optional<Permission> parse_permission(std::string_view text) {
  for (Permission p : kAllPermissions) {
    if (to_string(p) == text) return p;
  }
  return std::nullopt;
}

std::optional<SecurityError> check_permission(Permission permission,
                                              const LinkSecurityState& link) {
  bool allowed = false;
  switch (permission) {
    case Permission::kOpen:
      allowed = true;
      break;
    case Permission::kEncryptedReadWrite:
      allowed = link.is_encrypted();
      break;
    case Permission::kAuthenticatedReadWrite:
      allowed = link.key_authenticated();
      break;
    case Permission::kAuthorizedReadWrite:
      allowed = false;
      break;
  }
  if (allowed) return std::nullopt;
  return SecurityError::kInsufficientAuthentication;
}

}  // namespace scosim::att
