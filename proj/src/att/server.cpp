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

#include "scosim/att/server.hpp"

#include <algorithm>
#include <stdexcept>

namespace scosim::att {

namespace {

constexpr uint16_t kNotificationsEnabled = 0x0001;

}  // namespace

AttributeServer::AttributeServer(const std::vector<ServiceSpec>& services) {
  for (const auto& s : services) add_service(s);
}

uint16_t AttributeServer::add(const Uuid& uuid, Permission permission,
                              Bytes value) {
  if (attributes_.size() >= 0xFFFE) {
    throw std::length_error("attribute handle space exhausted");
  }
  const auto handle = static_cast<uint16_t>(attributes_.size() + 1);
  attributes_.push_back(Attribute{handle, uuid, std::move(value), permission});
  return handle;
}

uint16_t AttributeServer::add_service(const ServiceSpec& spec) {
  const Uuid& type = spec.kind == ServiceKind::kPrimary ? kPrimaryServiceUuid
                                                        : kSecondaryServiceUuid;
  const uint16_t decl =
      add(type, Permission::kOpen,
          Bytes(spec.uuid.bytes.begin(), spec.uuid.bytes.end()));
  declarations_.insert(decl);
  for (const auto& c : spec.characteristics) {
    const uint16_t value_handle = add(c.uuid, c.permission, c.value);
    if (c.notify) {
      const uint16_t cccd = add(kCccdUuid, c.permission, Bytes{0x00, 0x00});
      cccd_by_value_[value_handle] = cccd;
      value_by_cccd_[cccd] = value_handle;
    }
  }
  services_.push_back(
      Service{spec.kind, spec.uuid, decl,
              static_cast<uint16_t>(attributes_.size())});
  specs_.push_back(spec);
  return decl;
}

const Attribute* AttributeServer::find(uint16_t handle) const {
  if (handle == 0 || handle > attributes_.size()) return nullptr;
  return &attributes_[handle - 1];
}

Attribute* AttributeServer::find_mutable(uint16_t handle) {
  if (handle == 0 || handle > attributes_.size()) return nullptr;
  return &attributes_[handle - 1];
}

std::optional<uint16_t> AttributeServer::find_by_uuid(const Uuid& uuid) const {
  for (const auto& a : attributes_) {
    if (a.uuid == uuid && !declarations_.contains(a.handle) &&
        !value_by_cccd_.contains(a.handle)) {
      return a.handle;
    }
  }
  return std::nullopt;
}

std::optional<uint16_t> AttributeServer::cccd_for(uint16_t value_handle) const {
  auto it = cccd_by_value_.find(value_handle);
  if (it == cccd_by_value_.end()) return std::nullopt;
  return it->second;
}

ReadResult AttributeServer::read(uint16_t handle,
                                 const LinkSecurityState& link) const {
  const Attribute* a = find(handle);
  if (!a) return ErrorCode::kInvalidHandle;
  if (check_permission(*a, link)) return ErrorCode::kInsufficientAuthentication;
  return a->value;
}

std::optional<ErrorCode> AttributeServer::write(uint16_t handle,
                                                BytesView value,
                                                const LinkSecurityState& link) {
  Attribute* a = find_mutable(handle);
  if (!a) return ErrorCode::kInvalidHandle;
  if (check_permission(*a, link)) return ErrorCode::kInsufficientAuthentication;
  a->value.assign(value.begin(), value.end());
  return std::nullopt;
}

std::optional<Pdu> AttributeServer::handle_request(
    const Pdu& request, const LinkSecurityState& link) {
  auto error = [&](uint16_t handle, ErrorCode code) {
    return make_error_response(ErrorResponse{request.opcode, handle, code});
  };
  switch (request.opcode) {
    case Opcode::kFindInformationRequest: {
      auto range = parse_find_information_request(request);
      if (!range || range->first == 0 || range->first > range->second) {
        return error(0, ErrorCode::kInvalidHandle);
      }
      std::vector<HandleUuid> entries;
      for (const auto& a : attributes_) {
        if (a.handle >= range->first && a.handle <= range->second) {
          entries.push_back({a.handle, a.uuid});
        }
      }
      if (entries.empty()) {
        return error(range->first, ErrorCode::kAttributeNotFound);
      }
      return make_find_information_response(entries);
    }
    case Opcode::kReadRequest: {
      auto handle = parse_read_request(request);
      if (!handle) return error(0, ErrorCode::kInvalidPdu);
      auto result = read(*handle, link);
      if (auto* code = std::get_if<ErrorCode>(&result)) {
        return error(*handle, *code);
      }
      return make_read_response(std::get<Bytes>(result));
    }
    case Opcode::kWriteRequest: {
      auto hv = parse_handle_value(request);
      if (!hv) return error(0, ErrorCode::kInvalidPdu);
      if (auto code = write(hv->handle, hv->value, link)) {
        return error(hv->handle, *code);
      }
      return make_write_response();
    }
    case Opcode::kHandleValueNotification:
      return std::nullopt;
    default:
      return error(0, ErrorCode::kRequestNotSupported);
  }
}

bool AttributeServer::subscribed(uint16_t handle) const {
  auto cccd = cccd_for(handle);
  if (!cccd) return false;
  const Bytes& v = attributes_[*cccd - 1].value;
  return v.size() >= 2 &&
         ((v[0] | v[1] << 8) & kNotificationsEnabled) != 0;
}

void AttributeServer::reset_subscriptions() {
  for (const auto& [value, cccd] : cccd_by_value_) {
    attributes_[cccd - 1].value = Bytes{0x00, 0x00};
  }
}

std::optional<Pdu> AttributeServer::notify(uint16_t handle, BytesView value) {
  set_value(handle, value);
  if (!subscribed(handle)) return std::nullopt;
  return make_notification(handle, value);
}

void AttributeServer::set_value(uint16_t handle, BytesView value) {
  if (Attribute* a = find_mutable(handle)) {
    a->value.assign(value.begin(), value.end());
  }
}

}  // namespace scosim::att
