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
 *  Attribute server. Handles are assigned sequentially from 0x0001 as
 *  services are added: a service declaration, then each characteristic
 *  value, each followed by a client configuration descriptor when the
 *  characteristic notifies. The descriptor inherits the characteristic's
 *  permission, so subscribing is gated exactly like reading.
 *
 ******************************************************************************/

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <variant>
#include <vector>

#include "scosim/att/attribute.hpp"
#include "scosim/att/pdu.hpp"

namespace scosim::att {

struct CharacteristicSpec {
  Uuid uuid;
  Permission permission = Permission::kOpen;
  Bytes value;
  bool notify = false;
};

struct ServiceSpec {
  ServiceKind kind = ServiceKind::kPrimary;
  Uuid uuid;
  std::vector<CharacteristicSpec> characteristics;
};

using ReadResult = std::variant<Bytes, ErrorCode>;

class AttributeServer {
 public:
  AttributeServer() = default;
  explicit AttributeServer(const std::vector<ServiceSpec>& services);

  // Returns the service's declaration handle.
  uint16_t add_service(const ServiceSpec& spec);

  ReadResult read(uint16_t handle, const LinkSecurityState& link) const;
  std::optional<ErrorCode> write(uint16_t handle, BytesView value,
                                 const LinkSecurityState& link);

  // Handles one client request. Returns the response PDU; nullopt for
  // PDUs that take no response.
  std::optional<Pdu> handle_request(const Pdu& request,
                                    const LinkSecurityState& link);

  // Server-side value update that bypasses permissions. Returns the
  // notification to send if the client subscribed, nullopt otherwise.
  std::optional<Pdu> notify(uint16_t handle, BytesView value);

  // Local update without notifying.
  void set_value(uint16_t handle, BytesView value);

  bool subscribed(uint16_t handle) const;
  // Subscriptions do not survive a disconnect.
  void reset_subscriptions();

  const Attribute* find(uint16_t handle) const;
  // Value handle of the first characteristic with this UUID.
  std::optional<uint16_t> find_by_uuid(const Uuid& uuid) const;
  std::optional<uint16_t> cccd_for(uint16_t value_handle) const;

  const std::vector<Attribute>& attributes() const { return attributes_; }
  const std::vector<Service>& services() const { return services_; }
  const std::vector<ServiceSpec>& specs() const { return specs_; }

 private:
  uint16_t add(const Uuid& uuid, Permission permission, Bytes value);
  Attribute* find_mutable(uint16_t handle);

  std::vector<Attribute> attributes_;
  std::vector<Service> services_;
  std::vector<ServiceSpec> specs_;
  std::set<uint16_t> declarations_;
  std::map<uint16_t, uint16_t> cccd_by_value_;
  std::map<uint16_t, uint16_t> value_by_cccd_;
};

}  // namespace scosim::att
