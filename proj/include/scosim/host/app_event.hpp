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

#include "scosim/att/attribute.hpp"
#include "scosim/att/pdu.hpp"
#include "scosim/bytes.hpp"
#include "scosim/link/scheduler.hpp"
#include "scosim/model.hpp"

namespace scosim::host {

enum class BondState : uint8_t { kNone, kBonding, kBonded };
enum class PairingVariant : uint8_t { kPasskeyConfirmation, kPin };

std::string_view to_string(BondState state);
std::string_view to_string(PairingVariant variant);

// What an app hears from the host, in delivery order.
struct AppEvent {
  enum class Kind : uint8_t {
    kConnected,
    kDisconnected,
    kBondStateChanged,
    kPairingVariantObserved,
    // Only the patched host reports the method right after feature
    // exchange.
    kMethodNegotiated,
    kError,
    kUserPromptRequired,
    kGattResult,
    kNotification,
  };

  Kind kind = Kind::kError;
  link::Time time = 0;
  DeviceAddress peer;
  BondState bond_state = BondState::kNone;
  PairingVariant variant = PairingVariant::kPin;
  std::optional<PairingMethod> method;
  // Error: HCI-style reason text plus a code where one exists.
  uint8_t code = 0;
  std::string reason;
  // GATT results and notifications.
  att::Uuid uuid;
  std::optional<att::ErrorCode> status;
  Bytes value;

  std::string describe() const;
};

std::string_view to_string(AppEvent::Kind kind);

}  // namespace scosim::host
