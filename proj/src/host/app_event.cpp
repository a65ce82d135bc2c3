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

#include "scosim/host/app_event.hpp"

#include <cstdio>

namespace scosim::host {

std::string_view to_string(BondState state) {
  switch (state) {
    case BondState::kNone:
      return "None";
    case BondState::kBonding:
      return "Bonding";
    case BondState::kBonded:
      return "Bonded";
  }
  return "?";
}

std::string_view to_string(PairingVariant variant) {
  return variant == PairingVariant::kPasskeyConfirmation
             ? "PasskeyConfirmation"
             : "Pin";
}

std::string_view to_string(AppEvent::Kind kind) {
  using Kind = AppEvent::Kind;
  switch (kind) {
    case Kind::kConnected:
      return "Connected";
    case Kind::kDisconnected:
      return "Disconnected";
    case Kind::kBondStateChanged:
      return "BondStateChanged";
    case Kind::kPairingVariantObserved:
      return "PairingVariantObserved";
    case Kind::kMethodNegotiated:
      return "MethodNegotiated";
    case Kind::kError:
      return "Error";
    case Kind::kUserPromptRequired:
      return "UserPromptRequired";
    case Kind::kGattResult:
      return "GattResult";
    case Kind::kNotification:
      return "Notification";
  }
  return "?";
}

std::string AppEvent::describe() const {
  using Kind = AppEvent::Kind;
  std::string out(to_string(kind));
  out += " peer=" + peer.to_string();
  switch (kind) {
    case Kind::kBondStateChanged:
      out += " state=" + std::string(to_string(bond_state));
      break;
    case Kind::kPairingVariantObserved:
      out += " variant=" + std::string(to_string(variant));
      break;
    case Kind::kMethodNegotiated:
      if (method) out += " method=" + std::string(to_string(*method));
      break;
    case Kind::kError: {
      char buf[8];
      std::snprintf(buf, sizeof(buf), "0x%02X", code);
      out += std::string(" code=") + buf + " reason=" + reason;
      break;
    }
    case Kind::kUserPromptRequired:
      out += " reason=" + reason;
      break;
    case Kind::kGattResult:
      out += " uuid=" + uuid.to_string() + " status=" +
             (status ? std::string(att::to_string(*status)) : "Success");
      if (!value.empty()) out += " value=" + to_hex(value);
      break;
    case Kind::kNotification:
      out += " uuid=" + uuid.to_string() + " value=" + to_hex(value);
      break;
    case Kind::kConnected:
    case Kind::kDisconnected:
      if (!reason.empty()) out += " reason=" + reason;
      break;
  }
  return out;
}

}  // namespace scosim::host
