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
 *  Device profiles for scripted peripherals. A profile is a JSON object:
 *
 *    { "name": "Keyboard", "identity": "C0:4B:00:00:00:03",
 *      "io": "KeyboardDisplay", "mitm": false, "bonding": true,
 *      "oob": false, "sc_only": "off" | "Correct" | "TiFlawedScBitOnly",
 *      "slot_limit": 1, "whitelist": true, "adv_frequency_hz": 27,
 *      "ltk_property_caching": false, "behavior": "Keyboard",
 *      "password": "...", "services": [ ...attribute table... ] }
 *
 *  The attribute table uses the att profile format.
 *
 ******************************************************************************/

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "scosim/att/server.hpp"
#include "scosim/link/resolver.hpp"
#include "scosim/model.hpp"
#include "scosim/smp/policy.hpp"

namespace scosim::peripherals {

enum class Behavior : uint8_t {
  kGeneric,
  kBpMonitor,
  kSmartLight,
  kKeyboard,
};

std::string_view to_string(Behavior behavior);
std::optional<Behavior> parse_behavior(std::string_view text);

// Characteristics the behaviors act on.
inline const att::Uuid kDeviceNameUuid = att::Uuid::from16(0x2A00);
inline const att::Uuid kBpMeasurementUuid = att::Uuid::from16(0x2A35);
inline const att::Uuid kLightPasswordUuid = att::Uuid::from16(0xFF11);
inline const att::Uuid kLightCommandUuid = att::Uuid::from16(0xFF12);
inline const att::Uuid kLightStateUuid = att::Uuid::from16(0xFF13);
inline const att::Uuid kKeystrokeUuid = att::Uuid::from16(0x2A4D);

struct DeviceProfile {
  std::string name;
  DeviceAddress identity;
  PairingFeatures features;
  smp::ScOnlyPolicy sc_only;
  size_t slot_limit = 1;
  // When enabled, bonded masters are added automatically; an empty list
  // accepts everyone.
  bool whitelist = false;
  std::vector<link::KnownIdentity> whitelist_entries;
  double adv_frequency_hz = 27.0;
  bool ltk_property_caching = false;
  Behavior behavior = Behavior::kGeneric;
  std::string password;
  std::vector<att::ServiceSpec> services;
};

// Throws att::ProfileError on malformed input.
DeviceProfile device_profile_from_json(const nlohmann::json& j);
DeviceProfile parse_device_profile(std::string_view text);
DeviceProfile load_device_profile(const std::filesystem::path& path);
nlohmann::json to_json(const DeviceProfile& profile);

// $SCOSIM_DATA_DIR if set, else the data directory of the source tree.
std::filesystem::path data_dir();

// Bundled fixtures under <data_dir>/profiles.
std::vector<std::string> fixture_names();
DeviceProfile fixture(std::string_view name);

// The permission of the first characteristic with this uuid, if any.
std::optional<att::Permission> permission_of(const DeviceProfile& profile,
                                             const att::Uuid& uuid);

}  // namespace scosim::peripherals
