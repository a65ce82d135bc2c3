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
#include <functional>
#include <optional>
#include <string_view>

namespace scosim::smp {

enum class UserBehavior : uint8_t {
  kHonestComparator,
  kHonestTypist,
  kAbsent,
  kAttackerControlled,
};

std::string_view to_string(UserBehavior behavior);

// The person operating one physical device during pairing.
//
// counterpart_display returns whatever the other physical device the user is
// looking at currently shows (a comparison value or a passkey), or nullopt
// when it shows nothing. type_on_device is the physical keyboard an honest
// typist uses when a passkey appears on this device; it may belong to a
// different device than the one doing the pairing.
struct UserAgent {
  UserBehavior behavior = UserBehavior::kAbsent;

  // Consent given to host prompts such as "re-pair with this device?".
  bool intends_to_pair = true;

  std::function<std::optional<uint32_t>()> counterpart_display;
  std::function<void(uint32_t)> type_on_device;

  // Attacker hooks. passkey_source may return nullopt while the attacker is
  // still waiting for a relayed passkey.
  std::function<std::optional<uint32_t>()> passkey_source;
  std::function<bool(uint32_t)> attacker_confirm;
};

// Decision for a Numeric Comparison prompt showing `shown`. nullopt means
// the user never answers.
std::optional<bool> comparison_decision(const UserAgent& agent,
                                        uint32_t shown);

// Passkey the user enters on this device when asked, if it can be decided
// right now.
std::optional<uint32_t> passkey_decision(const UserAgent& agent);

}  // namespace scosim::smp
