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

#include "scosim/smp/user_agent.hpp"

namespace scosim::smp {

std::string_view to_string(UserBehavior behavior) {
  switch (behavior) {
    case UserBehavior::kHonestComparator:
      return "HonestComparator";
    case UserBehavior::kHonestTypist:
      return "HonestTypist";
    case UserBehavior::kAbsent:
      return "Absent";
    case UserBehavior::kAttackerControlled:
      return "AttackerControlled";
  }
  return "?";
}

std::optional<bool> comparison_decision(const UserAgent& agent,
                                        uint32_t shown) {
  switch (agent.behavior) {
    case UserBehavior::kAbsent:
      return std::nullopt;
    case UserBehavior::kAttackerControlled:
      return agent.attacker_confirm ? agent.attacker_confirm(shown) : true;
    case UserBehavior::kHonestComparator:
    case UserBehavior::kHonestTypist: {
      // A blank counterpart screen is a mismatch.
      if (!agent.counterpart_display) return false;
      auto other = agent.counterpart_display();
      return other.has_value() && *other == shown;
    }
  }
  return std::nullopt;
}

std::optional<uint32_t> passkey_decision(const UserAgent& agent) {
  switch (agent.behavior) {
    case UserBehavior::kAbsent:
      return std::nullopt;
    case UserBehavior::kAttackerControlled:
      return agent.passkey_source ? agent.passkey_source() : std::nullopt;
    case UserBehavior::kHonestComparator:
    case UserBehavior::kHonestTypist:
      if (agent.passkey_source) return agent.passkey_source();
      if (agent.counterpart_display) return agent.counterpart_display();
      return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace scosim::smp
