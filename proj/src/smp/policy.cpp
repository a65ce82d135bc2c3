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

#include "scosim/smp/policy.hpp"

namespace scosim::smp {

std::string_view to_string(ScOnlyEnforcement enforcement) {
  switch (enforcement) {
    case ScOnlyEnforcement::kCorrect:
      return "Correct";
    case ScOnlyEnforcement::kTiFlawedScBitOnly:
      return "TiFlawedScBitOnly";
  }
  return "?";
}

std::optional<ScOnlyEnforcement> parse_sc_only_enforcement(
    std::string_view text) {
  if (text == "Correct") return ScOnlyEnforcement::kCorrect;
  if (text == "TiFlawedScBitOnly") return ScOnlyEnforcement::kTiFlawedScBitOnly;
  return std::nullopt;
}

std::optional<SecurityError> sc_only_gate(
    const ScOnlyPolicy& policy, const PairingFeatures& initiator,
    const Result<PairingMethod>& negotiated) {
  if (!policy.enabled) return std::nullopt;
  if (!initiator.sc) return SecurityError::kAuthenticationRequirements;
  if (policy.enforcement == ScOnlyEnforcement::kTiFlawedScBitOnly) {
    return std::nullopt;
  }
  if (!negotiated.ok() || !is_authenticated(*negotiated)) {
    return SecurityError::kAuthenticationRequirements;
  }
  return std::nullopt;
}

}  // namespace scosim::smp
