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
#include <string_view>

#include "scosim/model.hpp"

namespace scosim::smp {

enum class ScOnlyEnforcement : uint8_t {
  // Rejects any pairing whose negotiated method is not authenticated.
  kCorrect,
  // Only looks at the SC bit of the incoming request.
  kTiFlawedScBitOnly,
};

std::string_view to_string(ScOnlyEnforcement enforcement);
std::optional<ScOnlyEnforcement> parse_sc_only_enforcement(
    std::string_view text);

struct ScOnlyPolicy {
  bool enabled = false;
  ScOnlyEnforcement enforcement = ScOnlyEnforcement::kCorrect;

  bool operator==(const ScOnlyPolicy&) const = default;
};

// Responder-side gate applied to an incoming pairing request. Returns the
// error to send in Pairing Failed, or nullopt to proceed.
std::optional<SecurityError> sc_only_gate(
    const ScOnlyPolicy& policy, const PairingFeatures& initiator,
    const Result<PairingMethod>& negotiated);

}  // namespace scosim::smp
