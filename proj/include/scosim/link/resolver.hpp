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

#include <optional>
#include <vector>

#include "scosim/crypto.hpp"
#include "scosim/model.hpp"

namespace scosim::link {

struct KnownIdentity {
  crypto::Irk irk{};
  DeviceAddress identity;
};

// Maps an on-air address to an identity. Public addresses are their own
// identity; an RPA resolves under the first stored IRK that matches.
std::optional<DeviceAddress> resolve_peer_identity(
    const std::vector<KnownIdentity>& known, const DeviceAddress& address);

}  // namespace scosim::link
