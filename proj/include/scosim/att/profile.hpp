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
 *  Declarative attribute tables. A profile is a JSON object whose
 *  "services" array lists
 *
 *    { "uuid": "1810", "kind": "primary",
 *      "characteristics": [
 *        { "uuid": "2A35", "permission": "Open", "notify": true,
 *          "value": "text" | "value_hex": "0a0b" } ] }
 *
 *  Unknown keys are ignored so device profiles can carry more fields.
 *
 ******************************************************************************/

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "scosim/att/server.hpp"

namespace scosim::att {

class ProfileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Throws ProfileError on malformed input.
std::vector<ServiceSpec> services_from_json(const nlohmann::json& profile);
std::vector<ServiceSpec> parse_att_profile(std::string_view text);

nlohmann::json services_to_json(const std::vector<ServiceSpec>& services);

// Same table with every characteristic set to one permission. Used by fake
// devices to open up a cloned table.
std::vector<ServiceSpec> with_permission(std::vector<ServiceSpec> services,
                                         Permission permission);

}  // namespace scosim::att
