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

#include "scosim/att/profile.hpp"

namespace scosim::att {

using nlohmann::json;

namespace {

Uuid uuid_field(const json& j, const char* what) {
  if (!j.contains("uuid") || !j["uuid"].is_string()) {
    throw ProfileError(std::string(what) + " without a uuid");
  }
  auto u = Uuid::parse(j["uuid"].get<std::string>());
  if (!u) throw ProfileError("bad uuid: " + j["uuid"].get<std::string>());
  return *u;
}

}  // namespace

std::vector<ServiceSpec> services_from_json(const json& profile) {
  if (!profile.is_object() || !profile.contains("services") ||
      !profile["services"].is_array()) {
    throw ProfileError("profile has no services array");
  }
  std::vector<ServiceSpec> out;
  for (const auto& s : profile["services"]) {
    ServiceSpec spec;
    spec.uuid = uuid_field(s, "service");
    const std::string kind = s.value("kind", "primary");
    if (kind == "primary") {
      spec.kind = ServiceKind::kPrimary;
    } else if (kind == "secondary") {
      spec.kind = ServiceKind::kSecondary;
    } else {
      throw ProfileError("bad service kind: " + kind);
    }
    for (const auto& c : s.value("characteristics", json::array())) {
      CharacteristicSpec ch;
      ch.uuid = uuid_field(c, "characteristic");
      const std::string perm = c.value("permission", "Open");
      auto p = parse_permission(perm);
      if (!p) throw ProfileError("bad permission: " + perm);
      ch.permission = *p;
      ch.notify = c.value("notify", false);
      if (c.contains("value_hex")) {
        auto v = from_hex(c["value_hex"].get<std::string>());
        if (!v) throw ProfileError("bad value_hex");
        ch.value = *v;
      } else {
        ch.value = to_bytes(c.value("value", ""));
      }
      spec.characteristics.push_back(std::move(ch));
    }
    out.push_back(std::move(spec));
  }
  return out;
}

std::vector<ServiceSpec> parse_att_profile(std::string_view text) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw ProfileError("profile is not valid JSON");
  return services_from_json(j);
}

json services_to_json(const std::vector<ServiceSpec>& services) {
  json arr = json::array();
  for (const auto& s : services) {
    json js = {{"uuid", s.uuid.to_string()},
               {"kind", s.kind == ServiceKind::kPrimary ? "primary"
                                                        : "secondary"}};
    json chars = json::array();
    for (const auto& c : s.characteristics) {
      chars.push_back({{"uuid", c.uuid.to_string()},
                       {"permission", std::string(to_string(c.permission))},
                       {"notify", c.notify},
                       {"value_hex", to_hex(c.value)}});
    }
    js["characteristics"] = chars;
    arr.push_back(js);
  }
  return json{{"services", arr}};
}

std::vector<ServiceSpec> with_permission(std::vector<ServiceSpec> services,
                                         Permission permission) {
  for (auto& s : services) {
    for (auto& c : s.characteristics) c.permission = permission;
  }
  return services;
}

}  // namespace scosim::att
