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

#include "scosim/peripherals/profile.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "scosim/att/profile.hpp"

#ifndef SCOSIM_DEFAULT_DATA_DIR
#define SCOSIM_DEFAULT_DATA_DIR "data"
#endif

namespace scosim::peripherals {

using att::ProfileError;
using nlohmann::json;

std::string_view to_string(Behavior behavior) {
  switch (behavior) {
    case Behavior::kGeneric:
      return "Generic";
    case Behavior::kBpMonitor:
      return "BpMonitor";
    case Behavior::kSmartLight:
      return "SmartLight";
    case Behavior::kKeyboard:
      return "Keyboard";
  }
  return "?";
}

std::optional<Behavior> parse_behavior(std::string_view text) {
  for (Behavior b : {Behavior::kGeneric, Behavior::kBpMonitor,
                     Behavior::kSmartLight, Behavior::kKeyboard}) {
    if (to_string(b) == text) return b;
  }
  return std::nullopt;
}

namespace {

DeviceAddress address_field(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string()) {
    throw ProfileError(std::string("missing ") + key);
  }
  auto a = DeviceAddress::parse(j[key].get<std::string>());
  if (!a) throw ProfileError("bad address: " + j[key].get<std::string>());
  return *a;
}

}  // namespace

DeviceProfile device_profile_from_json(const json& j) {
  if (!j.is_object()) throw ProfileError("profile is not an object");
  DeviceProfile p;
  try {
    p.name = j.value("name", "");
    if (p.name.empty()) throw ProfileError("profile without a name");
    p.identity = address_field(j, "identity");
    if (p.identity.is_rpa()) {
      throw ProfileError("identity must be a public address");
    }
    const std::string io = j.value("io", "NoInputNoOutput");
    auto cap = parse_io_capability(io);
    if (!cap) throw ProfileError("bad io: " + io);
    p.features.io = *cap;
    p.features.mitm = j.value("mitm", false);
    p.features.bonding = j.value("bonding", true);
    p.features.oob = j.value("oob", false);
    p.features.sc = true;
    const std::string sc_only = j.value("sc_only", "off");
    if (sc_only != "off") {
      auto e = smp::parse_sc_only_enforcement(sc_only);
      if (!e) throw ProfileError("bad sc_only: " + sc_only);
      p.sc_only = {true, *e};
    }
    const int slots = j.value("slot_limit", 1);
    if (slots < 1) throw ProfileError("slot_limit must be positive");
    p.slot_limit = static_cast<size_t>(slots);
    p.whitelist = j.value("whitelist", false);
    for (const auto& w : j.value("whitelist_entries", json::array())) {
      link::KnownIdentity k;
      k.identity = address_field(w, "identity");
      auto irk = array_from_hex<16>(w.value("irk", ""));
      if (!irk) throw ProfileError("bad whitelist irk");
      k.irk = *irk;
      p.whitelist_entries.push_back(k);
    }
    p.adv_frequency_hz = j.value("adv_frequency_hz", 27.0);
    if (!(p.adv_frequency_hz > 0.0) || p.adv_frequency_hz > 50.0) {
      throw ProfileError("adv_frequency_hz must be in (0, 50]");
    }
    p.ltk_property_caching = j.value("ltk_property_caching", false);
    const std::string behavior = j.value("behavior", "Generic");
    auto b = parse_behavior(behavior);
    if (!b) throw ProfileError("bad behavior: " + behavior);
    p.behavior = *b;
    p.password = j.value("password", "");
    p.services = att::services_from_json(j);
  } catch (const json::exception& e) {
    throw ProfileError(std::string("bad profile field: ") + e.what());
  }
  return p;
}

DeviceProfile parse_device_profile(std::string_view text) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw ProfileError("profile is not valid JSON");
  return device_profile_from_json(j);
}

DeviceProfile load_device_profile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ProfileError("cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_device_profile(text.str());
}

json to_json(const DeviceProfile& p) {
  json j;
  j["name"] = p.name;
  j["identity"] = p.identity.to_string();
  j["io"] = std::string(to_string(p.features.io));
  j["mitm"] = p.features.mitm;
  j["bonding"] = p.features.bonding;
  j["oob"] = p.features.oob;
  j["sc_only"] = p.sc_only.enabled
                     ? std::string(smp::to_string(p.sc_only.enforcement))
                     : std::string("off");
  j["slot_limit"] = p.slot_limit;
  j["whitelist"] = p.whitelist;
  json entries = json::array();
  for (const auto& w : p.whitelist_entries) {
    entries.push_back(
        {{"identity", w.identity.to_string()}, {"irk", to_hex(w.irk)}});
  }
  j["whitelist_entries"] = entries;
  j["adv_frequency_hz"] = p.adv_frequency_hz;
  j["ltk_property_caching"] = p.ltk_property_caching;
  j["behavior"] = std::string(to_string(p.behavior));
  j["password"] = p.password;
  j["services"] = att::services_to_json(p.services)["services"];
  return j;
}

std::filesystem::path data_dir() {
  if (const char* env = std::getenv("SCOSIM_DATA_DIR"); env && *env) {
    return env;
  }
  return SCOSIM_DEFAULT_DATA_DIR;
}

std::vector<std::string> fixture_names() {
  std::vector<std::string> names;
  const auto dir = data_dir() / "profiles";
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    if (entry.path().extension() == ".json") {
      names.push_back(entry.path().stem().string());
    }
  }
  std::sort(names.begin(), names.end());
  return names;
}

DeviceProfile fixture(std::string_view name) {
  return load_device_profile(data_dir() / "profiles" /
                             (std::string(name) + ".json"));
}

std::optional<att::Permission> permission_of(const DeviceProfile& profile,
                                             const att::Uuid& uuid) {
  for (const auto& s : profile.services) {
    for (const auto& c : s.characteristics) {
      if (c.uuid == uuid) return c.permission;
    }
  }
  return std::nullopt;
}

}  // namespace scosim::peripherals
