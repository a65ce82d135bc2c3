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

#include <sstream>

#include "scosim/scenarios/scenario.hpp"

namespace scosim::scenarios {

namespace {

struct ScenarioInfo {
  ScenarioId id;
  std::string_view name;
  std::string_view profile;
  std::optional<peripherals::Behavior> behavior;
  std::string_view description;
};

constexpr ScenarioInfo kInfo[] = {
    {ScenarioId::kFalseDataInjection, "FalseDataInjection", "bp_monitor",
     peripherals::Behavior::kBpMonitor,
     "blocker + keyless clone; the app accepts injected readings"},
    {ScenarioId::kSpoofSensitiveInfo, "SpoofSensitiveInfo", "smart_light",
     peripherals::Behavior::kSmartLight,
     "blocker + keyless clone captures the app-layer password"},
    {ScenarioId::kIrkTheft, "IrkTheft", "bp_monitor", std::nullopt,
     "clone forces Just Works pairing and receives the mobile's IRK"},
    {ScenarioId::kDosDeadlock, "DosDeadlock", "smart_light", std::nullopt,
     "clone overwrites the mobile's LTK; reconnects to the real device fail"},
    {ScenarioId::kPassiveEavesdrop, "PassiveEavesdrop", "bp_monitor",
     peripherals::Behavior::kBpMonitor,
     "downgraded mobile later talks to the real device in plaintext"},
    {ScenarioId::kWhitelistBypass, "WhitelistBypass", "keyboard",
     peripherals::Behavior::kKeyboard,
     "fake mobile with stolen identity and IRK passes the whitelist"},
    {ScenarioId::kKeyboardMitm, "KeyboardMitm", "keyboard",
     peripherals::Behavior::kKeyboard,
     "IRK theft + whitelist bypass + keystroke relay"},
    {ScenarioId::kPasskeyPhysicalAccessMitm, "PasskeyPhysicalAccessMitm",
     "keyboard_passkey", peripherals::Behavior::kKeyboard,
     "attacker-paired keyboard leaks the passkey the victim types"},
    {ScenarioId::kNumericComparisonDefense, "NumericComparisonDefense",
     "keyboard", peripherals::Behavior::kKeyboard,
     "same relay against Numeric Comparison"},
    {ScenarioId::kTiScOnlyBypass, "TiScOnlyBypass", "ti_board", std::nullopt,
     "cloned mobile re-pairs with Just Works and reads protected data"},
    {ScenarioId::kAdvRace, "AdvRace", "keyboard",
     peripherals::Behavior::kKeyboard,
     "faster-advertising clone wins the connection race, no blocker"},
};

const ScenarioInfo& info(ScenarioId id) {
  for (const auto& i : kInfo) {
    if (i.id == id) return i;
  }
  return kInfo[0];
}

std::string escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c == '\\') {
      out += "\\\\";
    } else if (c == '\n') {
      out += "\\n";
    } else {
      out += c;
    }
  }
  return out;
}

std::string unescape(std::string_view text) {
  std::string out;
  for (size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '\\' && i + 1 < text.size()) {
      out += text[i + 1] == 'n' ? '\n' : text[i + 1];
      ++i;
    } else {
      out += text[i];
    }
  }
  return out;
}

// Splits "<word> <rest>".
std::pair<std::string, std::string> split_first(std::string_view line) {
  const size_t space = line.find(' ');
  if (space == std::string_view::npos) return {std::string(line), ""};
  return {std::string(line.substr(0, space)),
          std::string(line.substr(space + 1))};
}

}  // namespace

std::string_view to_string(ScenarioId id) { return info(id).name; }

std::optional<ScenarioId> parse_scenario_id(std::string_view text) {
  for (const auto& i : kInfo) {
    if (i.name == text) return i.id;
  }
  return std::nullopt;
}

std::string_view describe(ScenarioId id) { return info(id).description; }

std::string_view default_profile(ScenarioId id) { return info(id).profile; }

peripherals::DeviceProfile resolve_config(const ScenarioConfig& config) {
  if (config.enforce && config.host != host::HostVariant::kPatched) {
    throw ConfigError("an enforced method needs the patched host");
  }
  peripherals::DeviceProfile profile;
  if (config.device) {
    profile = *config.device;
  } else {
    const std::string name = config.profile.empty()
                                 ? std::string(default_profile(config.id))
                                 : config.profile;
    try {
      profile = peripherals::fixture(name);
    } catch (const std::exception& e) {
      throw ConfigError("profile " + name + ": " + e.what());
    }
  }
  const auto& i = info(config.id);
  if (i.behavior && profile.behavior != *i.behavior) {
    throw ConfigError(std::string(i.name) + " needs a " +
                      std::string(peripherals::to_string(*i.behavior)) +
                      " profile, got " +
                      std::string(peripherals::to_string(profile.behavior)));
  }
  if (profile.services.empty()) {
    throw ConfigError("profile " + profile.name + " has no services");
  }
  return profile;
}

std::string_view to_string(Verdict verdict) {
  return verdict == Verdict::kAttackSucceeded ? "AttackSucceeded"
                                              : "AttackFailed";
}

std::optional<Verdict> parse_verdict(std::string_view text) {
  if (text == "AttackSucceeded") return Verdict::kAttackSucceeded;
  if (text == "AttackFailed") return Verdict::kAttackFailed;
  return std::nullopt;
}

std::optional<std::string> ScenarioReport::artifact(
    std::string_view kind) const {
  for (const auto& a : artifacts) {
    if (a.kind == kind) return a.value;
  }
  return std::nullopt;
}

std::vector<std::string> ScenarioReport::artifacts_of(
    std::string_view kind) const {
  std::vector<std::string> out;
  for (const auto& a : artifacts) {
    if (a.kind == kind) out.push_back(a.value);
  }
  return out;
}

std::optional<std::string> ScenarioReport::fact(std::string_view key) const {
  for (const auto& f : facts) {
    if (f.key == key) return f.value;
  }
  return std::nullopt;
}

std::string ScenarioReport::to_structured() const {
  std::ostringstream out;
  out << kMagic << "\n";
  out << "scenario " << to_string(id) << "\n";
  out << "host " << host::to_string(host) << "\n";
  out << "enforce "
      << (enforce ? std::string(scosim::to_string(*enforce)) : "none") << "\n";
  out << "profile " << profile << "\n";
  out << "seed " << seed << "\n";
  out << "verdict " << to_string(verdict) << "\n";
  out << "reason " << escape(reason) << "\n";
  for (const auto& a : artifacts) {
    out << "artifact " << a.kind << " " << escape(a.value) << "\n";
  }
  for (const auto& f : facts) {
    out << "fact " << f.key << " " << escape(f.value) << "\n";
  }
  for (const auto& e : security_events) out << "event " << escape(e) << "\n";
  for (const auto& t : transcript) out << "transcript " << escape(t) << "\n";
  for (const auto& s : sniffer) out << "sniffer " << s.to_line() << "\n";
  out << "end\n";
  return out.str();
}

std::string ScenarioReport::to_text() const {
  std::ostringstream out;
  out << to_string(id) << " vs " << host::to_string(host) << " host";
  if (enforce) out << " enforcing " << scosim::to_string(*enforce);
  out << " (profile " << profile << ", seed " << seed << ")\n";
  out << "verdict: " << to_string(verdict) << "\n";
  out << "reason:  " << reason << "\n";
  if (!artifacts.empty()) {
    out << "stolen:\n";
    for (const auto& a : artifacts) {
      out << "  " << a.kind << ": " << a.value << "\n";
    }
  }
  if (!security_events.empty()) {
    out << "security events:\n";
    for (const auto& e : security_events) out << "  " << e << "\n";
  }
  out << "transcript: " << transcript.size() << " lines, sniffer: "
      << sniffer.size() << " frames\n";
  return out.str();
}

ScenarioReport ScenarioReport::parse(std::string_view text) {
  ScenarioReport r;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kMagic) {
    throw ConfigError("not a scosim report");
  }
  bool ended = false;
  while (std::getline(in, line)) {
    if (line == "end") {
      ended = true;
      break;
    }
    auto [key, rest] = split_first(line);
    if (key == "scenario") {
      auto id = parse_scenario_id(rest);
      if (!id) throw ConfigError("unknown scenario " + rest);
      r.id = *id;
    } else if (key == "host") {
      auto h = host::parse_host_variant(rest);
      if (!h) throw ConfigError("unknown host " + rest);
      r.host = *h;
    } else if (key == "enforce") {
      if (rest != "none") {
        auto m = parse_pairing_method(rest);
        if (!m) throw ConfigError("unknown method " + rest);
        r.enforce = *m;
      }
    } else if (key == "profile") {
      r.profile = rest;
    } else if (key == "seed") {
      r.seed = std::stoull(rest);
    } else if (key == "verdict") {
      auto v = parse_verdict(rest);
      if (!v) throw ConfigError("unknown verdict " + rest);
      r.verdict = *v;
    } else if (key == "reason") {
      r.reason = unescape(rest);
    } else if (key == "artifact") {
      auto [kind, value] = split_first(rest);
      r.artifacts.push_back({kind, unescape(value)});
    } else if (key == "fact") {
      auto [k, value] = split_first(rest);
      r.facts.push_back({k, unescape(value)});
    } else if (key == "event") {
      r.security_events.push_back(unescape(rest));
    } else if (key == "transcript") {
      r.transcript.push_back(unescape(rest));
    } else if (key == "sniffer") {
      auto rec = link::SnifferRecord::parse_line(rest);
      if (!rec) throw ConfigError("bad sniffer line: " + rest);
      r.sniffer.push_back(*rec);
    } else {
      throw ConfigError("unknown report line: " + line);
    }
  }
  if (!ended) throw ConfigError("report is truncated");
  while (std::getline(in, line)) {
    if (!line.empty()) throw ConfigError("content after end: " + line);
  }
  return r;
}

}  // namespace scosim::scenarios
