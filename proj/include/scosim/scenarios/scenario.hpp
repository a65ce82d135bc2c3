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
 *  Scenario definitions and reports. Every scenario first bonds the mobile
 *  with the genuine device through an honest pairing, then plays one
 *  scripted attack timeline and decides the verdict from an explicit
 *  success predicate over what the attacker ended up holding.
 *
 ******************************************************************************/

#pragma once

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "scosim/host/host.hpp"
#include "scosim/link/sniffer.hpp"
#include "scosim/model.hpp"
#include "scosim/peripherals/profile.hpp"

namespace scosim::scenarios {

enum class ScenarioId : uint8_t {
  kFalseDataInjection,
  kSpoofSensitiveInfo,
  kIrkTheft,
  kDosDeadlock,
  kPassiveEavesdrop,
  kWhitelistBypass,
  kKeyboardMitm,
  kPasskeyPhysicalAccessMitm,
  kNumericComparisonDefense,
  kTiScOnlyBypass,
  kAdvRace,
};

inline constexpr std::array<ScenarioId, 11> kAllScenarios = {
    ScenarioId::kFalseDataInjection,
    ScenarioId::kSpoofSensitiveInfo,
    ScenarioId::kIrkTheft,
    ScenarioId::kDosDeadlock,
    ScenarioId::kPassiveEavesdrop,
    ScenarioId::kWhitelistBypass,
    ScenarioId::kKeyboardMitm,
    ScenarioId::kPasskeyPhysicalAccessMitm,
    ScenarioId::kNumericComparisonDefense,
    ScenarioId::kTiScOnlyBypass,
    ScenarioId::kAdvRace,
};

std::string_view to_string(ScenarioId id);
std::optional<ScenarioId> parse_scenario_id(std::string_view text);
std::string_view describe(ScenarioId id);
// Bundled profile used when the configuration names none.
std::string_view default_profile(ScenarioId id);

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScenarioConfig {
  ScenarioId id = ScenarioId::kIrkTheft;
  host::HostVariant host = host::HostVariant::kFlawed;
  // Method the app specifies on a patched host.
  std::optional<PairingMethod> enforce;
  // Bundled fixture name; empty selects the scenario default.
  std::string profile;
  // Takes precedence over `profile` when set.
  std::optional<peripherals::DeviceProfile> device;
  uint64_t seed = 1;
};

// Throws ConfigError. Also returns the resolved device profile.
peripherals::DeviceProfile resolve_config(const ScenarioConfig& config);

enum class Verdict : uint8_t { kAttackSucceeded, kAttackFailed };

std::string_view to_string(Verdict verdict);
std::optional<Verdict> parse_verdict(std::string_view text);

struct Artifact {
  std::string kind;
  std::string value;
  bool operator==(const Artifact&) const = default;
};

struct Fact {
  std::string key;
  std::string value;
  bool operator==(const Fact&) const = default;
};

// Versioned line-oriented report. See docs/report_format.md.
struct ScenarioReport {
  static constexpr std::string_view kMagic = "scosim-report v1";

  ScenarioId id = ScenarioId::kIrkTheft;
  host::HostVariant host = host::HostVariant::kFlawed;
  std::optional<PairingMethod> enforce;
  std::string profile;
  uint64_t seed = 0;
  Verdict verdict = Verdict::kAttackFailed;
  std::string reason;
  // Stolen material.
  std::vector<Artifact> artifacts;
  // Ground truth the validator checks the artifacts against.
  std::vector<Fact> facts;
  // Prompts, warnings and errors raised on the mobile, time ordered.
  std::vector<std::string> security_events;
  // Script steps and link-level messages, time ordered.
  std::vector<std::string> transcript;
  std::vector<link::SnifferRecord> sniffer;

  std::optional<std::string> artifact(std::string_view kind) const;
  std::vector<std::string> artifacts_of(std::string_view kind) const;
  std::optional<std::string> fact(std::string_view key) const;

  std::string to_structured() const;
  // Human-readable summary without the logs.
  std::string to_text() const;
  // Throws ConfigError on malformed input.
  static ScenarioReport parse(std::string_view text);

  bool operator==(const ScenarioReport&) const = default;
};

ScenarioReport run(const ScenarioConfig& config);

}  // namespace scosim::scenarios
