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

#include "scosim/scenarios/validator.hpp"

#include <algorithm>

#include "scosim/crypto.hpp"

namespace scosim::scenarios {

namespace {

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  size_t start = 0;
  while (start <= text.size()) {
    const size_t bar = text.find('|', start);
    const size_t end = bar == std::string::npos ? text.size() : bar;
    if (end > start) out.push_back(text.substr(start, end - start));
    if (bar == std::string::npos) break;
    start = bar + 1;
  }
  return out;
}

bool contains(const std::vector<std::string>& list, const std::string& item) {
  return std::find(list.begin(), list.end(), item) != list.end();
}

class Checker {
 public:
  explicit Checker(const ScenarioReport& report) : r_(report) {}

  std::string artifact(std::string_view kind) {
    auto v = r_.artifact(kind);
    if (!v) missing_.push_back("artifact " + std::string(kind));
    return v.value_or("");
  }

  std::string fact(std::string_view key) {
    auto v = r_.fact(key);
    if (!v) missing_.push_back("fact " + std::string(key));
    return v.value_or("");
  }

  // What was missing when a predicate came out false.
  const std::vector<std::string>& missing() const { return missing_; }

 private:
  const ScenarioReport& r_;
  std::vector<std::string> missing_;
};

bool irk_tracks_mobile(Checker& c) {
  const auto irk = array_from_hex<16>(c.artifact("irk"));
  const auto identity = DeviceAddress::parse(c.artifact("identity"));
  const auto mobile = DeviceAddress::parse(c.fact("mobile_identity"));
  const auto rpa = DeviceAddress::parse(c.fact("victim_rpa"));
  if (!irk || !identity || !mobile || !rpa) return false;
  return rpa->is_rpa() && crypto::rpa_resolve(*irk, *rpa) &&
         *identity == *mobile;
}

bool relayed(Checker& c, bool need_tablet) {
  const std::string typed = c.fact("typed");
  if (typed.empty()) return false;
  const bool captured =
      c.artifact("keystrokes").find(typed) != std::string::npos;
  if (!need_tablet) return captured;
  return captured &&
         c.fact("tablet_received").find(typed) != std::string::npos;
}

bool plaintext_on_air(const ScenarioReport& r, const std::string& text) {
  if (text.empty()) return false;
  for (const auto& rec : r.sniffer) {
    if (rec.encrypted || rec.destination == "broadcast") continue;
    if (std::search(rec.data.begin(), rec.data.end(), text.begin(),
                    text.end()) != rec.data.end()) {
      return true;
    }
  }
  return false;
}

bool predicate(const ScenarioReport& r, Checker& c) {
  switch (r.id) {
    case ScenarioId::kFalseDataInjection:
      return contains(split(c.fact("app_readings")),
                      c.artifact("injected_reading"));
    case ScenarioId::kSpoofSensitiveInfo: {
      const std::string password = c.artifact("password");
      return !password.empty() && password == c.fact("device_password") &&
             contains(split(c.fact("light_accepted")), c.artifact("command"));
    }
    case ScenarioId::kIrkTheft:
    case ScenarioId::kAdvRace:
      return irk_tracks_mobile(c);
    case ScenarioId::kDosDeadlock: {
      const std::string planted = c.artifact("planted_ltk");
      const std::string mobile = c.fact("mobile_ltk");
      const std::string attempts = c.fact("reconnect_attempts");
      return !planted.empty() && planted == mobile &&
             mobile != c.fact("device_ltk") && attempts == "5" &&
             c.fact("reconnect_failures") == attempts;
    }
    case ScenarioId::kPassiveEavesdrop: {
      const std::string published = c.fact("published_reading");
      return c.artifact("eavesdropped") == published &&
             plaintext_on_air(r, published);
    }
    case ScenarioId::kWhitelistBypass:
      return !c.artifact("keystroke_access").empty() && relayed(c, false);
    case ScenarioId::kKeyboardMitm:
    case ScenarioId::kPasskeyPhysicalAccessMitm:
    case ScenarioId::kNumericComparisonDefense:
      return relayed(c, true);
    case ScenarioId::kTiScOnlyBypass: {
      const auto protected_values = split(c.fact("protected_attributes"));
      for (const auto& read : r.artifacts_of("protected_read")) {
        if (contains(protected_values, read)) return true;
      }
      c.artifact("protected_read");
      return false;
    }
  }
  return false;
}

}  // namespace

Validation validate(const ScenarioReport& report) {
  Validation v;
  Checker checker(report);
  v.predicate_holds = predicate(report, checker);
  const bool succeeded = report.verdict == Verdict::kAttackSucceeded;
  if (succeeded && !v.predicate_holds) {
    std::string what = "AttackSucceeded but the success predicate fails";
    for (const auto& m : checker.missing()) what += "; missing " + m;
    v.problems.push_back(what);
  }
  if (!succeeded && v.predicate_holds) {
    v.problems.push_back("AttackFailed but the success predicate holds");
  }
  if (report.reason.empty()) v.problems.push_back("empty reason");
  if (report.transcript.empty()) v.problems.push_back("empty transcript");
  for (size_t i = 1; i < report.sniffer.size(); ++i) {
    if (report.sniffer[i].time < report.sniffer[i - 1].time) {
      v.problems.push_back("sniffer log out of time order");
      break;
    }
  }
  return v;
}

}  // namespace scosim::scenarios
