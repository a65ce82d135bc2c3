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

#include <algorithm>
#include <cstdio>
#include <functional>
#include <memory>
#include <utility>

#include "scosim/crypto.hpp"
#include "scosim/host/host.hpp"
#include "scosim/link/medium.hpp"
#include "scosim/peripherals/attackers.hpp"
#include "scosim/peripherals/device.hpp"
#include "scosim/scenarios/scenario.hpp"

namespace scosim::scenarios {

namespace {

using link::kMillisecond;
using link::kSecond;
using link::Time;
using peripherals::Behavior;
using peripherals::BpReading;
using peripherals::DeviceProfile;
using peripherals::FakeDevice;
using peripherals::FakeMobile;
using peripherals::FakeMobileOptions;
using peripherals::FakeOptions;
using peripherals::Peripheral;

const AppId kApp = "com.example.companion";

constexpr int kReconnects = 5;
constexpr int kRaceAttempts = 20;
constexpr std::string_view kTypedMessage = "pay 250 to 8812";
constexpr std::string_view kAttackerCommand = "attacker-on";

std::string text_of(const Bytes& value) {
  return std::string(value.begin(), value.end());
}

std::string stamp(Time time) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%012llu",
                static_cast<unsigned long long>(time));
  return buf;
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += '|';
    out += parts[i];
  }
  return out;
}

// The fake peripheral's I/O follows the method the victim app insists on,
// so the negotiated method passes the host's check.
FakeOptions fake_for(std::optional<PairingMethod> enforce,
                     att::Permission permission) {
  FakeOptions options;
  options.permission = permission;
  if (enforce == PairingMethod::kPasskeyEntry) {
    options.io = IoCapability::kKeyboardOnly;
    options.mitm = true;
  } else if (enforce == PairingMethod::kNumericComparison) {
    options.io = IoCapability::kKeyboardDisplay;
    options.mitm = true;
  }
  return options;
}

host::HostConfig mobile_config(host::HostVariant variant) {
  host::HostConfig config;
  config.variant = variant;
  return config;
}

class Run {
 public:
  Run(const ScenarioConfig& config, DeviceProfile profile)
      : config_(config),
        profile_(std::move(profile)),
        scheduler_(config.seed),
        medium_(scheduler_),
        host_(medium_, mobile_config(config.host)),
        device_(medium_, profile_) {
    host_.user().behavior = smp::UserBehavior::kHonestComparator;
    host_.user().counterpart_display = [this] {
      return device_.displayed_value();
    };
    host_.user().type_on_device = [this](uint32_t passkey) {
      device_.type_text(peripherals::six_digits(passkey));
    };
    device_.user().behavior = smp::UserBehavior::kHonestComparator;
    device_.user().counterpart_display = [this] {
      return host_.displayed_value();
    };
  }

  ScenarioReport execute();

 private:
  DeviceAddress peer() const { return profile_.identity; }
  void run_for(Time duration) { scheduler_.run_for(duration); }
  void step(std::string text) {
    steps_.push_back({scheduler_.now(), std::move(text)});
  }
  void succeed(std::string reason) {
    verdict_ = Verdict::kAttackSucceeded;
    reason_ = std::move(reason);
  }
  void fail(std::string reason) {
    verdict_ = Verdict::kAttackFailed;
    reason_ = std::move(reason);
  }
  void artifact(std::string kind, std::string value) {
    artifacts_.push_back({std::move(kind), std::move(value)});
  }
  void fact(std::string key, std::string value) {
    facts_.push_back({std::move(key), std::move(value)});
  }

  bool prelude();
  void app_actions();
  void app_visit(Time duration = 5 * kSecond,
                 const std::function<void()>& tick = nullptr);
  void app_leave();
  bool bonded_since(Time since) const;
  void deploy_fake(const FakeOptions& options);
  void remove_fake();
  bool landed_on_fake();
  bool reconnect_encrypted();
  std::string clone_outcome() const;
  std::string tablet_text(Time since) const;
  std::vector<std::string> app_readings() const;
  void record_theft(const smp::ReceivedIdentity& stolen);
  void record_victim_rpa();
  bool race_for_irk(const FakeOptions& options);
  bool bypass_whitelist();
  bool physical_access_pairing();
  void relay_keystrokes();
  void judge_relay(Time since);

  void false_data_injection();
  void spoof_sensitive_info();
  void irk_theft();
  void dos_deadlock();
  void passive_eavesdrop();
  void whitelist_bypass();
  void keyboard_mitm();
  void passkey_physical_access_mitm();
  void numeric_comparison_defense();
  void ti_sc_only_bypass();
  void adv_race();

  ScenarioConfig config_;
  DeviceProfile profile_;
  link::Scheduler scheduler_;
  link::Medium medium_;
  host::MobileHost host_;
  Peripheral device_;
  std::unique_ptr<peripherals::Blocker> blocker_;
  std::unique_ptr<FakeDevice> fake_;
  std::unique_ptr<FakeMobile> fake_mobile_;

  Verdict verdict_ = Verdict::kAttackFailed;
  std::string reason_;
  std::vector<Artifact> artifacts_;
  std::vector<Fact> facts_;
  std::vector<std::pair<Time, std::string>> steps_;
};

bool Run::prelude() {
  if (config_.enforce) {
    host_.specify_pairing(kApp, *config_.enforce);
    step("app specifies " + std::string(to_string(*config_.enforce)));
  }
  device_.start_advertising();
  step("honest bonding with " + profile_.name);
  host_.create_bond(kApp, peer());
  run_for(10 * kSecond);
  const Bond* bond = host_.bonds().find(peer());
  if (!bond || device_.bonds().empty()) return false;
  fact("honest_bond_authenticated", bond->authenticated ? "true" : "false");
  app_leave();
  return true;
}

// What the companion app does on every connection.
void Run::app_actions() {
  switch (profile_.behavior) {
    case Behavior::kBpMonitor:
      host_.subscribe(kApp, peer(), peripherals::kBpMeasurementUuid);
      break;
    case Behavior::kSmartLight:
      host_.write(kApp, peer(), peripherals::kLightPasswordUuid,
                  to_bytes(profile_.password));
      host_.write(kApp, peer(), peripherals::kLightCommandUuid,
                  to_bytes("on"));
      break;
    case Behavior::kKeyboard:
      host_.subscribe(kApp, peer(), peripherals::kKeystrokeUuid);
      break;
    case Behavior::kGeneric:
      for (const auto& service : profile_.services) {
        for (const auto& c : service.characteristics) {
          if (c.permission != att::Permission::kOpen) {
            host_.read(kApp, peer(), c.uuid);
          }
        }
      }
      break;
  }
}

// The app repeats its requests once if a bond completes mid-visit.
void Run::app_visit(Time duration, const std::function<void()>& tick) {
  step("app connects");
  const Time start = scheduler_.now();
  const Time end = start + duration;
  host_.connect(kApp, peer());
  app_actions();
  bool retried = false;
  while (scheduler_.now() < end) {
    run_for(std::min<Time>(100 * kMillisecond, end - scheduler_.now()));
    if (tick) tick();
    if (!retried && bonded_since(start)) {
      retried = true;
      step("app retries after bonding");
      app_actions();
    }
  }
}

bool Run::bonded_since(Time since) const {
  for (const auto& e : host_.events(kApp)) {
    if (e.kind == host::AppEvent::Kind::kBondStateChanged &&
        e.bond_state == host::BondState::kBonded && e.time >= since) {
      return true;
    }
  }
  return false;
}

void Run::app_leave() {
  host_.disconnect(kApp, peer());
  run_for(kSecond);
}

void Run::deploy_fake(const FakeOptions& options) {
  blocker_ = std::make_unique<peripherals::Blocker>(medium_);
  blocker_->block(peer(), profile_.slot_limit);
  run_for(kSecond);
  step("blocker holds " + std::to_string(blocker_->held()) + " of " +
       std::to_string(profile_.slot_limit) + " slots");
  fake_ = std::make_unique<FakeDevice>(medium_, profile_, options);
  fake_->start_advertising();
  step("clone advertises as " + peer().to_string() + " with " +
       std::string(att::to_string(options.permission)) + " attributes");
  run_for(kSecond);
}

void Run::remove_fake() {
  if (fake_) fake_->power_off();
  if (blocker_) blocker_->release();
  step("clone off, blocker released");
  run_for(kSecond);
}

bool Run::landed_on_fake() {
  auto id = host_.connection_to(peer());
  if (!id || !fake_) return false;
  const link::Connection* c = medium_.connection(*id);
  return c && c->slave == fake_->device_id();
}

bool Run::reconnect_encrypted() {
  host_.connect(kApp, peer());
  run_for(2 * kSecond);
  auto security = host_.link_security(peer());
  const bool ok = security && security->is_encrypted();
  step(std::string("reconnect ") + (ok ? "encrypted" : "failed"));
  app_leave();
  return ok;
}

std::string Run::clone_outcome() const {
  if (fake_ && !fake_->pairings().empty()) {
    const auto& last = fake_->pairings().back();
    if (last.error) {
      return "pairing with the clone aborted with " +
             std::string(to_string(*last.error)) + " before key distribution";
    }
    if (last.method) {
      return "clone paired with " + std::string(to_string(*last.method));
    }
  }
  for (const auto& p : host_.prompts()) {
    if (p.kind == host::Prompt::Kind::kRePair && !p.consented) {
      return "user declined re-pairing";
    }
  }
  return "mobile never paired with the clone";
}

std::string Run::tablet_text(Time since) const {
  std::string out;
  for (const auto& e : host_.events(kApp)) {
    if (e.kind == host::AppEvent::Kind::kNotification && e.time >= since &&
        e.uuid == peripherals::kKeystrokeUuid) {
      out += text_of(e.value);
    }
  }
  return out;
}

std::vector<std::string> Run::app_readings() const {
  std::vector<std::string> out;
  for (const auto& e : host_.events(kApp)) {
    if (e.kind == host::AppEvent::Kind::kNotification &&
        e.uuid == peripherals::kBpMeasurementUuid) {
      out.push_back(text_of(e.value));
    }
  }
  return out;
}

void Run::record_theft(const smp::ReceivedIdentity& stolen) {
  artifact("irk", to_hex(stolen.irk));
  artifact("identity", stolen.identity.to_string());
  step("clone received IRK and identity " + stolen.identity.to_string());
}

// Ground truth for the tracking check: the mobile's identity and a fresh
// RPA it used after the theft.
void Run::record_victim_rpa() {
  fact("mobile_identity", host_.identity().to_string());
  if (!host_.addresses_used().empty()) {
    fact("victim_rpa", host_.addresses_used().back().to_string());
  }
}

// No blocker: the whitelist refuses the blocker's connections, so the clone
// simply advertises faster and retries until the mobile lands on it.
bool Run::race_for_irk(const FakeOptions& options) {
  fake_ = std::make_unique<FakeDevice>(medium_, profile_, options);
  fake_->start_advertising();
  step("clone advertises at " +
       std::to_string(static_cast<int>(options.adv_frequency_hz)) +
       " Hz against " +
       std::to_string(static_cast<int>(profile_.adv_frequency_hz)) + " Hz");
  int attempts = 0;
  int fake_wins = 0;
  while (attempts < kRaceAttempts && !fake_->stolen_identity()) {
    ++attempts;
    host_.connect(kApp, peer());
    app_actions();
    for (int i = 0; i < 100 && !host_.connection_to(peer()); ++i) {
      run_for(10 * kMillisecond);
    }
    const bool on_fake = landed_on_fake();
    fake_wins += on_fake ? 1 : 0;
    step("attempt " + std::to_string(attempts) + " landed on " +
         (on_fake ? "clone" : "genuine device"));
    run_for(5 * kSecond);
    app_leave();
  }
  fact("attempts", std::to_string(attempts));
  fact("fake_wins", std::to_string(fake_wins));
  return fake_->stolen_identity().has_value();
}

// Steals the IRK through the race, then wears it to pass the genuine
// keyboard's whitelist and pair with Just Works.
bool Run::bypass_whitelist() {
  race_for_irk(fake_for(std::nullopt, att::Permission::kEncryptedReadWrite));
  fake_->power_off();
  auto stolen = fake_->stolen_identity();
  if (!stolen) {
    fail("no IRK stolen: " + clone_outcome());
    return false;
  }
  record_theft(*stolen);
  fake_mobile_ = std::make_unique<FakeMobile>(medium_, FakeMobileOptions());
  fake_mobile_->assume_identity(stolen->identity, stolen->irk);
  step("fake mobile connects as " + stolen->identity.to_string());
  fake_mobile_->connect(peer());
  run_for(kSecond);
  if (!fake_mobile_->connected()) {
    fail("genuine device refused the fake mobile");
    return false;
  }
  fake_mobile_->pair();
  fake_mobile_->subscribe(peripherals::kKeystrokeUuid);
  run_for(5 * kSecond);
  const auto& results = fake_mobile_->results();
  if (results.empty() || results.back().status) {
    fail("keystroke attribute denied to the fake mobile");
    return false;
  }
  artifact("keystroke_access",
           std::string(to_string(*fake_mobile_->paired_method())));
  return true;
}

// The attacker holds the genuine keyboard for a moment and pairs it with the
// fake mobile, confirming or typing on the keyboard itself.
bool Run::physical_access_pairing() {
  const smp::UserAgent owner = device_.user();
  device_.set_pairing_mode(true);
  device_.user().behavior = smp::UserBehavior::kAttackerControlled;
  device_.user().attacker_confirm = [](uint32_t) { return true; };
  device_.user().passkey_source = [this]() -> std::optional<uint32_t> {
    return fake_mobile_->displayed_value();
  };
  FakeMobileOptions options;
  options.io = IoCapability::kKeyboardDisplay;
  options.mitm = true;
  fake_mobile_ = std::make_unique<FakeMobile>(medium_, options);
  step("physical access: fake mobile pairs with " + profile_.name);
  fake_mobile_->connect(peer());
  run_for(kSecond);
  fake_mobile_->pair();
  fake_mobile_->subscribe(peripherals::kKeystrokeUuid);
  run_for(10 * kSecond);
  device_.user() = owner;
  device_.set_pairing_mode(false);
  if (!fake_mobile_->paired() || !fake_mobile_->connected()) {
    fail("attacker could not pair with the keyboard");
    return false;
  }
  fact("attacker_keyboard_method",
       std::string(to_string(*fake_mobile_->paired_method())));
  return true;
}

void Run::relay_keystrokes() {
  fake_mobile_->on_notification = [this](const att::Uuid& uuid,
                                         const Bytes& value) {
    if (uuid == peripherals::kKeystrokeUuid && fake_) {
      fake_->relay_input(text_of(value));
    }
  };
}

// The victim types on the genuine keyboard; the attack needs the text both
// in the attacker's capture and on the tablet.
void Run::judge_relay(Time since) {
  const Time typed_at = scheduler_.now();
  step("user types on the keyboard");
  device_.type_text(kTypedMessage);
  run_for(2 * kSecond);
  const std::string captured =
      fake_mobile_ ? fake_mobile_->received_text(peripherals::kKeystrokeUuid)
                   : "";
  const std::string received = tablet_text(std::min(since, typed_at));
  fact("typed", std::string(kTypedMessage));
  fact("tablet_received", received);
  if (!captured.empty()) artifact("keystrokes", captured);
  if (fake_ && fake_->relayed_passkey()) {
    artifact("relayed_passkey", peripherals::six_digits(*fake_->relayed_passkey()));
  }
  const bool captured_ok = captured.find(kTypedMessage) != std::string::npos;
  const bool delivered = received.find(kTypedMessage) != std::string::npos;
  if (captured_ok && delivered) {
    succeed("keystrokes captured and relayed to the tablet");
  } else if (!captured_ok) {
    fail("attacker captured no keystrokes");
  } else {
    fail("tablet never received the relayed keystrokes: " + clone_outcome());
  }
}

void Run::false_data_injection() {
  deploy_fake(fake_for(std::nullopt, att::Permission::kOpen));
  app_visit();
  Rng& rng = scheduler_.rng();
  const BpReading injected{static_cast<int>(rng.uniform(190, 230)),
                           static_cast<int>(rng.uniform(120, 140)),
                           static_cast<int>(rng.uniform(130, 160))};
  step("clone publishes " + injected.to_text());
  fake_->publish_reading(injected);
  run_for(kSecond);
  const auto readings = app_readings();
  artifact("injected_reading", injected.to_text());
  fact("app_readings", join(readings));
  if (std::find(readings.begin(), readings.end(), injected.to_text()) !=
      readings.end()) {
    succeed("app accepted a reading from the clone");
  } else {
    fail("no injected reading reached the app: " + clone_outcome());
  }
}

void Run::spoof_sensitive_info() {
  deploy_fake(fake_for(std::nullopt, att::Permission::kOpen));
  app_visit();
  const auto captured = fake_->captured_text(peripherals::kLightPasswordUuid);
  app_leave();
  remove_fake();
  fact("device_password", profile_.password);
  if (captured.empty()) {
    fail("clone captured no password: " + clone_outcome());
    return;
  }
  artifact("password", captured.back());
  fake_mobile_ = std::make_unique<FakeMobile>(medium_, FakeMobileOptions());
  step("fake mobile drives the genuine light");
  fake_mobile_->connect(peer());
  run_for(kSecond);
  fake_mobile_->write(peripherals::kLightPasswordUuid,
                      to_bytes(captured.back()));
  fake_mobile_->write(peripherals::kLightCommandUuid,
                      to_bytes(kAttackerCommand));
  run_for(2 * kSecond);
  const auto& accepted = device_.accepted_commands();
  fact("light_accepted", join(accepted));
  if (std::find(accepted.begin(), accepted.end(), kAttackerCommand) ==
      accepted.end()) {
    fail("genuine light rejected the attacker's command");
    return;
  }
  artifact("command", std::string(kAttackerCommand));
  succeed("captured password controls the genuine light");
}

void Run::irk_theft() {
  deploy_fake(fake_for(std::nullopt, att::Permission::kEncryptedReadWrite));
  app_visit();
  app_leave();
  const auto stolen = fake_->stolen_identity();
  remove_fake();
  app_visit(2 * kSecond);
  app_leave();
  record_victim_rpa();
  if (!stolen) {
    fail(clone_outcome());
    return;
  }
  record_theft(*stolen);
  const auto rpa = host_.addresses_used().back();
  if (crypto::rpa_resolve(stolen->irk, rpa) &&
      stolen->identity == host_.identity()) {
    succeed("stolen IRK resolves the mobile's fresh RPA");
  } else {
    fail("stolen IRK does not resolve the mobile's RPA");
  }
}

void Run::dos_deadlock() {
  deploy_fake(fake_for(std::nullopt, att::Permission::kEncryptedReadWrite));
  app_visit();
  app_leave();
  std::optional<crypto::Ltk> planted;
  if (!fake_->bonds().empty()) planted = fake_->bonds().back().ltk;
  remove_fake();
  if (planted) artifact("planted_ltk", to_hex(*planted));
  if (const Bond* b = host_.bonds().find(peer())) {
    fact("mobile_ltk", to_hex(b->ltk));
  }
  for (const auto& b : device_.bonds()) {
    if (b.identity == host_.identity()) fact("device_ltk", to_hex(b.ltk));
  }
  int failures = 0;
  for (int i = 0; i < kReconnects; ++i) {
    failures += reconnect_encrypted() ? 0 : 1;
  }
  fact("reconnect_attempts", std::to_string(kReconnects));
  fact("reconnect_failures", std::to_string(failures));
  step("user removes the bond in settings and pairs again");
  host_.user_settings_remove_bond(peer());
  host_.create_bond(kApp, peer());
  run_for(10 * kSecond);
  app_leave();
  int recovered = 0;
  for (int i = 0; i < kReconnects; ++i) {
    recovered += reconnect_encrypted() ? 1 : 0;
  }
  fact("recovery_successes", std::to_string(recovered));
  if (failures == kReconnects) {
    succeed("all reconnects to the genuine device failed");
  } else {
    fail(std::to_string(kReconnects - failures) + " of " +
         std::to_string(kReconnects) + " reconnects succeeded: " +
         clone_outcome());
  }
}

void Run::passive_eavesdrop() {
  deploy_fake(fake_for(std::nullopt, att::Permission::kOpen));
  app_visit();
  app_leave();
  remove_fake();
  app_visit();
  Rng& rng = scheduler_.rng();
  const BpReading reading{static_cast<int>(rng.uniform(100, 140)),
                          static_cast<int>(rng.uniform(60, 90)),
                          static_cast<int>(rng.uniform(55, 95))};
  step("genuine monitor publishes a reading");
  device_.publish_reading(reading);
  run_for(kSecond);
  fact("published_reading", reading.to_text());
  peripherals::SnifferTap tap(medium_.sniffer());
  if (tap.saw_plaintext(reading.to_text())) {
    artifact("eavesdropped", reading.to_text());
    succeed("reading from the genuine device went out in plaintext");
  } else {
    fail("sniffer saw only ciphertext: " + clone_outcome());
  }
}

void Run::whitelist_bypass() {
  if (!bypass_whitelist()) return;
  step("user types on the keyboard");
  device_.type_text(kTypedMessage);
  run_for(2 * kSecond);
  const std::string captured =
      fake_mobile_->received_text(peripherals::kKeystrokeUuid);
  fact("typed", std::string(kTypedMessage));
  if (!captured.empty()) artifact("keystrokes", captured);
  if (captured.find(kTypedMessage) != std::string::npos) {
    succeed("fake mobile passed the whitelist and reads keystrokes");
  } else {
    fail("fake mobile received no keystrokes");
  }
}

void Run::keyboard_mitm() {
  if (!bypass_whitelist()) return;
  // The genuine keyboard's only slot is held by the fake mobile, so the
  // tablet can only reach the clone.
  fake_->start_advertising();
  relay_keystrokes();
  const Time since = scheduler_.now();
  app_visit();
  judge_relay(since);
}

void Run::passkey_physical_access_mitm() {
  if (!physical_access_pairing()) return;
  fake_ = std::make_unique<FakeDevice>(
      medium_, profile_,
      fake_for(config_.enforce, att::Permission::kEncryptedReadWrite));
  fake_->start_advertising();
  relay_keystrokes();
  const Time since = scheduler_.now();
  app_visit(10 * kSecond);
  judge_relay(since);
}

void Run::numeric_comparison_defense() {
  if (!physical_access_pairing()) return;
  fake_ = std::make_unique<FakeDevice>(
      medium_, profile_,
      fake_for(config_.enforce, att::Permission::kEncryptedReadWrite));
  fake_->start_advertising();
  relay_keystrokes();
  const Time since = scheduler_.now();
  // Once the clone shows a comparison value, the attacker re-pairs the
  // genuine keyboard so that it too shows a number for the user to compare.
  bool repaired = false;
  app_visit(10 * kSecond, [this, &repaired] {
    if (!repaired && fake_->displayed_value()) {
      repaired = true;
      step("fake mobile re-pairs with the keyboard");
      fake_mobile_->pair();
    }
  });
  judge_relay(since);
}

void Run::ti_sc_only_bypass() {
  deploy_fake(fake_for(std::nullopt, att::Permission::kEncryptedReadWrite));
  app_visit();
  app_leave();
  const auto stolen = fake_->stolen_identity();
  remove_fake();
  fake_mobile_ = std::make_unique<FakeMobile>(medium_, FakeMobileOptions());
  if (stolen) {
    record_theft(*stolen);
    fake_mobile_->assume_identity(stolen->identity, stolen->irk);
  }
  std::vector<std::string> protected_values;
  std::vector<att::Uuid> targets;
  for (const auto& service : profile_.services) {
    for (const auto& c : service.characteristics) {
      if (c.permission == att::Permission::kOpen) continue;
      protected_values.push_back(c.uuid.to_string() + "=" + text_of(c.value));
      targets.push_back(c.uuid);
    }
  }
  fact("protected_attributes", join(protected_values));
  fact("sc_only", profile_.sc_only.enabled
                      ? std::string(smp::to_string(profile_.sc_only.enforcement))
                      : "off");
  fact("ltk_property_caching", profile_.ltk_property_caching ? "true" : "false");
  step("fake mobile re-pairs with Just Works");
  fake_mobile_->connect(peer());
  run_for(kSecond);
  fake_mobile_->pair();
  for (const auto& uuid : targets) fake_mobile_->read(uuid);
  run_for(5 * kSecond);
  for (const auto& r : fake_mobile_->results()) {
    if (!r.status) {
      artifact("protected_read", r.uuid.to_string() + "=" + text_of(r.value));
    }
  }
  if (fake_mobile_->pairing_error()) {
    fact("repair_error",
         std::string(to_string(*fake_mobile_->pairing_error())));
  }
  const bool unlocked =
      std::any_of(artifacts_.begin(), artifacts_.end(),
                  [](const Artifact& a) { return a.kind == "protected_read"; });
  if (!unlocked) {
    fail("every protected read was denied");
  } else {
    succeed("Just Works re-pairing unlocked protected attributes");
  }
}

void Run::adv_race() {
  race_for_irk(fake_for(std::nullopt, att::Permission::kEncryptedReadWrite));
  const auto stolen = fake_->stolen_identity();
  fake_->power_off();
  app_visit(2 * kSecond);
  app_leave();
  record_victim_rpa();
  if (!stolen) {
    fail("no IRK stolen within " + std::to_string(kRaceAttempts) +
         " attempts: " + clone_outcome());
    return;
  }
  record_theft(*stolen);
  if (crypto::rpa_resolve(stolen->irk, host_.addresses_used().back()) &&
      stolen->identity == host_.identity()) {
    succeed("clone won the race and stole the IRK");
  } else {
    fail("stolen IRK does not resolve the mobile's RPA");
  }
}

ScenarioReport Run::execute() {
  if (!prelude()) {
    fail("honest pairing did not complete");
  } else {
    switch (config_.id) {
      case ScenarioId::kFalseDataInjection:
        false_data_injection();
        break;
      case ScenarioId::kSpoofSensitiveInfo:
        spoof_sensitive_info();
        break;
      case ScenarioId::kIrkTheft:
        irk_theft();
        break;
      case ScenarioId::kDosDeadlock:
        dos_deadlock();
        break;
      case ScenarioId::kPassiveEavesdrop:
        passive_eavesdrop();
        break;
      case ScenarioId::kWhitelistBypass:
        whitelist_bypass();
        break;
      case ScenarioId::kKeyboardMitm:
        keyboard_mitm();
        break;
      case ScenarioId::kPasskeyPhysicalAccessMitm:
        passkey_physical_access_mitm();
        break;
      case ScenarioId::kNumericComparisonDefense:
        numeric_comparison_defense();
        break;
      case ScenarioId::kTiScOnlyBypass:
        ti_sc_only_bypass();
        break;
      case ScenarioId::kAdvRace:
        adv_race();
        break;
    }
  }

  ScenarioReport report;
  report.id = config_.id;
  report.host = config_.host;
  report.enforce = config_.enforce;
  report.profile = profile_.name;
  report.seed = config_.seed;
  report.verdict = verdict_;
  report.reason = reason_;
  report.artifacts = artifacts_;
  report.facts = facts_;

  std::vector<std::pair<Time, std::string>> events;
  for (const auto& p : host_.prompts()) {
    events.push_back({p.time, p.describe()});
  }
  for (const auto& e : host_.events(kApp)) {
    if (e.kind == host::AppEvent::Kind::kError) {
      events.push_back({e.time, e.describe()});
    }
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& [time, text] : events) {
    report.security_events.push_back(stamp(time) + " " + text);
  }

  std::vector<std::pair<Time, std::string>> lines;
  for (const auto& t : medium_.trace()) lines.push_back({t.time, t.to_line()});
  for (const auto& [time, text] : steps_) {
    lines.push_back(
        {time, link::TraceLine{time, "script", "-", text}.to_line()});
  }
  std::stable_sort(lines.begin(), lines.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& [time, text] : lines) report.transcript.push_back(std::move(text));
  report.sniffer = medium_.sniffer().records();
  return report;
}

}  // namespace

ScenarioReport run(const ScenarioConfig& config) {
  DeviceProfile profile = resolve_config(config);
  Run scenario(config, std::move(profile));
  return scenario.execute();
}

}  // namespace scosim::scenarios
