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
 *  Scripted peer devices. A Peripheral serves its attribute table, keeps
 *  bonds keyed by the master's identity, enforces its whitelist and runs
 *  one of the built-in behaviors:
 *
 *    BpMonitor   publishes "sys=..;dia=..;pul=.." readings.
 *    SmartLight  obeys commands only on a link that wrote the password.
 *    Keyboard    types into a pending passkey prompt, otherwise sends
 *                keystroke notifications.
 *
 *  FakeDevice is the attacker's clone: same address, name and table, with
 *  the permissions, I/O and MITM flag the attacker picks and no stored keys.
 *
 ******************************************************************************/

#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "scosim/att/server.hpp"
#include "scosim/link/medium.hpp"
#include "scosim/peripherals/profile.hpp"
#include "scosim/smp/user_agent.hpp"

namespace scosim::peripherals {

struct PeerBond {
  DeviceAddress identity;
  std::optional<crypto::Irk> irk;
  crypto::Ltk ltk{};
  bool authenticated = false;
};

struct CapturedWrite {
  link::Time time = 0;
  DeviceAddress from;
  att::Uuid uuid;
  Bytes value;
  bool encrypted = false;
};

struct PairingRecord {
  link::Time time = 0;
  DeviceAddress master;
  std::optional<PairingMethod> method;
  std::optional<SecurityError> error;
  bool authenticated = false;
};

struct BpReading {
  int systolic = 0;
  int diastolic = 0;
  int pulse = 0;

  std::string to_text() const;
  static std::optional<BpReading> parse(std::string_view text);
  bool operator==(const BpReading&) const = default;
};

class Peripheral : public link::LinkAgent {
 public:
  Peripheral(link::Medium& medium, DeviceProfile profile);

  const DeviceProfile& profile() const { return profile_; }
  link::DeviceId device_id() const { return device_; }
  att::AttributeServer& server() { return server_; }
  const att::AttributeServer& server() const { return server_; }
  link::Medium& medium() { return medium_; }

  // The person standing at the device.
  smp::UserAgent& user() { return user_; }

  void start_advertising();
  void start_advertising(double frequency_hz);
  void stop_advertising();
  // Drops every link and stops advertising.
  void power_off();

  // Physical pairing button: the whitelist is bypassed while held.
  void set_pairing_mode(bool on) { pairing_mode_ = on; }

  const std::vector<PeerBond>& bonds() const { return bonds_; }
  const PeerBond* bond_for(const DeviceAddress& on_air) const;
  void forget_bonds() { bonds_.clear(); }

  std::vector<link::ConnectionId> connections() const;
  std::optional<uint32_t> displayed_value() const;
  bool awaiting_passkey() const;

  // Sets the value and notifies every subscribed link whose security
  // satisfies the permission. Returns the number of notifications sent.
  size_t notify(const att::Uuid& uuid, BytesView value);

  const std::vector<CapturedWrite>& writes() const { return writes_; }
  const std::vector<PairingRecord>& pairings() const { return pairings_; }
  const std::vector<smp::ReceivedIdentity>& received_identities() const {
    return identities_;
  }
  size_t rejected_connections() const { return rejected_; }

  // BpMonitor.
  size_t publish_reading(const BpReading& reading);
  // SmartLight.
  const std::string& light_state() const { return light_state_; }
  const std::vector<std::string>& accepted_commands() const {
    return accepted_commands_;
  }
  const std::vector<std::string>& rejected_commands() const {
    return rejected_commands_;
  }
  // Keyboard: digits go to a pending passkey prompt, anything else becomes
  // one notification per character.
  void type_text(std::string_view text);

  // LinkAgent.
  std::string label() const override { return profile_.name; }
  bool accept_connection(const DeviceAddress& master) override;
  size_t slot_limit() const override { return profile_.slot_limit; }
  std::optional<link::LtkRecord> ltk_for(link::ConnectionId id) override;
  void on_connected(link::ConnectionId id) override;
  void on_disconnected(link::ConnectionId id,
                       link::DisconnectReason reason) override;
  void on_att(link::ConnectionId id, const att::Pdu& pdu) override;
  smp::SessionConfig pairing_config(link::ConnectionId id,
                                    smp::Role role) override;
  const smp::UserAgent* user_agent(link::ConnectionId id) override;
  void on_pairing_event(link::ConnectionId id,
                        const link::PairingEvent& event) override;

 protected:
  virtual void after_write(link::ConnectionId id, const att::Uuid& uuid,
                           const Bytes& value);
  DeviceAddress master_address(link::ConnectionId id) const;
  std::vector<link::KnownIdentity> whitelist() const;

  link::Medium& medium_;
  DeviceProfile profile_;
  link::DeviceId device_;
  att::AttributeServer server_;
  smp::UserAgent user_;
  bool pairing_mode_ = false;
  std::vector<PeerBond> bonds_;
  std::map<link::ConnectionId, link::LtkRecord> pending_;
  std::map<link::ConnectionId, std::set<uint16_t>> subscriptions_;
  std::set<link::ConnectionId> live_;
  std::set<link::ConnectionId> password_ok_;
  std::vector<CapturedWrite> writes_;
  std::vector<PairingRecord> pairings_;
  std::vector<smp::ReceivedIdentity> identities_;
  size_t rejected_ = 0;
  std::string light_state_ = "off";
  std::vector<std::string> accepted_commands_;
  std::vector<std::string> rejected_commands_;
};

struct FakeOptions {
  att::Permission permission = att::Permission::kOpen;
  IoCapability io = IoCapability::kNoInputNoOutput;
  bool mitm = false;
  double adv_frequency_hz = link::kMaxAdvertisingHz;
};

// Same name, address and table as the victim with the attacker's choices
// applied. No whitelist, no SC-only mode, no keys.
DeviceProfile clone_profile(const DeviceProfile& victim,
                            const FakeOptions& options);

class FakeDevice : public Peripheral {
 public:
  FakeDevice(link::Medium& medium, const DeviceProfile& victim,
             const FakeOptions& options);

  // Stolen identity keys delivered by masters during pairing.
  std::optional<smp::ReceivedIdentity> stolen_identity() const;
  std::vector<std::string> captured_text(const att::Uuid& uuid) const;

  // Relay input: completes a pending passkey prompt once six digits have
  // arrived, otherwise forwards as keystroke notifications.
  void relay_input(std::string_view text);
  std::optional<uint32_t> relayed_passkey() const { return relayed_passkey_; }

  smp::SessionConfig pairing_config(link::ConnectionId id,
                                    smp::Role role) override;

 private:
  std::string digits_;
  std::optional<uint32_t> relayed_passkey_;
};

}  // namespace scosim::peripherals
