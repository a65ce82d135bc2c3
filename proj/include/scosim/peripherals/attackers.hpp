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
 *  Attacker agents beyond the fake peripheral: a fake mobile that can wear
 *  a stolen identity and IRK, a blocker that fills a victim's connection
 *  slots, and a passive tap over the sniffer log.
 *
 ******************************************************************************/

#pragma once

#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "scosim/att/attribute.hpp"
#include "scosim/link/medium.hpp"
#include "scosim/peripherals/device.hpp"
#include "scosim/smp/user_agent.hpp"

namespace scosim::peripherals {

struct FakeMobileOptions {
  std::string label = "fake-mobile";
  DeviceAddress identity = DeviceAddress::public_identity(0x0BADC0FFEE00);
  IoCapability io = IoCapability::kNoInputNoOutput;
  bool mitm = false;
};

struct GattRecord {
  link::Time time = 0;
  att::Uuid uuid;
  std::optional<att::ErrorCode> status;
  Bytes value;
};

class FakeMobile : public link::LinkAgent {
 public:
  FakeMobile(link::Medium& medium, FakeMobileOptions options);

  // Connects as `identity`, using RPAs under `irk` when one is given.
  void assume_identity(const DeviceAddress& identity,
                       std::optional<crypto::Irk> irk);

  void connect(const DeviceAddress& target);
  void disconnect();
  void pair();
  void read(const att::Uuid& uuid);
  void write(const att::Uuid& uuid, BytesView value);
  void subscribe(const att::Uuid& uuid);

  link::DeviceId device_id() const { return device_; }
  smp::UserAgent& user() { return user_; }
  std::optional<link::ConnectionId> connection() const { return id_; }
  bool connected() const;
  bool ready() const { return id_ && discovered_; }
  std::optional<link::ConnectError> connect_error() const {
    return connect_error_;
  }
  std::optional<att::LinkSecurityState> security() const;
  std::optional<uint32_t> displayed_value() const;
  bool awaiting_passkey() const;

  const std::vector<GattRecord>& results() const { return results_; }
  const std::vector<GattRecord>& notifications() const {
    return notifications_;
  }
  // Notification payloads on `uuid`, concatenated.
  std::string received_text(const att::Uuid& uuid) const;
  std::optional<PairingMethod> paired_method() const { return method_; }
  bool paired() const { return paired_; }
  std::optional<SecurityError> pairing_error() const { return error_; }
  const std::vector<DeviceAddress>& addresses_used() const {
    return addresses_used_;
  }

  // Called for every notification, used to relay traffic.
  std::function<void(const att::Uuid&, const Bytes&)> on_notification;

  // LinkAgent.
  std::string label() const override { return options_.label; }
  std::optional<link::LtkRecord> ltk_for(link::ConnectionId id) override;
  void on_disconnected(link::ConnectionId id,
                       link::DisconnectReason reason) override;
  void on_att(link::ConnectionId id, const att::Pdu& pdu) override;
  void on_encryption_changed(link::ConnectionId id,
                             link::EncryptionResult result) override;
  smp::SessionConfig pairing_config(link::ConnectionId id,
                                    smp::Role role) override;
  const smp::UserAgent* user_agent(link::ConnectionId id) override;
  void on_pairing_event(link::ConnectionId id,
                        const link::PairingEvent& event) override;

 private:
  struct Op {
    enum class Kind : uint8_t { kRead, kWrite, kSubscribe };
    Kind kind = Kind::kRead;
    att::Uuid uuid;
    Bytes value;
  };

  void pump();
  void finish(std::optional<att::ErrorCode> status, Bytes value);

  link::Medium& medium_;
  FakeMobileOptions options_;
  link::DeviceId device_;
  smp::UserAgent user_;
  std::optional<crypto::Irk> irk_;
  std::optional<link::ConnectionId> id_;
  std::optional<link::ConnectError> connect_error_;
  bool discovered_ = false;
  bool pairing_ = false;
  bool paired_ = false;
  std::optional<PairingMethod> method_;
  std::optional<SecurityError> error_;
  std::optional<link::LtkRecord> ltk_;
  std::map<att::Uuid, uint16_t> handles_;
  std::map<uint16_t, att::Uuid> uuids_;
  std::deque<Op> ops_;
  std::optional<Op> in_flight_;
  std::vector<GattRecord> results_;
  std::vector<GattRecord> notifications_;
  std::vector<DeviceAddress> addresses_used_;
};

// Occupies connection slots of a target so the victim mobile cannot reach
// it.
class Blocker : public link::LinkAgent {
 public:
  explicit Blocker(link::Medium& medium, std::string label = "blocker");

  // Starts `count` connection attempts; each one that lands holds a slot.
  void block(const DeviceAddress& target, size_t count);
  void release();
  size_t held() const { return held_.size(); }

  std::string label() const override { return label_; }
  void on_disconnected(link::ConnectionId id,
                       link::DisconnectReason reason) override;

 private:
  link::Medium& medium_;
  std::string label_;
  link::DeviceId device_;
  std::vector<link::ConnectionId> held_;
  uint64_t next_address_ = 0xB10C'0000'0000;
};

// Passive view over everything the sniffer captured.
class SnifferTap {
 public:
  explicit SnifferTap(const link::SnifferLog& log) : log_(log) {}

  // Plaintext ATT values as text.
  std::vector<std::string> plaintext_values() const;
  std::vector<BpReading> readings() const;
  bool saw_plaintext(std::string_view text) const;
  size_t encrypted_frames() const;

 private:
  const link::SnifferLog& log_;
};

// Zero-padded six-digit rendering of a passkey or comparison value.
std::string six_digits(uint32_t value);

}  // namespace scosim::peripherals
