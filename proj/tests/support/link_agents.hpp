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

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "scosim/link/medium.hpp"

namespace scosim::testing {

// Scriptable link agent that records what happens to it.
class TestAgent : public link::LinkAgent {
 public:
  explicit TestAgent(std::string name) : name_(std::move(name)) {}

  std::string label() const override { return name_; }
  bool accept_connection(const DeviceAddress& master) override {
    return !filter || filter(master);
  }
  size_t slot_limit() const override { return slots; }
  std::optional<link::LtkRecord> ltk_for(link::ConnectionId) override {
    return ltk;
  }
  void on_connected(link::ConnectionId id) override {
    connected.push_back(id);
  }
  void on_disconnected(link::ConnectionId id,
                       link::DisconnectReason reason) override {
    disconnected.push_back({id, reason});
  }
  void on_att(link::ConnectionId id, const att::Pdu& pdu) override {
    received.push_back(pdu);
    if (on_att_hook) on_att_hook(id, pdu);
  }
  void on_encryption_changed(link::ConnectionId,
                             link::EncryptionResult result) override {
    encryption.push_back(result);
  }
  void on_security_request(link::ConnectionId id,
                           const PairingFeatures&) override {
    security_requests.push_back(id);
  }
  smp::SessionConfig pairing_config(link::ConnectionId,
                                    smp::Role) override {
    return config;
  }
  const smp::UserAgent* user_agent(link::ConnectionId) override {
    return user ? &*user : nullptr;
  }
  void on_pairing_event(link::ConnectionId,
                        const link::PairingEvent& e) override {
    events.push_back(e.kind);
    if (e.kind == link::PairingEvent::Kind::kAuth2Done && e.keys) {
      ltk = link::LtkRecord{e.keys->ltk, e.keys->authenticated};
    }
    if (e.kind == link::PairingEvent::Kind::kKeysDistributed) {
      peer_identity = e.peer_identity;
    }
    if (e.error) last_error = e.error;
  }

  bool saw(link::PairingEvent::Kind kind) const {
    for (auto k : events) {
      if (k == kind) return true;
    }
    return false;
  }

  size_t slots = 1;
  std::function<bool(const DeviceAddress&)> filter;
  std::optional<link::LtkRecord> ltk;
  smp::SessionConfig config;
  std::optional<smp::UserAgent> user;
  std::function<void(link::ConnectionId, const att::Pdu&)> on_att_hook;

  std::vector<link::ConnectionId> connected;
  std::vector<std::pair<link::ConnectionId, link::DisconnectReason>>
      disconnected;
  std::vector<att::Pdu> received;
  std::vector<link::EncryptionResult> encryption;
  std::vector<link::ConnectionId> security_requests;
  std::vector<link::PairingEvent::Kind> events;
  std::optional<smp::ReceivedIdentity> peer_identity;
  std::optional<SecurityError> last_error;

 private:
  std::string name_;
};

// Connects synchronously by running the scheduler until the attempt ends.
inline link::ConnectResult connect_now(link::Medium& medium,
                                       link::DeviceId master,
                                       const DeviceAddress& own,
                                       const DeviceAddress& target) {
  std::optional<link::ConnectResult> out;
  medium.connect(master, own, target,
                 [&out](const link::ConnectResult& r) { out = r; });
  while (!out && medium.scheduler().run_one()) {
  }
  return *out;
}

}  // namespace scosim::testing
