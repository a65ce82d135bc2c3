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

#include <memory>
#include <optional>

#include "scosim/link/medium.hpp"
#include "scosim/smp/session.hpp"

namespace scosim::link {

// One pairing attempt on one connection. Side 0 is the master (initiator),
// side 1 the slave (responder).
class PairingRun {
 public:
  PairingRun(Medium& medium, ConnectionId id);

  void start();
  void on_pdu(DeviceId to, const smp::Pdu& pdu);

  bool enter_passkey(DeviceId device, uint32_t passkey);
  bool confirm(DeviceId device, bool accept);
  std::optional<uint32_t> displayed_value(DeviceId device) const;
  bool awaiting_passkey(DeviceId device) const;

  bool finished() const { return finished_; }
  // Stops reacting to anything; used when the link goes away.
  void halt();

 private:
  struct Side : smp::SessionListener {
    PairingRun* run = nullptr;
    int index = 0;
    DeviceId device = 0;
    bool distributed = false;

    void send(const smp::Pdu& pdu) override;
    void on_method_negotiated(PairingMethod method) override;
    void on_confirm_requested(uint32_t value) override;
    void on_passkey_displayed(uint32_t passkey) override;
    void on_passkey_requested() override;
    void on_auth2_done(const KeySet& keys) override;
    void on_keys_distributed() override;
    void on_failed(SecurityError reason, bool local) override;
  };

  int index_of(DeviceId device) const;
  smp::PairingSession& session(int index) { return *sessions_[index]; }
  void notify(int index, PairingEvent event);
  // Runs `task` after `delay` unless the run is gone or halted by then.
  void later(Time delay, std::function<void()> task);
  void begin_encryption();
  void finish();

  Medium& medium_;
  ConnectionId id_;
  Side sides_[2];
  std::unique_ptr<smp::PairingSession> sessions_[2];
  std::shared_ptr<bool> token_ = std::make_shared<bool>(true);
  std::optional<Scheduler::TaskId> timeout_;
  bool finished_ = false;
};

}  // namespace scosim::link
