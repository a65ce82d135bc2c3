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

#include "pairing_run.hpp"

namespace scosim::link {

using Kind = PairingEvent::Kind;

PairingRun::PairingRun(Medium& medium, ConnectionId id)
    : medium_(medium), id_(id) {
  const Connection& c = *medium_.connection(id);
  const smp::Endpoints endpoints{c.master_address, c.slave_address};
  const DeviceId devices[2] = {c.master, c.slave};
  const smp::Role roles[2] = {smp::Role::kInitiator, smp::Role::kResponder};
  for (int i = 0; i < 2; ++i) {
    sides_[i].run = this;
    sides_[i].index = i;
    sides_[i].device = devices[i];
    sessions_[i] = std::make_unique<smp::PairingSession>(
        roles[i], medium_.agent(devices[i]).pairing_config(id, roles[i]),
        endpoints, medium_.scheduler().rng(), sides_[i]);
  }
}

void PairingRun::start() {
  timeout_ = medium_.scheduler().schedule(kPairingTimeout, [this, weak =
                                          std::weak_ptr<bool>(token_)] {
    if (weak.expired() || finished_) return;
    timeout_.reset();
    for (int i = 0; i < 2; ++i) {
      PairingEvent e;
      e.kind = Kind::kTimeout;
      notify(i, e);
    }
    finish();
  });
  session(0).start();
}

void PairingRun::on_pdu(DeviceId to, const smp::Pdu& pdu) {
  if (finished_) return;
  const int i = index_of(to);
  if (i >= 0) session(i).on_pdu(pdu);
}

bool PairingRun::enter_passkey(DeviceId device, uint32_t passkey) {
  const int i = index_of(device);
  if (finished_ || i < 0 || !session(i).awaiting_passkey()) return false;
  session(i).on_passkey_entered(passkey);
  return true;
}

bool PairingRun::confirm(DeviceId device, bool accept) {
  const int i = index_of(device);
  if (finished_ || i < 0 || !session(i).awaiting_confirmation()) return false;
  session(i).on_user_confirm(accept);
  return true;
}

std::optional<uint32_t> PairingRun::displayed_value(DeviceId device) const {
  const int i = index_of(device);
  if (finished_ || i < 0) return std::nullopt;
  return sessions_[i]->displayed_value();
}

bool PairingRun::awaiting_passkey(DeviceId device) const {
  const int i = index_of(device);
  return !finished_ && i >= 0 && sessions_[i]->awaiting_passkey();
}

void PairingRun::halt() {
  if (timeout_) medium_.scheduler().cancel(*timeout_);
  timeout_.reset();
  finished_ = true;
}

int PairingRun::index_of(DeviceId device) const {
  for (int i = 0; i < 2; ++i) {
    if (sides_[i].device == device) return i;
  }
  return -1;
}

void PairingRun::notify(int index, PairingEvent event) {
  event.role = index == 0 ? smp::Role::kInitiator : smp::Role::kResponder;
  if (!event.method) event.method = sessions_[index]->negotiated();
  medium_.agent(sides_[index].device).on_pairing_event(id_, event);
}

void PairingRun::later(Time delay, std::function<void()> task) {
  medium_.scheduler().schedule(
      delay, [this, weak = std::weak_ptr<bool>(token_), task = std::move(task)] {
        if (weak.expired() || finished_) return;
        task();
      });
}

void PairingRun::begin_encryption() {
  medium_.start_encryption(id_, [this, weak = std::weak_ptr<bool>(token_)](
                                    EncryptionResult result) {
    if (weak.expired() || finished_) return;
    if (result != EncryptionResult::kEncrypted) {
      for (int i = 0; i < 2; ++i) {
        PairingEvent e;
        e.kind = Kind::kFailed;
        e.error = SecurityError::kPinOrKeyMissing;
        notify(i, e);
      }
      finish();
      return;
    }
    session(0).on_link_encrypted();
    if (!finished_) session(1).on_link_encrypted();
  });
}

void PairingRun::finish() {
  if (finished_) return;
  halt();
  medium_.scheduler().schedule(0, [m = &medium_, id = id_, this] {
    auto it = m->pairings_.find(id);
    if (it != m->pairings_.end() && it->second.get() == this) {
      m->pairings_.erase(it);
    }
  });
}

void PairingRun::Side::send(const smp::Pdu& pdu) {
  run->medium_.send_frame(run->id_, device, Channel::kSmp, pdu.encode());
}

void PairingRun::Side::on_method_negotiated(PairingMethod method) {
  PairingEvent e;
  e.kind = Kind::kMethodNegotiated;
  e.method = method;
  run->notify(index, e);
}

void PairingRun::Side::on_confirm_requested(uint32_t value) {
  PairingEvent e;
  e.kind = Kind::kConfirmRequested;
  e.value = value;
  run->notify(index, e);
  const smp::UserAgent* user = run->medium_.agent(device).user_agent(run->id_);
  if (!user) return;
  run->later(kUserReaction, [r = run, i = index, user, value] {
    if (auto decision = smp::comparison_decision(*user, value)) {
      r->session(i).on_user_confirm(*decision);
    }
  });
}

void PairingRun::Side::on_passkey_displayed(uint32_t passkey) {
  PairingEvent e;
  e.kind = Kind::kPasskeyDisplayed;
  e.value = passkey;
  run->notify(index, e);
  const smp::UserAgent* user = run->medium_.agent(device).user_agent(run->id_);
  if (!user || !user->type_on_device) return;
  run->later(kUserReaction, [user, passkey] { user->type_on_device(passkey); });
}

void PairingRun::Side::on_passkey_requested() {
  PairingEvent e;
  e.kind = Kind::kPasskeyRequested;
  run->notify(index, e);
  const smp::UserAgent* user = run->medium_.agent(device).user_agent(run->id_);
  if (!user) return;
  run->later(kUserReaction, [r = run, i = index, user] {
    if (!r->session(i).awaiting_passkey()) return;
    if (auto passkey = smp::passkey_decision(*user)) {
      r->session(i).on_passkey_entered(*passkey);
    }
  });
}

void PairingRun::Side::on_auth2_done(const KeySet& keys) {
  PairingEvent e;
  e.kind = Kind::kAuth2Done;
  e.keys = keys;
  run->notify(index, e);
  // The initiator reaches this point last and starts encryption with the
  // fresh key.
  if (index == 0 && !run->finished_) run->begin_encryption();
}

void PairingRun::Side::on_keys_distributed() {
  distributed = true;
  PairingEvent e;
  e.kind = Kind::kKeysDistributed;
  e.keys = run->session(index).keys();
  e.peer_identity = run->session(index).peer_identity();
  run->notify(index, e);
  if (run->sides_[0].distributed && run->sides_[1].distributed) run->finish();
}

void PairingRun::Side::on_failed(SecurityError reason, bool local) {
  PairingEvent e;
  e.kind = Kind::kFailed;
  e.error = reason;
  e.local = local;
  run->notify(index, e);
  // The peer hears about it through the Pairing Failed PDU; the run ends
  // once both sides have failed or the sender's PDU cannot arrive.
  if (run->session(0).state() == smp::State::kFailed &&
      run->session(1).state() == smp::State::kFailed) {
    run->finish();
  }
}

}  // namespace scosim::link
